"""Enumeration and certification of nonzero idempotents.

Three routes: a closed form for C_n, batched Newton iteration over C from
seeded random starts, and exhaustive search over F_p^n. The genericity test
and the Euler-Jacobi syzygies consume the resulting sets.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Callable

import numpy as np

from . import linalg
from .algebra import Algebra, eigen, idempotent_residual, is_2nilpotent, is_idempotent, prime_eigen
from .errors import (
    DegreeTooHigh,
    HalfEigenvalue,
    IncompleteSet,
    NotAnIdempotent,
    PrimeFieldUnsupported,
    SearchSpaceTooLarge,
)
from .scalar import DEFAULT_TOL, FieldDescriptor, Tolerance, array_from_json, array_to_json, half, root_powers

CLOSED_FORM = "closed-form"
NEWTON = "newton"
BRUTE_FORCE = "brute"

DEFAULT_SEED = 20240101
BRUTE_LIMIT = 10**7


def canonical_key(v: np.ndarray, field: FieldDescriptor):
    if field.is_prime:
        return tuple(int(x) for x in v)
    key = []
    for x in v:
        key.append(round(float(x.real), 6) + 0.0)
        key.append(round(float(x.imag), 6) + 0.0)
    return tuple(key)


@dataclass
class IdempotentSet:
    algebra: Algebra
    elements: np.ndarray
    residuals: np.ndarray
    method: str
    complete: bool
    notes: list = dc_field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @property
    def expected(self) -> int:
        return 2**self.algebra.dim - 1

    def index_of(self, v, tol: Tolerance = DEFAULT_TOL) -> int | None:
        f = self.algebra.field
        if len(self.elements) == 0:
            return None
        if f.is_prime:
            hits = np.nonzero(np.all(self.elements == np.mod(v, f.p), axis=1))[0]
            return int(hits[0]) if hits.size else None
        d = np.max(np.abs(self.elements - v), axis=1)
        k = int(np.argmin(d))
        return k if d[k] <= tol.dedupe_tol else None

    def to_json(self) -> dict:
        f = self.algebra.field
        return {
            "method": self.method,
            "complete": bool(self.complete),
            "field": f.to_json(),
            "elements": array_to_json(self.elements, f) if len(self.elements) else [],
            "residuals": [float(r) for r in self.residuals],
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, d: dict, algebra: Algebra) -> "IdempotentSet":
        f = algebra.field
        els = array_from_json(d["elements"], f) if d["elements"] else f.zeros((0, algebra.dim))
        return cls(algebra, els.reshape(-1, algebra.dim), np.asarray(d["residuals"], dtype=float),
                   d["method"], d["complete"], d.get("notes", []))

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path, algebra: Algebra) -> "IdempotentSet":
        return cls.from_json(json.loads(Path(path).read_text()), algebra)


def make_set(A: Algebra, vectors, method: str, complete: bool, notes=None) -> IdempotentSet:
    """Canonically order vectors and attach residuals."""
    f = A.field
    vecs = sorted((f.array(v) for v in vectors), key=lambda v: canonical_key(v, f))
    els = np.array(vecs, dtype=f.dtype).reshape(-1, A.dim)
    res = np.array([idempotent_residual(A, v) for v in els])
    return IdempotentSet(A, els, res, method, complete, list(notes or []))


def _dedupe(vectors, tol: float):
    kept: list[np.ndarray] = []
    for v in vectors:
        if all(np.max(np.abs(v - w)) > tol for w in kept):
            kept.append(v)
    return kept


def enumerate_closed_form_Cn(n: int, A: Algebra | None = None) -> IdempotentSet:
    """All 2^n - 1 nonzero idempotents of C_n over C.

    An idempotent p is fixed by its values v_k = p(eps^k), which obey
    v_(k+1)^2 = v_k; over the (2^n - 1)-th roots of unity omega these are
    v_k = omega^(j 2^((n-1)k)). Coefficients follow by inverse DFT.
    """
    from .models import build_Cn

    if A is None:
        A = build_Cn(n)
    if A.field.is_prime:
        raise PrimeFieldUnsupported("closed form is over C")
    N = 2**n - 1
    eps = root_powers(n)
    k = np.arange(n)
    # inverse DFT: x_m = (1/n) sum_k v_k eps^(-mk)
    idft = np.conj(eps[np.outer(k, k) % n]) / n
    out = []
    for j in range(1, N + 1):
        expo = np.array([(j * pow(2, (n - 1) * kk, N)) % N for kk in range(n)])
        v = np.exp(2j * np.pi * expo / N)
        out.append(idft @ v)
    return make_set(A, out, CLOSED_FORM, True)


def _newton_batch(A: Algebra, X: np.ndarray, tol: Tolerance, max_iter: int = 100):
    n = A.dim
    eye = np.eye(n)
    G = A.gamma
    done = np.zeros(len(X), dtype=bool)
    for _ in range(max_iter):
        F = A.mul_batch(X, X) - X
        res = np.linalg.norm(F, axis=1)
        done = res < tol.newton_tol
        if done.all():
            break
        L = np.einsum("bi,ijk->bkj", X, G)
        J = 2 * L - eye
        with np.errstate(all="ignore"):
            try:
                step = np.linalg.solve(J, F[:, :, None])[:, :, 0]
            except np.linalg.LinAlgError:
                step = np.stack([np.linalg.lstsq(j, f, rcond=None)[0] for j, f in zip(J, F)])
        step[done] = 0
        X = X - step
        X[~np.isfinite(X).all(axis=1)] = np.nan
    F = A.mul_batch(X, X) - X
    res = np.linalg.norm(F, axis=1)
    ok = np.isfinite(res) & (res < tol.newton_tol)
    return X[ok]


def enumerate_newton(A: Algebra, seed: int = DEFAULT_SEED, budget: int | None = None,
                     tol: Tolerance = DEFAULT_TOL, batch: int = 256) -> IdempotentSet:
    """Newton on F(x) = x x - x (Jacobian 2 L_x - I) from complex Gaussian starts.

    The set is complete when exactly 2^n - 1 distinct nonzero roots are found
    and none has a singular Jacobian; any extra root or singular root marks
    the algebra non-generic.
    """
    if A.field.is_prime:
        raise PrimeFieldUnsupported("Newton iteration runs over C")
    n = A.dim
    expected = 2**n - 1
    if budget is None:
        budget = 200 * 2**n
    rng = np.random.default_rng(seed)
    found = np.zeros((0, n), dtype=np.complex128)
    started = 0
    while started < budget:
        b = min(batch, budget - started)
        X0 = rng.standard_normal((b, n)) + 1j * rng.standard_normal((b, n))
        started += b
        for r in _newton_batch(A, X0, tol):
            if np.max(np.abs(r)) <= tol.dedupe_tol:
                continue
            if found.shape[0] == 0 or np.min(np.max(np.abs(found - r), axis=1)) > tol.dedupe_tol:
                found = np.vstack([found, r])
    roots = list(found)
    notes = []
    singular = 0
    for r in roots:
        J = 2 * A.L(r) - np.eye(n)
        if np.linalg.svd(J, compute_uv=False)[-1] < 1e-8:
            singular += 1
    if singular:
        notes.append(f"SingularJacobian at {singular} converged root(s): algebra is not generic")
    if len(roots) > expected:
        notes.append(f"found {len(roots)} > 2^n - 1 = {expected} roots: infinitely many idempotents likely")
    complete = len(roots) == expected and singular == 0
    return make_set(A, roots, NEWTON, complete, notes)


def _all_vectors(p: int, n: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[:, i] = idx % p
        idx //= p
    return out


def _brute_search(A: Algebra, predicate, chunk: int = 1 << 18):
    p, n = A.field.p, A.dim
    total = p**n
    if total > BRUTE_LIMIT:
        raise SearchSpaceTooLarge(f"p^n = {total} exceeds {BRUTE_LIMIT}")
    hits = []
    for s in range(1, total, chunk):  # skip the zero vector
        X = _all_vectors(p, n, s, min(total, s + chunk))
        sq = A.mul_batch(X, X)
        hits.extend(X[predicate(X, sq)])
    return hits


def enumerate_brute_force(A: Algebra) -> IdempotentSet:
    if not A.field.is_prime:
        raise PrimeFieldUnsupported("brute force needs a prime field")
    hits = _brute_search(A, lambda X, sq: np.all(sq == X, axis=1))
    return make_set(A, hits, BRUTE_FORCE, True)


def enumerate_auto(A: Algebra, seed: int = DEFAULT_SEED) -> IdempotentSet:
    if A.field.is_prime:
        return enumerate_brute_force(A)
    if A.meta.get("model") == "Cn":
        return enumerate_closed_form_Cn(A.meta["n"], A)
    return enumerate_newton(A, seed=seed)


@dataclass
class GenericityReport:
    count: int
    expected: int
    half_in_spectrum: bool
    nilpotent_found: np.ndarray | None
    verdict: bool

    def to_json(self) -> dict:
        nil = None
        if self.nilpotent_found is not None:
            nil = [[float(np.real(x)), float(np.imag(x))] for x in self.nilpotent_found]
        return {"count": self.count, "expected": self.expected,
                "half_in_spectrum": self.half_in_spectrum, "nilpotent_found": nil,
                "verdict": self.verdict}


def find_2nilpotent(A: Algebra, seed: int = DEFAULT_SEED, starts: int | None = None,
                    tol: Tolerance = DEFAULT_TOL):
    """A nonzero x with x x = 0, or None.

    Exhaustive over F_p. Over C: Gauss-Newton on (x x, a.x - 1) with a random
    normalising functional a; nilpotents form a cone, so the affine slice
    a.x = 1 meets every nonzero line not in ker a.
    """
    if A.field.is_prime:
        hits = _brute_search(A, lambda X, sq: np.all(sq == 0, axis=1))
        return hits[0] if hits else None
    n = A.dim
    rng = np.random.default_rng(seed)
    starts = starts or 20 * n
    for _ in range(starts):
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x = x / (a @ x)
        for _ in range(60):
            F = np.concatenate([A.mul(x, x), [a @ x - 1]])
            J = np.vstack([2 * A.L(x), a[None, :]])
            step, *_ = np.linalg.lstsq(J, F, rcond=None)
            x = x - step
            if np.linalg.norm(step) < 1e-14 * max(1.0, np.linalg.norm(x)):
                break
        if np.all(np.isfinite(x)) and is_2nilpotent(x, tol, algebra=A):
            return x
    return None


def _has_half(A: Algebra, c, tol: Tolerance) -> bool:
    L = A.L(c)
    if A.field.is_prime:
        roots, _ = prime_eigen(L, A.field)
        return any(r == half(A.field) for r, _ in roots)
    return any(abs(lam - 0.5) <= 1e-7 for lam, _, _ in eigen(L, tol))


def check_generic(A: Algebra, idm: IdempotentSet, tol: Tolerance = DEFAULT_TOL,
                  seed: int = DEFAULT_SEED) -> GenericityReport:
    if not idm.complete:
        raise IncompleteSet("genericity needs a complete idempotent set")
    half_in = any(_has_half(A, c, tol) for c in idm.elements)
    nil = find_2nilpotent(A, seed=seed, tol=tol)
    expected = 2**A.dim - 1
    verdict = len(idm) == expected and not half_in and nil is None
    return GenericityReport(len(idm), expected, half_in, nil, verdict)


def char_poly_at(A: Algebra, c, t):
    """chi_c(t) = det(L_c - t I)."""
    return linalg.poly_eval(linalg.char_poly(A.L(c), A.field), t, A.field)


def syzygy_charpoly(A: Algebra, idm: IdempotentSet, t_samples) -> float:
    """max_t | sum_c chi_c(t)/chi_c(1/2) - 2^n (1 - t^n) |."""
    if not idm.complete:
        raise IncompleteSet("syzygies need a complete idempotent set")
    if A.field.is_prime:
        raise PrimeFieldUnsupported("charpoly syzygy is evaluated over C")
    n = A.dim
    polys = [linalg.char_poly(A.L(c), A.field) for c in idm.elements]
    halves = [linalg.poly_eval(pc, 0.5, A.field) for pc in polys]
    if any(abs(h) <= 1e-12 for h in halves):
        raise HalfEigenvalue("1/2 is an eigenvalue of some idempotent")
    worst = 0.0
    for t in t_samples:
        s = sum(linalg.poly_eval(pc, t, A.field) / h for pc, h in zip(polys, halves))
        worst = max(worst, abs(s - 2**n * (1 - t**n)))
    return worst


def syzygy_moment(A: Algebra, idm: IdempotentSet, H: Callable, degree: int,
                  weighted: bool = False) -> float:
    """|| sum_c H(c) || (isospectral form) or || sum_c H(c)/chi_c(1/2) || (weighted).

    The zero idempotent contributes H(0) = 0 for homogeneous H and is skipped.
    """
    if not idm.complete:
        raise IncompleteSet("syzygies need a complete idempotent set")
    n = A.dim
    if degree > n - 1 or (not weighted and degree < 1):
        raise DegreeTooHigh(f"degree {degree} outside the admissible range for n = {n}")
    total = 0
    for c in idm.elements:
        h = np.asarray(H(c))
        if weighted:
            h = h / char_poly_at(A, c, 0.5)
        total = total + h
    return float(np.linalg.norm(total))


def cyclotomic_orbit(A: Algebra, p, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """The idempotents p(eps^k z), k = 0..n-1, duplicates collapsed."""
    if A.meta.get("model") != "Cn":
        raise ValueError("orbit is defined on a C_n instance")
    ok, r = is_idempotent(p, tol, algebra=A)
    if not ok:
        raise NotAnIdempotent(f"residual {r:.3g}")
    n = A.dim
    eps = root_powers(n, A.field)
    m = np.arange(n)
    images = [A.field.reduce(p * eps[(m * k) % n]) for k in range(n)]
    if A.field.is_prime:
        uniq = []
        for v in images:
            if not any(np.array_equal(v, u) for u in uniq):
                uniq.append(v)
        return uniq
    return _dedupe(images, tol.dedupe_tol)
