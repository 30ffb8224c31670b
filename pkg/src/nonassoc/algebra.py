"""Commutative nonassociative algebras given by structure constants.

``gamma[i, j, k]`` is the coefficient of e_k in e_i e_j. Elements are
coefficient vectors (numpy arrays); :class:`Element` wraps one with its
algebra for operator-style use.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import linalg
from .errors import (
    AlgebraMismatch,
    NonCommutative,
    NotAnIdeal,
    PrimeFieldUnsupported,
    ZeroInput,
)
from .scalar import (
    COMPLEX_FIELD,
    DEFAULT_TOL,
    FieldDescriptor,
    Tolerance,
    array_from_json,
    array_to_json,
)


@dataclass(frozen=True, eq=False)
class Algebra:
    field: FieldDescriptor
    gamma: np.ndarray
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        g = self.field.array(self.gamma)
        if g.ndim != 3 or not (g.shape[0] == g.shape[1] == g.shape[2]) or g.shape[0] < 1:
            raise ValueError(f"gamma must be n x n x n, got {g.shape}")
        if self.field.is_prime:
            bad = np.any(g != g.transpose(1, 0, 2))
        else:
            bad = np.max(np.abs(g - g.transpose(1, 0, 2)), initial=0.0) > 0
        if bad:
            i, j, k = np.argwhere(g != g.transpose(1, 0, 2))[0]
            raise NonCommutative(f"gamma[{i}][{j}][{k}] != gamma[{j}][{i}][{k}]")
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def __repr__(self):
        name = self.meta.get("model", "Algebra")
        return f"<{name} dim={self.dim} over {self.field}>"

    # -- raw vector operations ------------------------------------------------
    def mul(self, x, y) -> np.ndarray:
        if self.field.is_prime:
            p = self.field.p
            t = np.mod(np.tensordot(np.asarray(x, dtype=np.int64), self.gamma, axes=(0, 0)), p)
            return np.mod(np.asarray(y, dtype=np.int64) @ t, p)
        return np.einsum("i,j,ijk->k", x, y, self.gamma)

    def mul_batch(self, xs, ys) -> np.ndarray:
        """Row-wise products of two stacks of vectors."""
        if self.field.is_prime:
            p = self.field.p
            t = np.mod(np.einsum("bi,ijk->bjk", xs, self.gamma), p)
            return np.mod(np.einsum("bj,bjk->bk", ys, t), p)
        return np.einsum("bi,bj,ijk->bk", xs, ys, self.gamma)

    def L(self, x) -> np.ndarray:
        """Matrix of y -> x y acting on coefficient columns: L[k, j] = sum_i x_i gamma[i, j, k]."""
        if self.field.is_prime:
            return np.mod(np.tensordot(np.asarray(x, dtype=np.int64), self.gamma, axes=(0, 0)).T, self.field.p)
        return np.tensordot(x, self.gamma, axes=(0, 0)).T

    def basis(self, i: int) -> np.ndarray:
        e = self.field.zeros(self.dim)
        e[i] = 1
        return e

    def element(self, coeffs) -> "Element":
        return Element(self, coeffs)

    def zero(self) -> "Element":
        return Element(self, self.field.zeros(self.dim))

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        d = {
            "field": self.field.to_json(),
            "dim": self.dim,
            "gamma": array_to_json(self.gamma, self.field),
        }
        if self.meta:
            d["meta"] = self.meta
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Algebra":
        f = FieldDescriptor.from_json(d["field"])
        g = array_from_json(d["gamma"], f)
        if g.shape != (d["dim"],) * 3:
            raise ValueError(f"gamma shape {g.shape} does not match dim {d['dim']}")
        return cls(f, g, d.get("meta", {}))

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path) -> "Algebra":
        return cls.from_json(json.loads(Path(path).read_text()))


class Element:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: Algebra, coeffs):
        c = algebra.field.array(coeffs)
        if c.shape != (algebra.dim,):
            raise ValueError(f"expected {algebra.dim} coefficients, got shape {c.shape}")
        self.algebra = algebra
        self.coeffs = c

    def _check(self, other):
        if not isinstance(other, Element) or other.algebra is not self.algebra:
            raise AlgebraMismatch("elements belong to different algebras")

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        return Element(self.algebra, self.algebra.field.reduce(self.coeffs * other))

    def __rmul__(self, scalar):
        return Element(self.algebra, self.algebra.field.reduce(scalar * self.coeffs))

    def __add__(self, other):
        self._check(other)
        return Element(self.algebra, self.algebra.field.reduce(self.coeffs + other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return Element(self.algebra, self.algebra.field.reduce(self.coeffs - other.coeffs))

    def __neg__(self):
        return Element(self.algebra, self.algebra.field.reduce(-self.coeffs))

    def __pow__(self, m: int):
        return principal_power(self, m)

    def __eq__(self, other):
        if not isinstance(other, Element) or other.algebra is not self.algebra:
            return NotImplemented
        return self.algebra.field.norm(self.coeffs - other.coeffs) <= (
            0 if self.algebra.field.is_prime else DEFAULT_TOL.eq_tol
        )

    __hash__ = None

    def __repr__(self):
        return f"Element({self.coeffs.tolist()})"


def _coeffs(x):
    return x.coeffs if isinstance(x, Element) else x


def mul(x: Element, y: Element) -> Element:
    if x.algebra is not y.algebra:
        raise AlgebraMismatch("elements belong to different algebras")
    return Element(x.algebra, x.algebra.mul(x.coeffs, y.coeffs))


def left_mul_matrix(x: Element) -> np.ndarray:
    return x.algebra.L(x.coeffs)


def principal_power(x: Element, m: int) -> Element:
    """Left-nested power x^1 = x, x^(k+1) = x (x^k)."""
    if m < 1:
        raise ValueError("principal powers start at 1")
    A = x.algebra
    return Element(A, principal_power_vec(A, x.coeffs, m))


def principal_power_vec(A: Algebra, x, m: int):
    p = np.array(x)
    for _ in range(m - 1):
        p = A.mul(x, p)
    return p


def char_poly(L, field: FieldDescriptor = COMPLEX_FIELD) -> np.ndarray:
    """det(L - t I) as ascending coefficients."""
    return linalg.char_poly(L, field)


def _angle_key(lam):
    ang = float(np.angle(lam)) % (2 * np.pi)
    if ang > 2 * np.pi - 1e-9:
        ang = 0.0
    return (round(ang, 9), round(abs(lam), 9))


def eigen(L, tol: Tolerance = DEFAULT_TOL, field: FieldDescriptor = COMPLEX_FIELD):
    """Eigenvalues with multiplicity and an eigenspace basis per distinct value.

    Returns a list of ``(eigenvalue, multiplicity, basis)`` sorted by angle in
    [0, 2 pi) then modulus; ``basis`` columns are orthonormal.
    """
    if field.is_prime:
        raise PrimeFieldUnsupported("use prime_eigen over F_p")
    L = np.asarray(L, dtype=np.complex128)
    vals = np.linalg.eigvals(L)
    clusters: list[list[complex]] = []
    for v in sorted(vals, key=_angle_key):
        for cl in clusters:
            if abs(cl[0] - v) <= tol.dedupe_tol:
                cl.append(v)
                break
        else:
            clusters.append([v])
    out = []
    n = L.shape[0]
    scale = max(1.0, float(np.max(np.abs(L), initial=0.0)))
    for cl in clusters:
        lam = complex(np.mean(cl))
        # clustered roots of a defective block are only good to ~sqrt(eps)
        thr = max(tol.eq_tol, 1e-7 if len(cl) > 1 else tol.eq_tol) * scale
        basis = linalg.nullspace(L - lam * np.eye(n), field, tol, threshold=thr)
        if basis.shape[1] == 0:
            _, _, vh = np.linalg.svd(L - lam * np.eye(n))
            basis = vh.conj().T[:, -1:]
        out.append((lam, len(cl), basis))
    out.sort(key=lambda t: _angle_key(t[0]))
    return out


def spectrum(L, tol: Tolerance = DEFAULT_TOL) -> list[complex]:
    """Eigenvalues with multiplicity, sorted by angle then modulus."""
    return [lam for lam, mult, _ in eigen(L, tol) for _ in range(mult)]


def prime_eigen(L, field: FieldDescriptor):
    """Roots of the characteristic polynomial in F_p with multiplicities.

    Returns ``(roots, split)`` where roots is a list of ``(value, multiplicity)``.
    """
    p = field.p
    coeffs = [int(c) % p for c in linalg.char_poly(L, field)]
    roots = []
    for r in range(p):
        mult = 0
        while len(coeffs) > 1 and linalg.poly_eval(coeffs, r, field) == 0:
            coeffs = _synthetic_div(coeffs, r, p)
            mult += 1
        if mult:
            roots.append((r, mult))
    n = np.asarray(L).shape[0]
    return roots, sum(m for _, m in roots) == n


def _synthetic_div(asc, r, p):
    """Divide an ascending coefficient list by (t - r); remainder must be 0."""
    desc = asc[::-1]
    q = [desc[0]]
    for c in desc[1:-1]:
        q.append((c + q[-1] * r) % p)
    return q[::-1]


def idempotent_residual(A: Algebra, x) -> float:
    x = _coeffs(x)
    d = A.mul(x, x) - x
    if A.field.is_prime:
        return A.field.norm(d)
    return float(np.linalg.norm(d))


def is_idempotent(x, tol: Tolerance = DEFAULT_TOL, algebra: Algebra | None = None):
    """(flag, residual ||x x - x||). Exact over F_p."""
    A = algebra if algebra is not None else x.algebra
    r = idempotent_residual(A, x)
    return (r == 0 if A.field.is_prime else r <= tol.eq_tol), r


def is_2nilpotent(x, tol: Tolerance = DEFAULT_TOL, algebra: Algebra | None = None) -> bool:
    A = algebra if algebra is not None else x.algebra
    v = _coeffs(x)
    if A.field.norm(v) == 0:
        raise ZeroInput("2-nilpotency is defined for nonzero elements")
    sq = A.mul(v, v)
    if A.field.is_prime:
        return A.field.norm(sq) == 0
    return float(np.linalg.norm(sq)) <= tol.eq_tol * float(np.linalg.norm(v)) ** 2


def kernel(L, field: FieldDescriptor = COMPLEX_FIELD, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Null-space basis as columns (orthonormal over C, reduced echelon over F_p)."""
    return linalg.nullspace(L, field, tol)


def _span_residual(A: Algebra, basis: np.ndarray, v) -> float:
    """Distance from v to the column span of basis (0/1 over F_p)."""
    f = A.field
    if basis.shape[1] == 0:
        return f.norm(v)
    if f.is_prime:
        return float(linalg.rank(np.column_stack([basis, v]), f) > linalg.rank(basis, f))
    coef, *_ = np.linalg.lstsq(basis, v, rcond=None)
    return float(np.linalg.norm(basis @ coef - v))


def quotient(A: Algebra, ideal_basis, tol: Tolerance = DEFAULT_TOL):
    """Factor algebra A / span(ideal_basis).

    Returns ``(quotient_algebra, projection)`` where ``projection`` is the
    (m x n) matrix sending A-coordinates to coordinates of the class in the
    complement basis {e_i : i not a pivot of the ideal's echelon form}.
    """
    f = A.field
    n = A.dim
    vecs = [_coeffs(v) for v in ideal_basis]
    if vecs:
        S = np.column_stack(vecs).astype(f.dtype)
    else:
        S = f.zeros((n, 0))
    if f.is_prime:
        ech, piv = linalg.rref_mod(S.T, f.p) if S.shape[1] else (S.T, [])
        K = ech[: len(piv)].T
    else:
        if S.shape[1]:
            u, s, _ = np.linalg.svd(S, full_matrices=False)
            K = u[:, s > tol.eq_tol]
        else:
            K = S
        piv = _pivots_complex(K.T, tol) if K.shape[1] else []
    # ideal check: e_i * k stays in span(K)
    for i in range(n):
        for j in range(K.shape[1]):
            prod = A.mul(A.basis(i), K[:, j])
            if _span_residual(A, K, prod) > (0 if f.is_prime else tol.eq_tol * max(1.0, f.norm(prod))):
                raise NotAnIdeal(f"e_{i} times ideal vector {j} escapes the span", witness=prod)
    comp = [i for i in range(n) if i not in piv]
    m = len(comp)
    # basis of A adapted to the splitting: [complement unit vectors | K]
    if m == 0:
        raise ValueError("ideal is the whole algebra; the quotient is zero-dimensional")
    Bfull = np.column_stack([np.eye(n, dtype=f.dtype)[:, comp], K])
    Binv = linalg.inverse(Bfull, f)
    proj = Binv[:m]
    g = f.zeros((m, m, m))
    for a, i in enumerate(comp):
        for b, j in enumerate(comp):
            g[a, b] = linalg.matmul(proj, A.mul(A.basis(i), A.basis(j)), f)
    meta = {"model": "quotient", "parent": A.meta.get("model")}
    return Algebra(f, g, meta), proj


def _pivots_complex(rows: np.ndarray, tol: Tolerance):
    """Pivot columns of a complex row-space via partial-pivoting elimination."""
    a = np.array(rows, dtype=np.complex128)
    r, cols = a.shape
    piv = []
    i = 0
    for c in range(cols):
        if i == r:
            break
        k = i + int(np.argmax(np.abs(a[i:, c])))
        if abs(a[k, c]) <= tol.eq_tol:
            continue
        a[[i, k]] = a[[k, i]]
        a[i] /= a[i, c]
        for t in range(r):
            if t != i:
                a[t] -= a[t, c] * a[i]
        piv.append(c)
        i += 1
    return piv
