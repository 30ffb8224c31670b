"""Peirce decompositions of idempotents and what they determine.

For a generic isospectral algebra every idempotent c has the simple spectrum
{eps^k}; the eigenvectors w_k multiply by w_k w_j in span(w_(k+j)). In the
medial case the principal powers of w_1 form a basis whose structure
constants are fixed, which gives a canonical form and an isomorphism test.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import Algebra, eigen, is_idempotent, prime_eigen, principal_power_vec
from .errors import (
    DimensionMismatch,
    IncompleteSet,
    NotAnIdempotent,
    NotMedialIsospectral,
    NotProportional,
    NotReduced,
    NotSimpleSpectrum,
    PrimeFieldUnsupported,
    ProjectionLeakage,
)
from .idempotents import IdempotentSet, enumerate_auto
from .scalar import DEFAULT_TOL, Tolerance, root_powers


@dataclass
class PeirceData:
    idempotent: np.ndarray
    spectrum: list
    eigenbasis: np.ndarray
    semisimple: bool
    eigenvalues: list  # eigenvalue of each eigenbasis column

    def to_json(self) -> dict:
        def cpair(z):
            z = complex(z)
            return [z.real, z.imag]

        return {
            "idempotent": [cpair(x) for x in self.idempotent],
            "spectrum": [cpair(z) for z in self.spectrum],
            "semisimple": self.semisimple,
        }


def _require_idempotent(A: Algebra, c, tol: Tolerance):
    ok, r = is_idempotent(c, tol, algebra=A)
    if not ok or A.field.norm(c) == 0:
        raise NotAnIdempotent(f"idempotency residual {r:.3g}")


def peirce_decompose(A: Algebra, c, tol: Tolerance = DEFAULT_TOL) -> PeirceData:
    _require_idempotent(A, c, tol)
    L = A.L(c)
    f = A.field
    if f.is_prime:
        roots, split = prime_eigen(L, f)
        spec = [r for r, m in roots for _ in range(m)]
        cols, vals = [], []
        for r, _ in roots:
            K = linalg.nullspace(f.reduce(L - r * np.eye(A.dim, dtype=np.int64)), f)
            cols.append(K)
            vals.extend([r] * K.shape[1])
        W = np.hstack(cols) if cols else f.zeros((A.dim, 0))
        return PeirceData(np.asarray(c), spec, W, split and W.shape[1] == A.dim, vals)
    data = eigen(L, tol)
    spec = [lam for lam, m, _ in data for _ in range(m)]
    W = np.hstack([b for _, _, b in data])
    vals = [lam for lam, _, b in data for _ in range(b.shape[1])]
    return PeirceData(np.asarray(c), spec, W, linalg.rank(W, f, tol) == A.dim, vals)


def spectrum_distance(s1, s2) -> float:
    """Largest gap under greedy multiset matching; inf when sizes differ."""
    if len(s1) != len(s2):
        return float("inf")
    rest = list(s2)
    worst = 0.0
    for a in s1:
        d = [abs(a - b) for b in rest]
        k = int(np.argmin(d))
        worst = max(worst, d[k])
        rest.pop(k)
    return float(worst)


def spectra_match(s1, s2, tol: float = 1e-8) -> bool:
    return spectrum_distance(s1, s2) <= tol


def is_isospectral(A: Algebra, idm, tol: Tolerance = DEFAULT_TOL, sampled: bool = False,
                   match_tol: float = 1e-8):
    """(flag, witness). witness is (i, j) for the first disagreeing pair, else None.

    ``sampled`` accepts an incomplete set (e.g. points of an idempotent curve).
    """
    if isinstance(idm, IdempotentSet):
        if not (idm.complete or sampled):
            raise IncompleteSet("isospectrality over an incomplete idempotent set")
        elements = idm.elements
    else:
        elements = np.asarray(idm)
    if A.field.is_prime:
        spectra = [sorted(peirce_decompose(A, c, tol).spectrum) for c in elements]
        for i in range(1, len(spectra)):
            if spectra[i] != spectra[0]:
                return False, (0, i)
        return True, None
    spectra = [peirce_decompose(A, c, tol).spectrum for c in elements]
    for i in range(1, len(spectra)):
        if not spectra_match(spectra[0], spectra[i], match_tol):
            return False, (0, i)
    return True, None


def cyclotomic_eigenbasis(A: Algebra, c, tol: Tolerance = DEFAULT_TOL, match_tol: float = 1e-7) -> np.ndarray:
    """Columns w_0..w_(n-1) with c w_k = eps^k w_k and w_0 = c."""
    if A.field.is_prime:
        raise PrimeFieldUnsupported("cyclotomic eigenbasis is computed over C")
    _require_idempotent(A, c, tol)
    n = A.dim
    eps = root_powers(n)
    data = eigen(A.L(c), tol)
    if len(data) != n:
        raise NotSimpleSpectrum(f"{len(data)} distinct eigenvalues, expected {n}")
    W = np.zeros((n, n), dtype=np.complex128)
    used = set()
    for lam, mult, b in data:
        k = int(np.argmin(np.abs(eps - lam)))
        if abs(eps[k] - lam) > match_tol or k in used or mult != 1:
            raise NotSimpleSpectrum(f"eigenvalue {lam} is not a simple n-th root of unity")
        used.add(k)
        W[:, k] = b[:, 0]
    W[:, 0] = c
    return W


def fusion_check(A: Algebra, c, tol: Tolerance = DEFAULT_TOL) -> float:
    """max over (k, j) of the part of w_k w_j outside span(w_(k+j mod n))."""
    W = cyclotomic_eigenbasis(A, c, tol)
    n = A.dim
    Winv = np.linalg.inv(W)
    worst = 0.0
    for k in range(n):
        for j in range(n):
            prod = A.mul(W[:, k], W[:, j])
            coords = Winv @ prod
            coords[(k + j) % n] = 0
            leak = np.linalg.norm(W @ coords) / (np.linalg.norm(W[:, k]) * np.linalg.norm(W[:, j]))
            worst = max(worst, float(leak))
    return worst


def cross_fusion_check(A: Algebra, c1, c2, tol: Tolerance = DEFAULT_TOL) -> float:
    """max ||c12 (u v) - l1 l2 (u v)|| over eigenpairs (l1, u) of c1 and (l2, v) of c2, c12 = c1 c2."""
    c12 = A.mul(c1, c2)
    for c in (c1, c2, c12):
        if abs(linalg.det(A.L(c), A.field)) <= tol.eq_tol:
            raise NotReduced("an idempotent has a singular multiplication operator")
    d1 = eigen(A.L(c1), tol)
    d2 = eigen(A.L(c2), tol)
    L12 = A.L(c12)
    worst = 0.0
    for l1, _, B1 in d1:
        for l2, _, B2 in d2:
            for u in B1.T:
                for v in B2.T:
                    uv = A.mul(u, v)
                    worst = max(worst, float(np.linalg.norm(L12 @ uv - l1 * l2 * uv)))
    return worst


def theta_projection(A: Algebra, c, k: int, y, eigenbasis: np.ndarray | None = None,
                     tol: Tolerance = DEFAULT_TOL):
    """(theta, z) with z = sum_m eps^(-mk) L_c^m y = theta w_k."""
    W = cyclotomic_eigenbasis(A, c, tol) if eigenbasis is None else eigenbasis
    n = A.dim
    eps = root_powers(n)
    Lc = A.L(c)
    z = np.zeros(n, dtype=np.complex128)
    v = np.asarray(y, dtype=np.complex128)
    for m in range(n):
        z += np.conj(eps[(m * k) % n]) * v
        v = Lc @ v
    wk = W[:, k % n]
    theta = complex(np.vdot(wk, z) / np.vdot(wk, wk))
    leak = float(np.linalg.norm(z - theta * wk))
    if leak > tol.eq_tol * max(1.0, float(np.linalg.norm(z)), float(np.linalg.norm(y))):
        raise ProjectionLeakage(f"projection leaves span(w_{k}) by {leak:.3g}")
    return theta, z


def reconstruct_from_idempotents(A: Algebra, idm: IdempotentSet, y, tol: Tolerance = DEFAULT_TOL):
    """y = (2^n - 1)^(-1) sum_c theta_(c,0)(y) c."""
    N = 2**A.dim - 1
    total = np.zeros(A.dim, dtype=np.complex128)
    for c in idm.elements:
        th, _ = theta_projection(A, c, 0, y, eigenbasis=cyclotomic_eigenbasis(A, c, tol), tol=tol)
        total += th * c
    return total / N


def canonical_pattern(n: int) -> np.ndarray:
    """Structure tensor of b_0 = c, b_m = w_1^m normalised by w_1^n = c."""
    eps = root_powers(n)
    g = np.zeros((n, n, n), dtype=np.complex128)
    for m in range(n):
        g[0, m, m] = g[m, 0, m] = eps[m]
    for k in range(1, n):
        for m in range(1, n):
            e = -(k - 1) * (m - 1)
            s = k + m
            if s < n:
                g[k, m, s] = eps[e % n]
            elif s == n:
                g[k, m, 0] = eps[e % n]
            else:
                g[k, m, s - n] = eps[(e + 1) % n]
    return g


@dataclass
class CanonicalForm:
    idempotent: np.ndarray
    w1: np.ndarray
    mu: complex
    basis: np.ndarray  # columns b_0..b_(n-1) in the algebra's coordinates
    tensor: np.ndarray
    residual: float

    def to_json(self) -> dict:
        def cvec(v):
            return [[float(np.real(x)), float(np.imag(x))] for x in v]

        return {
            "idempotent": cvec(self.idempotent),
            "w1": cvec(self.w1),
            "mu": [self.mu.real, self.mu.imag],
            "basis": [cvec(col) for col in self.basis.T],
            "pattern_residual": self.residual,
        }


def tensor_in_basis(A: Algebra, B: np.ndarray) -> np.ndarray:
    """Structure constants of A in the basis given by the columns of B."""
    Binv = np.linalg.inv(B)
    n = A.dim
    g = np.zeros((n, n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = Binv @ A.mul(B[:, i], B[:, j])
    return g


def canonical_form(A: Algebra, idm: IdempotentSet | None = None, c=None,
                   tol: Tolerance = DEFAULT_TOL, pattern_tol: float | None = None) -> CanonicalForm:
    """Bring a medial generic isospectral algebra to the fixed principal-power basis.

    Steps: c = first idempotent in canonical order (unless given); w_1 an
    eigenvector for eps; w_1^n = mu c, rescaled by an n-th root of 1/mu so
    that w_1^n = c; basis b_m = w_1^m.
    """
    if A.field.is_prime:
        raise PrimeFieldUnsupported("canonical forms are computed over C")
    n = A.dim
    if c is None:
        if idm is None:
            idm = enumerate_auto(A)
        if len(idm) == 0:
            raise NotMedialIsospectral("algebra has no nonzero idempotents")
        c = idm.elements[0]
    c = np.asarray(c, dtype=np.complex128)
    try:
        W = cyclotomic_eigenbasis(A, c, tol)
    except NotSimpleSpectrum as exc:
        raise NotMedialIsospectral(str(exc)) from exc
    w1 = W[:, 1] if n > 1 else c
    wn = principal_power_vec(A, w1, n)
    mu = complex(np.vdot(c, wn) / np.vdot(c, c))
    if abs(mu) < 1e-12 or np.linalg.norm(wn - mu * c) > 1e-8 * max(1.0, abs(mu)):
        raise NotMedialIsospectral("w_1^n is not proportional to c")
    lam = mu ** (-1.0 / n)
    w1 = lam * w1
    B = np.column_stack([c] + [principal_power_vec(A, w1, m) for m in range(1, n)])
    if np.linalg.matrix_rank(B, tol=1e-10) < n:
        raise NotMedialIsospectral("principal powers of w_1 are linearly dependent")
    g = tensor_in_basis(A, B)
    residual = float(np.max(np.abs(g - canonical_pattern(n))))
    limit = tol.eq_tol if pattern_tol is None else pattern_tol
    if residual > limit:
        raise NotMedialIsospectral(f"canonical pattern residual {residual:.3g}")
    return CanonicalForm(c, w1, mu, B, g, residual)


def product_preservation_residual(A: Algebra, B: Algebra, M: np.ndarray) -> float:
    """max_ij || M(e_i e_j) - (M e_i)(M e_j) ||."""
    worst = 0.0
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = M @ A.mul(A.basis(i), A.basis(j))
            rhs = B.mul(M[:, i], M[:, j])
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def are_isomorphic(A: Algebra, B: Algebra, idm_a: IdempotentSet | None = None,
                   idm_b: IdempotentSet | None = None, tol: Tolerance = DEFAULT_TOL,
                   pattern_tol: float = 1e-8):
    """Change-of-basis matrix M: A -> B with M(xy) = M(x)M(y), or None."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dim {A.dim} vs dim {B.dim}")
    ca = canonical_form(A, idm_a, tol=tol, pattern_tol=pattern_tol)
    cb = canonical_form(B, idm_b, tol=tol, pattern_tol=pattern_tol)
    limit = tol.eq_tol if pattern_tol is None else pattern_tol
    if np.max(np.abs(ca.tensor - cb.tensor)) > limit:
        return None
    M = cb.basis @ np.linalg.inv(ca.basis)
    if product_preservation_residual(A, B, M) > 1e-8 * max(1.0, float(np.max(np.abs(M))) ** 2):
        return None
    return M


def evaluate_word(A: Algebra, word, x):
    """Evaluate a nonassociative word; leaves are any non-tuple, inner nodes are pairs."""
    if isinstance(word, tuple):
        left, right = word
        return A.mul(evaluate_word(A, left, x), evaluate_word(A, right, x))
    return np.asarray(x)


def word_degree(word) -> int:
    if isinstance(word, tuple):
        return word_degree(word[0]) + word_degree(word[1])
    return 1


def principal_word(m: int):
    """The word w (w (... w)) of degree m."""
    word = "w"
    for _ in range(m - 1):
        word = ("w", word)
    return word


def verify_weak_power_associativity(A: Algebra, word, cf: CanonicalForm | None = None,
                                    tol: float = 1e-8):
    """(b, s) with word(w_1) = b w_1^deg and b = eps^s."""
    if cf is None:
        cf = canonical_form(A)
    n = A.dim
    d = word_degree(word)
    val = evaluate_word(A, word, cf.w1)
    ref = principal_power_vec(A, cf.w1, d)
    b = complex(np.vdot(ref, val) / np.vdot(ref, ref))
    if np.linalg.norm(val - b * ref) > tol * max(1.0, np.linalg.norm(ref)):
        raise NotProportional("word is not a multiple of the principal power")
    eps = root_powers(n)
    s = int(np.argmin(np.abs(eps - b)))
    if abs(eps[s] - b) > tol:
        raise NotProportional(f"ratio {b} is not an n-th root of unity")
    return b, s
