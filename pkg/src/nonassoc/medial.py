"""The medial identity (xy)(zw) = (xz)(yw) and its consequences."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import sympy

from . import linalg
from .algebra import Algebra, kernel, principal_power_vec
from .errors import (
    AlgebraError,
    AssociativityFailed,
    NotIsospectral,
    NotSimpleSpectrum,
    SingularLc,
)
from .peirce import cyclotomic_eigenbasis
from .scalar import DEFAULT_TOL, Tolerance, root_powers

DEFAULT_SAMPLES = 100
DEFAULT_SEED = 7


@dataclass
class MedialReport:
    basis_quadruple_residual: float
    squared_identity_residual: float
    verdict: bool

    def to_json(self) -> dict:
        return {
            "basis_quadruple_residual": self.basis_quadruple_residual,
            "squared_identity_residual": self.squared_identity_residual,
            "verdict": self.verdict,
        }


def _quadruple_products(A: Algebra) -> np.ndarray:
    """Q[i,j,k,l] = (e_i e_j)(e_k e_l)."""
    G = A.gamma
    if A.field.is_prime:
        p = A.field.p
        T = np.einsum("ija,abm->ijbm", G, G) % p
        return np.einsum("ijbm,klb->ijklm", T, G) % p
    return np.einsum("ija,klb,abm->ijklm", G, G, G, optimize=True)


def quadruple_residual(A: Algebra) -> float:
    Q = _quadruple_products(A)
    D = Q - Q.transpose(0, 2, 1, 3, 4)
    if A.field.is_prime:
        return float(np.any(D % A.field.p != 0))
    return float(np.max(np.abs(D))) if D.size else 0.0


def _samples(A: Algebra, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.array([A.field.random_vector(rng, A.dim) for _ in range(count)])


def squared_identity_check(A: Algebra, sample_count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> float:
    """max over random pairs of ||(xy)^2 - x^2 y^2||, relative to the size of the terms over C."""
    X = _samples(A, sample_count, seed)
    Y = _samples(A, sample_count, seed + 1)
    XY = A.mul_batch(X, Y)
    lhs = A.mul_batch(XY, XY)
    rhs = A.mul_batch(A.mul_batch(X, X), A.mul_batch(Y, Y))
    if A.field.is_prime:
        return float(np.any((lhs - rhs) % A.field.p != 0))
    scale = np.maximum(1.0, np.maximum(np.max(np.abs(lhs), axis=1), np.max(np.abs(rhs), axis=1)))
    return float(np.max(np.max(np.abs(lhs - rhs), axis=1) / scale))


def is_medial_basis(A: Algebra, tol: Tolerance = DEFAULT_TOL, sample_count: int = DEFAULT_SAMPLES,
                    seed: int = DEFAULT_SEED) -> MedialReport:
    q = quadruple_residual(A)
    s = squared_identity_check(A, sample_count, seed)
    return MedialReport(q, s, q <= tol.eq_tol)


def squared_identity_verdict(residual: float, tol: Tolerance = DEFAULT_TOL) -> bool:
    return residual <= tol.eq_tol


def _resid(A: Algebra, v) -> float:
    if A.field.is_prime:
        return float(np.any(A.field.reduce(v) != 0))
    return float(np.max(np.abs(v))) if np.size(v) else 0.0


def endomorphism_check(A: Algebra, c) -> float:
    """max_ij || L_c(e_i e_j) - (L_c e_i)(L_c e_j) ||."""
    Lc = A.L(c)
    f = A.field
    worst = 0.0
    for i in range(A.dim):
        for j in range(i, A.dim):
            lhs = linalg.matmul(Lc, A.mul(A.basis(i), A.basis(j)), f)
            rhs = A.mul(Lc[:, i], Lc[:, j])
            worst = max(worst, _resid(A, lhs - rhs))
    return worst


def conjugation_check(A: Algebra, c1, c2) -> float:
    """|| L_c2 L_c1 - L_(c2 c1) L_c2 ||."""
    f = A.field
    L1, L2 = A.L(c1), A.L(c2)
    L21 = A.L(A.mul(c2, c1))
    return _resid(A, linalg.matmul(L2, L1, f) - linalg.matmul(L21, L2, f))


def _invertible(A: Algebra, L, tol: Tolerance) -> bool:
    if A.field.is_prime:
        return linalg.det(L, A.field) != 0
    return linalg.rank(L, A.field, tol) == A.dim


def kaplansky_isotope(A: Algebra, c, tol: Tolerance = DEFAULT_TOL) -> Algebra:
    """(A, o) with x o y = L_c^{-1}(xy); c must be the unit and o associative on basis triples."""
    f = A.field
    Lc = A.L(c)
    if not _invertible(A, Lc, tol):
        raise SingularLc("L_c is singular")
    Linv = linalg.inverse(Lc, f)
    n = A.dim
    if f.is_prime:
        g = np.einsum("km,ijm->ijk", Linv, A.gamma % f.p) % f.p
    else:
        g = np.einsum("km,ijm->ijk", Linv, A.gamma)
        g = (g + g.transpose(1, 0, 2)) / 2
    iso = Algebra(f, g, {"model": "Isotope", "base": A.meta.get("model")})
    unit = max(_resid(A, iso.mul(c, iso.basis(i)) - iso.basis(i)) for i in range(n))
    assoc = associativity_residual(iso)
    if assoc > tol.eq_tol or unit > tol.eq_tol:
        raise AssociativityFailed(f"associativity residual {assoc:.3g}, unit residual {unit:.3g}")
    return Algebra(f, g, dict(iso.meta, associativity_residual=assoc, unit_residual=unit))


def associativity_residual(A: Algebra) -> float:
    """max over basis triples of ||(e_i e_j) e_k - e_i (e_j e_k)||."""
    G = A.gamma
    if A.field.is_prime:
        p = A.field.p
        lhs = np.einsum("ija,akm->ijkm", G, G) % p
        rhs = np.einsum("jka,iam->ijkm", G, G) % p
        return float(np.any(lhs != rhs))
    lhs = np.einsum("ija,akm->ijkm", G, G)
    rhs = np.einsum("jka,iam->ijkm", G, G)
    return float(np.max(np.abs(lhs - rhs)))


def det_phi(A: Algebra, c, x) -> complex:
    """det L_x / det L_c."""
    return complex(np.linalg.det(A.L(x)) / np.linalg.det(A.L(c)))


def det_homomorphism_check(A: Algebra, c, sample_count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                           tol: Tolerance = DEFAULT_TOL) -> float:
    """max |phi(xy) - phi(x)phi(y)| / max(1, |phi(x)phi(y)|) with phi(x) = det L_x / det L_c."""
    f = A.field
    Lc = A.L(c)
    if not _invertible(A, Lc, tol):
        raise SingularLc("L_c is singular")
    X = _samples(A, sample_count, seed)
    Y = _samples(A, sample_count, seed + 1)
    XY = A.mul_batch(X, Y)
    if f.is_prime:
        dc_inv = f.inv(linalg.det(Lc, f))
        worst = 0.0
        for x, y, xy in zip(X, Y, XY):
            px = linalg.det(A.L(x), f) * dc_inv % f.p
            py = linalg.det(A.L(y), f) * dc_inv % f.p
            pxy = linalg.det(A.L(xy), f) * dc_inv % f.p
            worst = max(worst, float(pxy != px * py % f.p))
        return worst
    dc = np.linalg.det(Lc)
    def phi(V):
        return np.linalg.det(np.einsum("bi,ijk->bkj", V, A.gamma)) / dc
    px, py, pxy = phi(X), phi(Y), phi(XY)
    return float(np.max(np.abs(pxy - px * py) / np.maximum(1.0, np.abs(px * py))))


def determinant_polynomial(A: Algebra, c) -> dict:
    """Coefficients of phi(x) = det L_x / det L_c as {exponent tuple: coefficient}."""
    xs = sympy.symbols(f"x1:{A.dim + 1}")
    G = A.gamma
    n = A.dim
    L = sympy.zeros(n, n)
    for k in range(n):
        for j in range(n):
            L[k, j] = sum(sympy.nsimplify(complex(G[i, j, k]).real) * xs[i] if complex(G[i, j, k]).imag == 0
                          else sympy.sympify(complex(G[i, j, k])) * xs[i] for i in range(n))
    poly = sympy.Poly(sympy.expand(L.det(method="berkowitz")), *xs)
    dc = complex(np.linalg.det(A.L(c)))
    return {tuple(int(e) for e in mon): complex(coef) / dc for mon, coef in poly.terms()}


# generic determinant

def isotope_eigenbasis(A: Algebra, c, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Eigenbasis of L_c with w_0 = c and w_k = w_1^(ok), normalised so w_1^(on) = c in the isotope."""
    try:
        W = cyclotomic_eigenbasis(A, c, tol)
    except NotSimpleSpectrum as exc:
        raise NotIsospectral(str(exc)) from exc
    n = A.dim
    Linv = np.linalg.inv(A.L(c))
    def omul(x, y):
        return Linv @ A.mul(x, y)
    c = np.asarray(c, dtype=np.complex128)
    w1 = W[:, 1] if n > 1 else c
    v = w1
    for _ in range(n - 1):
        v = omul(w1, v)
    mu = complex(np.vdot(c, v) / np.vdot(c, c))
    if abs(mu) < 1e-14 or np.linalg.norm(v - mu * c) > 1e-8 * max(1.0, abs(mu)):
        raise NotIsospectral("isotope power w_1^n is not a multiple of c")
    w1 = w1 * mu ** (-1.0 / n)
    cols = [c]
    for _ in range(1, n):
        cols.append(omul(w1, cols[-1]) if len(cols) > 1 else w1)
    return np.column_stack(cols)


def _circulant_product(a: np.ndarray) -> complex:
    n = a.shape[0]
    eps = root_powers(n)
    idx = np.outer(np.arange(n), np.arange(n)) % n
    return complex(np.prod(eps[idx] @ a))


def generic_determinant(A: Algebra, c, x, W: np.ndarray | None = None, tol: Tolerance = DEFAULT_TOL,
                        cross_tol: float = 1e-10) -> complex:
    """delta(x) = prod_k T(L_c^k x), cross-checked against det circ(a) for x = sum a_i w_i."""
    if W is None:
        W = isotope_eigenbasis(A, c, tol)
    a = np.linalg.solve(W, np.asarray(x, dtype=np.complex128))
    d1 = _circulant_product(a)
    d2 = complex(np.linalg.det(scipy.linalg.circulant(a)))
    if abs(d1 - d2) > cross_tol * max(1.0, abs(d1)):
        raise AlgebraError(f"product formula {d1} disagrees with circulant determinant {d2}")
    return d1


def sylvester_resultant(f, g) -> complex:
    """Res(f, g) for ascending coefficient lists via the Sylvester determinant."""
    f = np.trim_zeros(np.asarray(f, dtype=np.complex128), "b")
    g = np.trim_zeros(np.asarray(g, dtype=np.complex128), "b")
    m, k = len(f) - 1, len(g) - 1
    if m == 0:
        return complex(f[0] ** k)
    if k == 0:
        return complex(g[0] ** m)
    S = np.zeros((m + k, m + k), dtype=np.complex128)
    fd, gd = f[::-1], g[::-1]
    for r in range(k):
        S[r, r:r + m + 1] = fd
    for r in range(m):
        S[k + r, r:r + k + 1] = gd
    return complex(np.linalg.det(S))


def cyclotomic_norm(p, n: int) -> complex:
    """Delta(p) = p(1) p(eps) ... p(eps^(n-1))."""
    eps = root_powers(n)
    return complex(np.prod([np.polyval(np.asarray(p)[::-1], e) for e in eps]))


def delta_three_way(p, n: int) -> tuple[complex, complex, complex]:
    """(prod formula, Res(z^n - 1, p), det circ(p)) for a polynomial p of degree < n."""
    p = np.zeros(n, dtype=np.complex128) + np.pad(np.asarray(p, dtype=np.complex128), (0, n - len(p)))
    zn1 = np.zeros(n + 1, dtype=np.complex128)
    zn1[0], zn1[n] = -1, 1
    return cyclotomic_norm(p, n), sylvester_resultant(zn1, p), complex(np.linalg.det(scipy.linalg.circulant(p)))


def _mat_power(L, n):
    return np.linalg.matrix_power(L, n)


def verify_Lxn_identity(A: Algebra, c, sample_count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                        tol: Tolerance = DEFAULT_TOL) -> float:
    """max ||L_x^n - delta(x) I|| / (|delta(x)| + 1) over random x."""
    W = isotope_eigenbasis(A, c, tol)
    n = A.dim
    worst = 0.0
    for x in _samples(A, sample_count, seed):
        d = generic_determinant(A, c, x, W)
        R = _mat_power(A.L(x), n) - d * np.eye(n)
        worst = max(worst, float(np.max(np.abs(R)) / (abs(d) + 1)))
    return worst


@dataclass
class BnReport:
    power_residual: float
    multiplicativity_residual: float

    def to_json(self) -> dict:
        return {"power_residual": self.power_residual, "multiplicativity_residual": self.multiplicativity_residual}


def beta(A: Algebra, c, x, W=None) -> complex:
    return generic_determinant(A, c, x, W)


def verify_Bn(A: Algebra, c=None, sample_count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
              tol: Tolerance = DEFAULT_TOL) -> BnReport:
    """x^(n+1) = beta(x) x with beta the generic determinant, and beta(xy) = beta(x) beta(y)."""
    if c is None:
        from .idempotents import enumerate_auto

        c = enumerate_auto(A).elements[0]
    W = isotope_eigenbasis(A, c, tol)
    n = A.dim
    X = _samples(A, sample_count, seed)
    Y = _samples(A, sample_count, seed + 1)
    pw = mult = 0.0
    for x, y in zip(X, Y):
        bx = generic_determinant(A, c, x, W)
        by = generic_determinant(A, c, y, W)
        bxy = generic_determinant(A, c, A.mul(x, y), W)
        xn1 = principal_power_vec(A, x, n + 1)
        pw = max(pw, float(np.max(np.abs(xn1 - bx * x)) / max(1.0, float(np.max(np.abs(xn1))))))
        mult = max(mult, abs(bxy - bx * by) / max(1.0, abs(bx * by)))
    return BnReport(pw, float(mult))


def zero_eigenspace_ideal_check(A: Algebra, c, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """K = ker L_c satisfies A K in K; returns (verdict, residual of L_c(e_i k))."""
    f = A.field
    Lc = A.L(c)
    K = kernel(Lc, f, tol)
    if K.shape[1] == 0:
        return True, 0.0
    worst = 0.0
    for i in range(A.dim):
        for k in K.T:
            worst = max(worst, _resid(A, linalg.matmul(Lc, A.mul(A.basis(i), k), f)))
    return worst <= tol.eq_tol, worst


def idempotent_closure_residual(A: Algebra, elements, tol: Tolerance = DEFAULT_TOL) -> float:
    """max ||(ab)^2 - ab|| over pairs of idempotents."""
    E = np.asarray(elements)
    m = len(E)
    I, J = np.triu_indices(m)
    P = A.mul_batch(E[I], E[J])
    return _resid(A, A.mul_batch(P, P) - P)
