"""Constructors for the concrete algebras: A2, A3, the cyclotomic model C_n,
twisted doublings and powers, direct products, the non-generic algebra T and
maximal medial extensions of idempotent medial commutative quasigroups."""
from __future__ import annotations

import numpy as np

from .algebra import Algebra
from .errors import FieldMismatch, NotARoot, NotIMCQuasigroup
from .scalar import COMPLEX_FIELD, FieldDescriptor, half, root_powers

A3_GAMMA = (1 + 1j * np.sqrt(7)) / 4


def field_algebra(field: FieldDescriptor = COMPLEX_FIELD) -> Algebra:
    """The ground field as a one-dimensional algebra, e e = e."""
    g = field.zeros((1, 1, 1))
    g[0, 0, 0] = 1
    return Algebra(field, g, {"model": "F"})


def build_A2(field: FieldDescriptor = COMPLEX_FIELD) -> Algebra:
    """c1 c1 = c1, c2 c2 = c2, c1 c2 = -c1 - c2."""
    m1 = field.neg_one()
    g = field.zeros((2, 2, 2))
    g[0, 0] = [1, 0]
    g[1, 1] = [0, 1]
    g[0, 1] = g[1, 0] = [m1, m1]
    return Algebra(field, g, {"model": "A2"})


def a3_idempotents(gamma: complex = A3_GAMMA) -> np.ndarray:
    """c1..c7 as rows, with c4 = -gamma(c1+c2+c3) and c5, c6, c7 the products c1c2, c2c3, c3c1."""
    g = gamma
    return np.array([
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [-g, -g, -g],
        [g - 1, -g, g],
        [g, g - 1, -g],
        [-g, g, g - 1],
    ], dtype=np.complex128)


def build_A3(gamma: complex = A3_GAMMA) -> Algebra:
    """Three-dimensional isospectral algebra; gamma is a root of 2 g^2 - g + 1."""
    if abs(2 * gamma**2 - gamma + 1) > 1e-12:
        raise ValueError("gamma must satisfy 2 g^2 - g + 1 = 0")
    c = a3_idempotents(gamma)
    g = np.zeros((3, 3, 3), dtype=np.complex128)
    for i in range(3):
        g[i, i, i] = 1
    g[0, 1] = g[1, 0] = c[4]
    g[1, 2] = g[2, 1] = c[5]
    g[2, 0] = g[0, 2] = c[6]
    return Algebra(COMPLEX_FIELD, g, {"model": "A3"})


def build_Cn(n: int, field: FieldDescriptor = COMPLEX_FIELD) -> Algebra:
    """F[z]/(z^n - 1) with p o q = p(eps z) q(eps z); basis z^0..z^(n-1)."""
    if n < 2:
        raise ValueError("C_n needs n >= 2")
    eps = root_powers(n, field)
    g = field.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            k = (i + j) % n
            g[i, j, k] = eps[k]
    return Algebra(field, g, {"model": "Cn", "n": n})


def _root_check(zeta, d: int, field: FieldDescriptor):
    if field.is_prime:
        z = int(zeta) % field.p
        if pow(z, d, field.p) != 1:
            raise NotARoot(f"{zeta}^{d} != 1 in F_{field.p}")
        return z
    z = complex(zeta)
    if abs(z**d - 1) > 1e-12:
        raise NotARoot(f"{zeta}^{d} != 1")
    return z


def twisted_power(A: Algebra, d: int, zeta) -> Algebra:
    """A[z]/(z^d - 1) with p . q = p(zeta z) q(zeta z); basis index m*dim(A) + i for e_i z^m."""
    f = A.field
    z = _root_check(zeta, d, f)
    n = A.dim
    zp = [pow(z, k, f.p) for k in range(2 * d)] if f.is_prime else [z**k for k in range(2 * d)]
    g = f.zeros((d * n, d * n, d * n))
    for m in range(d):
        for l in range(d):
            r = (m + l) % d
            block = f.reduce(zp[m + l] * A.gamma)
            g[m * n:(m + 1) * n, l * n:(l + 1) * n, r * n:(r + 1) * n] = block
    meta = {"model": "TwistedPower", "d": d, "base": A.meta.get("model")}
    return Algebra(f, g, meta)


def twisted_double(A: Algebra, zeta) -> Algebra:
    """(x, y) o (z, w) = (xz + yw, zeta (xw + yz)), zeta = +-1."""
    f = A.field
    z = f.scalar(zeta)
    if f.is_prime:
        if z not in (1, f.p - 1):
            raise NotARoot("twisted doubling needs zeta = +-1")
    elif abs(z - 1) > 1e-12 and abs(z + 1) > 1e-12:
        raise NotARoot("twisted doubling needs zeta = +-1")
    n = A.dim
    G = A.gamma
    g = f.zeros((2 * n, 2 * n, 2 * n))
    g[:n, :n, :n] = G
    g[n:, n:, :n] = G
    g[:n, n:, n:] = f.reduce(z * G)
    g[n:, :n, n:] = f.reduce(z * G)
    sign = 1 if (z == 1 if f.is_prime else abs(z - 1) < 1e-12) else -1
    return Algebra(f, g, {"model": "TwistedDouble", "zeta": sign, "base": A.meta.get("model")})


def direct_product(A: Algebra, B: Algebra) -> Algebra:
    """(a, x)(b, y) = (ab, xy)."""
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    f = A.field
    n, m = A.dim, B.dim
    g = f.zeros((n + m,) * 3)
    g[:n, :n, :n] = A.gamma
    g[n:, n:, n:] = B.gamma
    return Algebra(f, g, {"model": "DirectProduct", "factors": [A.meta.get("model"), B.meta.get("model")]})


def build_T(field: FieldDescriptor = COMPLEX_FIELD) -> Algebra:
    """(x o y)_i = x_i y_i - (x_j y_k + x_k y_j)/2 over {i, j, k} = {1, 2, 3}."""
    mh = field.reduce(-half(field)) if field.is_prime else -0.5
    g = field.zeros((3, 3, 3))
    for i, j, k in [(0, 1, 2), (1, 0, 2), (2, 0, 1)]:
        g[i, i, i] = 1
        g[j, k, i] = mh
        g[k, j, i] = mh
    return Algebra(field, g, {"model": "T"})


def sample_T_idempotents(count: int, seed: int = 0) -> np.ndarray:
    """Real points of the idempotent circle sum x_i^2 = sum x_i = 1 of T."""
    rng = np.random.default_rng(seed)
    centre = np.full(3, 1 / 3)
    u = np.array([1, -1, 0]) / np.sqrt(2)
    v = np.array([1, 1, -2]) / np.sqrt(6)
    r = np.sqrt(2 / 3)
    th = rng.uniform(0, 2 * np.pi, size=count)
    pts = centre + r * (np.cos(th)[:, None] * u + np.sin(th)[:, None] * v)
    return pts.astype(np.complex128)


def medial_extension(table, field: FieldDescriptor = COMPLEX_FIELD) -> Algebra:
    """Free module on an IMC quasigroup with the table extended bilinearly."""
    from .quasigroup import QuasigroupTable, is_imc

    t = table.table if isinstance(table, QuasigroupTable) else np.asarray(table)
    if not is_imc(t):
        raise NotIMCQuasigroup("table is not an idempotent medial commutative quasigroup")
    N = t.shape[0]
    g = field.zeros((N, N, N))
    for i in range(N):
        for j in range(N):
            g[i, j, t[i, j]] = 1
    return Algebra(field, g, {"model": "MedialExtension", "order": N})


def random_symmetric(n: int, seed: int, field: FieldDescriptor = COMPLEX_FIELD) -> Algebra:
    """Symmetrised Gaussian tensor (uniform residues over F_p)."""
    rng = np.random.default_rng(seed)
    if field.is_prime:
        g = rng.integers(0, field.p, size=(n, n, n), dtype=np.int64)
        g = np.triu(np.ones((n, n), dtype=bool))[:, :, None] * g
        g = np.where(np.arange(n)[:, None, None] > np.arange(n)[None, :, None], g.transpose(1, 0, 2), g)
    else:
        g = rng.standard_normal((n, n, n)) + 1j * rng.standard_normal((n, n, n))
        g = (g + g.transpose(1, 0, 2)) / 2
    return Algebra(field, g, {"model": "Random", "seed": seed})


def perturb(A: Algebra, scale: float, seed: int) -> Algebra:
    """Gamma + scale * symmetrised real noise."""
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(A.gamma.shape)
    noise = (noise + noise.transpose(1, 0, 2)) / 2
    meta = {"model": "Perturbed", "base": A.meta.get("model"), "scale": scale, "seed": seed}
    return Algebra(A.field, A.gamma + scale * noise, meta)


def reference_labels(A: Algebra) -> np.ndarray | None:
    """Idempotents in the conventional labelling c_1, c_2, ... when one exists (A2, A3)."""
    model = A.meta.get("model")
    if model == "A2":
        e = A.field.zeros((3, 2))
        e[0, 0] = e[1, 1] = 1
        e[2] = A.field.neg_one()
        return e
    if model == "A3":
        g = A.gamma[0, 1, 2] if A.gamma[0, 1, 2] != 0 else A3_GAMMA
        return a3_idempotents(complex(g))
    return None


MODEL_NAMES = ("A2", "A3", "Cn", "TwistedDouble", "TwistedPower", "DirectProduct", "T", "MedialExtension", "FpPairs")
