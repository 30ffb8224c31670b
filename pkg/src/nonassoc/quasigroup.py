"""Idempotent quasigroups: Latin and medial certification, the boxplus group,
cyclicity, relabelling onto Z_N with u o v = (u + v)/2, and the Z_N model."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import Algebra
from .errors import ClosureFailure, EvenOrder, IncompleteSet, NotCyclic, ProductEscapes
from .idempotents import IdempotentSet
from .scalar import DEFAULT_TOL, Tolerance

EXHAUSTIVE_LIMIT = 63
MEDIAL_SAMPLES = 10**6


@dataclass
class QuasigroupTable:
    """Commutative idempotent operation table; table[i, j] indexes labels."""

    table: np.ndarray
    labels: list = field(default_factory=list)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError("table must be square")
        if not np.array_equal(t, t.T):
            raise ValueError("table is not commutative")
        if not np.array_equal(np.diag(t), np.arange(t.shape[0])):
            raise ValueError("table is not idempotent")
        self.table = t
        if not self.labels:
            self.labels = list(range(t.shape[0]))

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def ascii(self, names=None) -> str:
        """1-indexed grid (or with the given row/column names)."""
        N = self.order
        names = [str(i + 1) for i in range(N)] if names is None else [str(x) for x in names]
        w = max(len(s) for s in names)
        head = " " * w + " |" + " ".join(s.rjust(w) for s in names)
        lines = [head, "-" * len(head)]
        for i in range(N):
            lines.append(names[i].rjust(w) + " |" + " ".join(names[k].rjust(w) for k in self.table[i]))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"order": self.order, "table": self.table.tolist()}


@dataclass
class ZNRelabeling:
    """phi[i] in Z_N for label index i."""

    phi: list
    N: int
    verified: bool
    generator: int | None = None

    def to_json(self) -> dict:
        return {"N": self.N, "phi": list(self.phi), "verified": self.verified, "generator": self.generator}


def _find_index(elements: np.ndarray, v, A: Algebra, tol: Tolerance):
    if A.field.is_prime:
        hits = np.nonzero(np.all(elements == A.field.reduce(v), axis=1))[0]
    else:
        hits = np.nonzero(np.max(np.abs(elements - v), axis=1) <= tol.dedupe_tol)[0]
    return int(hits[0]) if len(hits) else None


def idm_table(A: Algebra, idm: IdempotentSet, tol: Tolerance = DEFAULT_TOL) -> QuasigroupTable:
    if not idm.complete:
        raise IncompleteSet("idempotent table needs a complete enumeration")
    E = idm.elements
    m = len(E)
    t = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(i, m):
            k = _find_index(E, A.mul(E[i], E[j]), A, tol)
            if k is None:
                raise ProductEscapes(f"c_{i} c_{j} is not in the idempotent set")
            t[i, j] = t[j, i] = k
    return QuasigroupTable(t, list(range(m)))


def _as_array(table) -> np.ndarray:
    return table.table if isinstance(table, QuasigroupTable) else np.asarray(table, dtype=np.int64)


def is_latin(table) -> bool:
    t = _as_array(table)
    N = t.shape[0]
    ref = np.arange(N)
    return bool(all(np.array_equal(np.sort(r), ref) for r in t) and
                all(np.array_equal(np.sort(col), ref) for col in t.T))


def medial_violations(table, idx=None) -> int:
    """Number of quadruples (x,y,z,w) with (xy)(zw) != (xz)(yw); exhaustive if idx is None."""
    t = _as_array(table)
    if idx is None:
        xy = t[:, :, None, None]
        zw = t[None, None, :, :]
        lhs = t[xy, zw]
        rhs = t[t[:, None, :, None], t[None, :, None, :]]
        return int(np.count_nonzero(lhs != rhs))
    x, y, z, w = idx
    return int(np.count_nonzero(t[t[x, y], t[z, w]] != t[t[x, z], t[y, w]]))


def is_medial_table(table, seed: int = 0, samples: int = MEDIAL_SAMPLES) -> bool:
    """Exhaustive for N <= 63; otherwise seeded sampling plus an exact Z_N certificate."""
    t = _as_array(table)
    N = t.shape[0]
    if N <= EXHAUSTIVE_LIMIT:
        return medial_violations(t) == 0
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, N, size=(4, samples))
    if medial_violations(t, tuple(idx)) != 0:
        return False
    return find_relabel_permutation(t, N) is not None


def is_imc(table) -> bool:
    t = _as_array(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        return False
    N = t.shape[0]
    return bool(np.array_equal(t, t.T) and np.array_equal(np.diag(t), np.arange(N))
                and is_latin(t) and is_medial_table(t))


# the boxplus group

def _group_certificate(G: np.ndarray, e: int):
    N = G.shape[0]
    if not np.array_equal(G[e], np.arange(N)):
        raise ClosureFailure("c is not an identity for boxplus")
    if not np.array_equal(G, G.T):
        raise ClosureFailure("boxplus is not commutative")
    if not np.all(np.any(G == e, axis=1)):
        raise ClosureFailure("some element has no inverse")
    r = np.arange(N)
    if not np.array_equal(G[G[:, :, None], r[None, None, :]], G[r[:, None, None], G[None, :, :]]):
        raise ClosureFailure("boxplus is not associative")


def boxplus_group(A: Algebra, idm: IdempotentSet, c: int = 0, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Table of x boxplus y = L_c^{-1}(x y) on the idempotents (indices into idm)."""
    E = idm.elements
    m = len(E)
    Linv = linalg.inverse(A.L(E[c]), A.field)
    G = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(i, m):
            v = linalg.matmul(Linv, A.mul(E[i], E[j]), A.field)
            k = _find_index(E, v, A, tol)
            if k is None:
                raise ClosureFailure(f"c_{i} boxplus c_{j} is not an idempotent")
            G[i, j] = G[j, i] = k
    _group_certificate(G, c)
    return G


def table_boxplus(table, e: int = 0) -> np.ndarray:
    """x boxplus y = L_e^{-1}(x o y) computed on the table alone."""
    t = _as_array(table)
    inv = np.empty(t.shape[0], dtype=np.int64)
    inv[t[e]] = np.arange(t.shape[0])
    return inv[t]


def find_generator(G: np.ndarray, identity: int | None = None) -> int | None:
    N = G.shape[0]
    if identity is None:
        ids = [e for e in range(N) if np.array_equal(G[e], np.arange(N))]
        if not ids:
            return None
        identity = ids[0]
    for g in range(N):
        x, k = g, 1
        while x != identity and k <= N:
            x = G[x, g]
            k += 1
        if k == N and x == identity:
            return g
    return None


def _phi_from_generator(G: np.ndarray, g: int, identity: int) -> list:
    N = G.shape[0]
    phi = [0] * N
    x = identity
    for k in range(N):
        phi[x] = k
        x = G[x, g]
    return phi


def half_rule_holds(table, phi, N: int) -> bool:
    """phi(table[i, j]) == (phi(i) + phi(j)) / 2 mod N on all pairs."""
    t = _as_array(table)
    p = np.asarray(phi, dtype=np.int64)
    h = (N + 1) // 2
    return bool(np.array_equal(p[t], ((p[:, None] + p[None, :]) * h) % N))


def isotopy_to_ZN(A: Algebra, idm: IdempotentSet, tol: Tolerance = DEFAULT_TOL) -> ZNRelabeling:
    G = boxplus_group(A, idm, 0, tol)
    g = find_generator(G, 0)
    if g is None:
        raise NotCyclic("boxplus group has no generator")
    phi = _phi_from_generator(G, g, 0)
    t = idm_table(A, idm, tol)
    return ZNRelabeling(phi, len(phi), half_rule_holds(t, phi, len(phi)), g)


def find_relabel_permutation(table, N: int | None = None) -> list | None:
    """pi with pi(table[i, j]) = (pi(i) + pi(j))/2 mod N, via a generator of the boxplus group."""
    t = _as_array(table)
    N = t.shape[0] if N is None else N
    if N % 2 == 0 or N != t.shape[0] or not is_latin(t):
        return None
    G = table_boxplus(t, 0)
    try:
        _group_certificate(G, 0)
    except ClosureFailure:
        return None
    g = find_generator(G, 0)
    if g is None:
        return None
    phi = _phi_from_generator(G, g, 0)
    return phi if half_rule_holds(t, phi, N) else None


def relabel(table, phi) -> np.ndarray:
    """Table of the operation transported along phi: out[phi(i), phi(j)] = phi(t[i, j])."""
    t = _as_array(table)
    p = np.asarray(phi)
    out = np.empty_like(t)
    out[p[:, None], p[None, :]] = p[t]
    return out


# the Z_N model

def build_ZN_quasigroup(N: int) -> QuasigroupTable:
    if N < 1 or N % 2 == 0:
        raise EvenOrder(f"N = {N}: 2 is not invertible")
    u = np.arange(N)
    h = (N + 1) // 2
    return QuasigroupTable(((u[:, None] + u[None, :]) * h) % N)


def omega(m: int, N: int) -> int:
    """min p >= 1 with (2^p - 1) m = 0 mod N."""
    m %= N
    p, q = 1, 1
    while (q * m) % N:
        p += 1
        q = 2 * q + 1
    return p


def circ_order(x: int, y: int, N: int) -> int:
    """Order of y under L_x(y) = x o y in Z_N, with the direct iteration as a cross-check."""
    if N % 2 == 0:
        raise EvenOrder(f"N = {N}")
    w = omega(x - y, N)
    h = (N + 1) // 2
    v, k = ((x + y) * h) % N, 1
    while v != y % N:
        v = ((x + v) * h) % N
        k += 1
    assert k == w, (k, w)
    return w


def p_set(n: int) -> set:
    """Orders realised by x != y in Z_(2^n - 1)."""
    N = 2**n - 1
    return {omega(m, N) for m in range(1, N)}


def p_set_gcd(n: int) -> set:
    """{p <= n : gcd(p, n) > 1}."""
    return {p for p in range(1, n + 1) if math.gcd(p, n) > 1}


def period_set(n: int) -> set:
    """p <= n for which L_x^p y = y for some x != y (not necessarily the least such p)."""
    N = 2**n - 1
    return {p for p in range(1, n + 1) if any(((2**p - 1) * m) % N == 0 for m in range(1, N))}


def orbits(N: int, x: int) -> list:
    """Cycles of y -> x o y on Z_N, each started at its least unvisited element."""
    if N % 2 == 0:
        raise EvenOrder(f"N = {N}")
    h = (N + 1) // 2
    seen = [False] * N
    cycles = []
    for start in range(N):
        if seen[start]:
            continue
        cyc, y = [], start
        while not seen[y]:
            seen[y] = True
            cyc.append(y)
            y = ((x + y) * h) % N
        cycles.append(cyc)
    return cycles
