"""Dense linear algebra over either backend.

Over C this defers to numpy; over F_p it uses exact Gauss-Jordan elimination
on int64 residues. Matrices are tiny (n <= 16), so no blocking.
"""
from __future__ import annotations

import numpy as np

from .scalar import DEFAULT_TOL, FieldDescriptor, Tolerance


def matmul(a, b, field: FieldDescriptor):
    if field.is_prime:
        return np.mod(np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64), field.p)
    return np.asarray(a) @ np.asarray(b)


def identity(n: int, field: FieldDescriptor):
    return np.eye(n, dtype=field.dtype)


def rref_mod(m: np.ndarray, p: int):
    """Reduced row echelon form over F_p; returns (rref, pivot columns)."""
    a = np.mod(np.array(m, dtype=np.int64), p)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = np.mod(a[r] * pow(int(a[r, c]), -1, p), p)
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = np.mod(a[i] - a[i, c] * a[r], p)
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, field: FieldDescriptor, tol: Tolerance = DEFAULT_TOL) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    if field.is_prime:
        return len(rref_mod(m, field.p)[1])
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol.eq_tol))


def nullspace(m, field: FieldDescriptor, tol: Tolerance = DEFAULT_TOL, threshold: float | None = None):
    """Columns spanning {v : m v = 0}.

    Orthonormal over C (singular values at or below ``threshold``, default
    eq_tol, count as zero); reduced-echelon over F_p.
    """
    m = np.asarray(m)
    n = m.shape[1]
    if field.is_prime:
        r, piv = rref_mod(m, field.p)
        free = [c for c in range(n) if c not in piv]
        basis = np.zeros((n, len(free)), dtype=np.int64)
        for j, f in enumerate(free):
            basis[f, j] = 1
            for i, pc in enumerate(piv):
                basis[pc, j] = (-r[i, f]) % field.p
        return basis
    thr = tol.eq_tol if threshold is None else threshold
    _, s, vh = np.linalg.svd(m)
    s_full = np.zeros(n)
    s_full[: s.size] = s
    return vh.conj().T[:, s_full <= thr]


def inverse(m, field: FieldDescriptor):
    m = np.asarray(m)
    n = m.shape[0]
    if field.is_prime:
        aug = np.concatenate([np.mod(m, field.p), np.eye(n, dtype=np.int64)], axis=1)
        r, piv = rref_mod(aug, field.p)
        if piv[:n] != list(range(n)):
            raise np.linalg.LinAlgError("singular matrix over F_p")
        return r[:, n:]
    return np.linalg.inv(m)


def solve(m, b, field: FieldDescriptor):
    if field.is_prime:
        return matmul(inverse(m, field), b, field)
    return np.linalg.solve(m, b)


def det(m, field: FieldDescriptor):
    m = np.asarray(m)
    if field.is_prime:
        p = field.p
        a = np.mod(np.array(m, dtype=np.int64), p)
        n = a.shape[0]
        d = 1
        for c in range(n):
            nz = np.nonzero(a[c:, c])[0]
            if nz.size == 0:
                return 0
            k = c + nz[0]
            if k != c:
                a[[c, k]] = a[[k, c]]
                d = -d
            d = d * int(a[c, c]) % p
            inv = pow(int(a[c, c]), -1, p)
            for i in range(c + 1, n):
                if a[i, c]:
                    a[i] = np.mod(a[i] - (a[i, c] * inv % p) * a[c], p)
        return d % p
    return complex(np.linalg.det(m)) if m.size else 1.0 + 0j


def char_poly(m, field: FieldDescriptor) -> np.ndarray:
    """Coefficients of det(m - t I), ascending powers of t, length n + 1.

    Faddeev-LeVerrier; over F_p with p <= n the recurrence divides by p, so
    the division-free Berkowitz recurrence is used instead.
    """
    m = np.asarray(m)
    n = m.shape[0]
    if field.is_prime and field.p <= n:
        monic = _berkowitz_mod(m, field.p)
    else:
        monic = _faddeev_leverrier(m, field)
    # monic holds det(t I - m) descending: t^n + c_{n-1} t^{n-1} + ... + c_0
    asc = monic[::-1].copy()
    if n % 2:
        asc = field.reduce(-asc) if field.is_prime else -asc
    return asc


def _faddeev_leverrier(m, field: FieldDescriptor) -> np.ndarray:
    n = m.shape[0]
    coeffs = [1 if field.is_prime else 1.0 + 0j]
    mk = field.zeros((n, n))
    eye = identity(n, field)
    c = coeffs[0]
    for k in range(1, n + 1):
        mk = matmul(m, mk + c * eye, field) if field.is_prime else m @ (mk + c * eye)
        tr = np.trace(mk)
        if field.is_prime:
            c = (-int(tr) * pow(k, -1, field.p)) % field.p
        else:
            c = -tr / k
        coeffs.append(c)
    return field.array(coeffs)


def _berkowitz_mod(m, p: int) -> np.ndarray:
    n = m.shape[0]
    a = np.mod(np.array(m, dtype=np.int64), p)
    # vect = char poly of leading r x r block, descending with leading 1
    vect = np.array([1, (-a[0, 0]) % p], dtype=np.int64)
    for r in range(1, n):
        R = a[r, :r]
        C = a[:r, r]
        A = a[:r, :r]
        col = [1, (-a[r, r]) % p]
        powc = C.copy()
        for _ in range(r):
            col.append((-int(R @ powc)) % p)
            powc = np.mod(A @ powc, p)
        toeplitz = np.zeros((r + 2, r + 1), dtype=np.int64)
        for i in range(r + 2):
            for j in range(r + 1):
                if 0 <= i - j < len(col):
                    toeplitz[i, j] = col[i - j]
        vect = np.mod(toeplitz @ vect, p)
    return vect


def poly_eval(coeffs, t, field: FieldDescriptor):
    """Evaluate an ascending coefficient vector at t (Horner)."""
    acc = 0 if field.is_prime else 0j
    for c in coeffs[::-1]:
        acc = acc * t + c
        if field.is_prime:
            acc %= field.p
    return acc
