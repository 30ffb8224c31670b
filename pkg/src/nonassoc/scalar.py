"""Scalar fields: complex doubles with tolerance equality, and prime fields F_p.

Vectors and matrices are plain numpy arrays: ``complex128`` over C and
``int64`` residues (always reduced into ``[0, p)``) over F_p.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy

from .errors import FieldMismatch, NoRootOfUnity, NotPrime

COMPLEX = "complex"
PRIME = "prime"

# int64 products of two residues must not overflow after a short sum
MAX_PRIME = 1 << 26


@dataclass(frozen=True)
class Tolerance:
    eq_tol: float = 1e-9
    newton_tol: float = 1e-12
    dedupe_tol: float = 1e-6

    def __post_init__(self):
        if not (0 < self.newton_tol <= self.dedupe_tol and self.eq_tol > 0):
            raise ValueError(f"inconsistent tolerances {self}")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str = COMPLEX
    p: int | None = None

    def __post_init__(self):
        if self.kind == COMPLEX:
            if self.p is not None:
                raise ValueError("complex field takes no modulus")
        elif self.kind == PRIME:
            if self.p is None or not sympy.isprime(int(self.p)):
                raise NotPrime(f"{self.p} is not prime")
            if self.p < 5:
                raise NotPrime(f"characteristic {self.p} excluded (need p >= 5)")
            if self.p >= MAX_PRIME:
                raise NotPrime(f"p={self.p} too large for int64 residues")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def is_prime(self) -> bool:
        return self.kind == PRIME

    @property
    def dtype(self):
        return np.int64 if self.is_prime else np.complex128

    def __str__(self):
        return f"F_{self.p}" if self.is_prime else "C"

    # -- arrays -------------------------------------------------------------
    def array(self, values) -> np.ndarray:
        if self.is_prime:
            a = np.asarray(values)
            if np.iscomplexobj(a) or a.dtype.kind == "f":
                if np.any(np.abs(a - np.round(a.real)) > 0):
                    raise ValueError("non-integer value for a prime field")
                a = np.round(a.real)
            return np.mod(a.astype(np.int64), self.p)
        return np.asarray(values, dtype=np.complex128)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def reduce(self, a):
        return np.mod(a, self.p) if self.is_prime else a

    def scalar(self, v):
        if self.is_prime:
            return int(v) % self.p
        return complex(v)

    def inv(self, v):
        if self.is_prime:
            v = int(v) % self.p
            if v == 0:
                raise ZeroDivisionError("0 has no inverse")
            return pow(v, -1, self.p)
        return 1.0 / complex(v)

    def neg_one(self):
        return self.p - 1 if self.is_prime else -1.0 + 0j

    def norm(self, v) -> float:
        """Max-abs norm over C; 0/1 indicator of nonzero over F_p."""
        a = np.asarray(v)
        if a.size == 0:
            return 0.0
        if self.is_prime:
            return float(np.any(np.mod(a, self.p) != 0))
        return float(np.max(np.abs(a)))

    def random_vector(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.is_prime:
            return rng.integers(0, self.p, size=n).astype(np.int64)
        return rng.standard_normal(n) + 1j * rng.standard_normal(n)

    def to_json(self) -> dict:
        return {"kind": PRIME, "p": self.p} if self.is_prime else {"kind": COMPLEX}

    @classmethod
    def from_json(cls, d: dict) -> "FieldDescriptor":
        return cls(d["kind"], d.get("p"))


COMPLEX_FIELD = FieldDescriptor()


def prime_field(p: int) -> FieldDescriptor:
    return FieldDescriptor(PRIME, int(p))


@lru_cache(maxsize=None)
def _least_primitive_root(p: int) -> int:
    return int(sympy.primitive_root(p))


def primitive_root_of_unity(n: int, field: FieldDescriptor = COMPLEX_FIELD):
    """exp(2*pi*i/n) over C; g**((p-1)/n) for the least primitive root g over F_p."""
    if n < 1:
        raise ValueError("n must be positive")
    if not field.is_prime:
        if n == 1:
            return 1.0 + 0j
        if n == 2:
            return -1.0 + 0j
        return complex(np.exp(2j * np.pi / n))
    if (field.p - 1) % n:
        raise NoRootOfUnity(f"no element of order {n} in F_{field.p}")
    return pow(_least_primitive_root(field.p), (field.p - 1) // n, field.p)


def root_powers(n: int, field: FieldDescriptor = COMPLEX_FIELD) -> np.ndarray:
    """[eps^0, ..., eps^(n-1)]; exact table indexing avoids drift from repeated products."""
    if field.is_prime:
        e = primitive_root_of_unity(n, field)
        return np.array([pow(e, k, field.p) for k in range(n)], dtype=np.int64)
    k = np.arange(n)
    out = np.exp(2j * np.pi * k / n)
    # pin the values that have exact representations
    out[0] = 1.0
    if n % 2 == 0:
        out[n // 2] = -1.0
    if n % 4 == 0:
        out[n // 4] = 1j
        out[3 * n // 4] = -1j
    return out


def half(field: FieldDescriptor = COMPLEX_FIELD):
    if field.is_prime:
        return (field.p + 1) // 2
    return 0.5 + 0j


def approx_eq(a, b, tol: Tolerance = DEFAULT_TOL, field: FieldDescriptor = COMPLEX_FIELD) -> bool:
    if field.is_prime:
        if isinstance(a, (complex, float)) or isinstance(b, (complex, float)):
            raise FieldMismatch("float scalar compared in a prime field")
        return (int(a) - int(b)) % field.p == 0
    return abs(complex(a) - complex(b)) <= tol.eq_tol


def scalar_to_json(v, field: FieldDescriptor):
    if field.is_prime:
        return int(v) % field.p
    v = complex(v)
    return [v.real, v.imag]


def scalar_from_json(v, field: FieldDescriptor):
    if field.is_prime:
        if isinstance(v, list):
            raise FieldMismatch("complex pair in a prime-field file")
        return int(v) % field.p
    if not isinstance(v, list) or len(v) != 2:
        raise FieldMismatch(f"expected [re, im], got {v!r}")
    return complex(v[0], v[1])


def array_to_json(a: np.ndarray, field: FieldDescriptor):
    a = np.asarray(a)
    if a.ndim == 0:
        return scalar_to_json(a.item(), field)
    return [array_to_json(x, field) for x in a]


def array_from_json(data, field: FieldDescriptor) -> np.ndarray:
    def walk(d):
        if field.is_prime:
            return [walk(x) for x in d] if isinstance(d, list) else scalar_from_json(d, field)
        if isinstance(d, list) and len(d) == 2 and all(isinstance(x, (int, float)) for x in d):
            return scalar_from_json(d, field)
        return [walk(x) for x in d]

    return field.array(walk(data))
