"""Commutative nonassociative algebras: medial isospectral models, idempotents, and checks."""
from .algebra import Algebra, Element
from .idempotents import IdempotentSet, enumerate_auto
from .scalar import COMPLEX_FIELD, DEFAULT_TOL, FieldDescriptor, Tolerance, prime_field

__all__ = [
    "Algebra",
    "Element",
    "IdempotentSet",
    "enumerate_auto",
    "COMPLEX_FIELD",
    "DEFAULT_TOL",
    "FieldDescriptor",
    "Tolerance",
    "prime_field",
]
