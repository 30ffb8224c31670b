"""Exception hierarchy shared by all modules."""


class AlgebraError(Exception):
    """Base class for every error raised by this package."""


class FieldError(AlgebraError):
    pass


class NotPrime(FieldError):
    pass


class NoRootOfUnity(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


class PrimeFieldUnsupported(FieldError):
    pass


class NonCommutative(AlgebraError):
    pass


class AlgebraMismatch(AlgebraError):
    pass


class ZeroInput(AlgebraError):
    pass


class NotAnIdeal(AlgebraError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class NotARoot(AlgebraError):
    pass


class NotIMCQuasigroup(AlgebraError):
    pass


class SearchSpaceTooLarge(AlgebraError):
    pass


class IncompleteSet(AlgebraError):
    pass


class HalfEigenvalue(AlgebraError):
    pass


class DegreeTooHigh(AlgebraError):
    pass


class NotAnIdempotent(AlgebraError):
    pass


class NotSimpleSpectrum(AlgebraError):
    pass


class NotReduced(AlgebraError):
    pass


class ProjectionLeakage(AlgebraError):
    pass


class NotMedialIsospectral(AlgebraError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class NotProportional(AlgebraError):
    pass


class SingularLc(AlgebraError):
    pass


class AssociativityFailed(AlgebraError):
    pass


class NotIsospectral(AlgebraError):
    pass


class ProductEscapes(AlgebraError):
    pass


class ClosureFailure(AlgebraError):
    pass


class NotCyclic(AlgebraError):
    pass


class EvenOrder(AlgebraError):
    pass
