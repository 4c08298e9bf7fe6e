"""Exception types raised by the lie_tools and loci packages.

Input problems subclass ValueError so callers can catch them either by the
precise class or by the builtin.
"""


class FieldMismatch(ValueError):
    pass


class NotInvertible(ValueError):
    pass


class UnsupportedField(ValueError):
    pass


class BadConstantTerm(ValueError):
    pass


class WeightMismatch(ValueError):
    pass


class ShapeError(ValueError):
    pass


class NonIntegralCoefficient(ValueError):
    pass


class BadRank(ValueError):
    pass


class DomainError(ValueError):
    pass


class TooLarge(ValueError):
    """Raised when an enumeration would exceed the configured cell cap"""


class InvalidGrowthVector(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class UnsupportedParameter(ValueError):
    pass


class InternalError(RuntimeError):
    """A computed result contradicts an identity that must hold"""
