"""Exception hierarchy.

Validation errors (bad inputs, unsupported variants) derive from
:class:`HessvalError`; failures of a numerical certificate (class
membership, ill-conditioned fits) additionally derive from
:class:`CertificationError` so the command line can map them to a distinct
exit status.
"""


class HessvalError(Exception):
    """Base class for all library errors."""


class CertificationError(HessvalError):
    """A numerical certificate could not be established."""


class DimensionMismatch(HessvalError, ValueError):
    pass


class NotDifferentiable(HessvalError, ArithmeticError):
    pass


class UnboundedResult(HessvalError, ArithmeticError):
    pass


class NonpositiveScale(HessvalError, ValueError):
    pass


class NonConvexMin(HessvalError, ValueError):
    """The pointwise minimum of two convex functions is not convex."""


class EmptyDomain(HessvalError, ValueError):
    pass


class UnboundedDomain(HessvalError, ValueError):
    pass


class UnsupportedVariant(HessvalError, TypeError):
    pass


class IndexOutOfRange(HessvalError, IndexError):
    pass


class NonAlignedSubspaces(HessvalError, ValueError):
    pass


class OriginSingularity(HessvalError, ValueError):
    pass


class NonSmoothXi(HessvalError, ValueError):
    pass


class SingularHessian(HessvalError, ValueError):
    pass


class NonRadial(HessvalError, ValueError):
    pass


class ClassViolation(CertificationError, ValueError):
    pass


class DegenerateFit(CertificationError, ArithmeticError):
    pass


class IllConditionedVandermonde(CertificationError, ArithmeticError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition
