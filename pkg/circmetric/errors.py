class CircmetricError(Exception):
    """Base class. `exit_code` is what the command line returns for it."""

    exit_code = 1

    def __init__(self, message="circmetric computation failed."):
        self.message = message
        super().__init__(self.message)


class ConfigError(CircmetricError):
    exit_code = 2

    def __init__(self, message="Invalid configuration."):
        super().__init__(message)


class OrderingViolation(ConfigError):
    def __init__(self, message="Metric coefficients must satisfy a > c > b > 0."):
        super().__init__(message)


class NonFinite(ConfigError):
    def __init__(self, message="Input contains NaN or Inf."):
        super().__init__(message)


class InvalidParams(ConfigError):
    def __init__(self, message="Conformal parameters must satisfy 0 < beta < alpha."):
        super().__init__(message)


class OutOfDomain(ConfigError):
    def __init__(self, message="Point lies outside the field domain."):
        super().__init__(message)


class UnknownFamily(ConfigError):
    def __init__(self, message="Unknown field family."):
        super().__init__(message)


class GuardError(CircmetricError):
    exit_code = 3

    def __init__(self, message="Mathematical precondition violated."):
        super().__init__(message)


class EigenvectorInput(GuardError):
    def __init__(
        self,
        message="Vector is a real eigenvector of q (proportional to (1,1,1,1) or (1,-1,1,-1)); angles are undefined.",
    ):
        super().__init__(message)


class ZeroVector(GuardError):
    def __init__(self, message="Vector is zero; angles are undefined."):
        super().__init__(message)


class NotPositiveDefinite(GuardError):
    def __init__(self, message="Metric is not positive definite."):
        super().__init__(message)


class BoundaryFixedPoint(GuardError):
    def __init__(self, message="cos phi = -1 is the repelling fixed point of the cosine recurrence."):
        super().__init__(message)


class SingularMetric(GuardError):
    def __init__(self, message="Metric is singular."):
        super().__init__(message)


class NumericalError(CircmetricError):
    exit_code = 4

    def __init__(self, message="Numerical failure."):
        super().__init__(message)


class ScaleOverflow(NumericalError):
    def __init__(self, message="Metric entries exceed 1e300; use renormalization."):
        super().__init__(message)
