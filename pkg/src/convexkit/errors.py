"""Exception hierarchy shared by every convexkit module."""


class ConvexKitError(Exception):
    """Base class for all convexkit errors."""


class ValidationError(ConvexKitError, ValueError):
    """Input violates a documented invariant (CLI exit code 2)."""


class DomainError(ValidationError):
    """An argument lies outside the domain of the function it is fed to."""


class WeightError(ValidationError):
    """Convex or external weights violate their sign/sum constraints."""


class UnknownFunction(ValidationError, KeyError):
    """Catalog id is not registered."""

    def __str__(self):
        return Exception.__str__(self)


class PreconditionError(ValidationError):
    """A hypothesis of the checked statement does not hold for the input."""


class CertificateError(PreconditionError):
    """The function lacks the class certificate an operation requires."""


class NonFinite(ConvexKitError, ArithmeticError):
    """A rule produced inf or nan."""


class NonConvergence(ConvexKitError, ArithmeticError):
    """Adaptive quadrature hit its depth cap."""


class UnknownInequality(ValidationError):
    """Inequality name is not one the harness can verify."""


class MalformedCSV(ConvexKitError):
    """A sample file row could not be parsed (CLI exit code 3)."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row
