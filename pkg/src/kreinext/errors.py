"""Exception types shared across the package."""


class KreinExtError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(KreinExtError):
    """A system or matrix has inconsistent dimensions."""


class ExprSyntaxError(KreinExtError):
    """An expression string failed to parse.

    Carries the byte offset of the offending token.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvaluationError(KreinExtError):
    """An expression produced a non-finite or undefined value."""

    def __init__(self, message, x=None, source=None):
        detail = message
        if source is not None:
            detail += f" in '{source}'"
        if x is not None:
            detail += f" at x={x}"
        super().__init__(detail)
        self.x = x
        self.source = source


class IntegrationError(KreinExtError):
    """The ODE integrator failed (step underflow, coefficient blow-up)."""


class GammaBijectivityError(KreinExtError):
    """The boundary-trace map restricted to the kernel is numerically singular.

    This typically indicates the minimal operator is not strictly positive,
    so the kernel-basis construction does not apply.
    """


class NumericalError(KreinExtError):
    """An internal cross-check failed beyond its tolerance."""
