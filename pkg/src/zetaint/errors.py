"""Exception hierarchy shared by every layer of the package."""


class ZetaIntError(Exception):
    """Base class for all errors raised by zetaint."""


class DomainError(ZetaIntError, ValueError):
    """Argument lies outside the region where an operation is defined."""


class PoleError(DomainError):
    """Argument sits on (or too close to) a pole of the function."""


class ConvergenceError(ZetaIntError, ArithmeticError):
    """An effort cap was hit before the requested tolerance was reached."""
