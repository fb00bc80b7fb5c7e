"""Exception hierarchy shared by every evaluator in the package."""


class HyperfunError(ArithmeticError):
    """Base class for all numerical failures raised by hyperfun."""


class DomainError(HyperfunError, ValueError):
    """Arguments or parameters lie outside the region an evaluator supports."""


class PoleError(HyperfunError, ZeroDivisionError):
    """A Gamma quotient or Pochhammer symbol hit a pole."""


class ConvergenceError(HyperfunError):
    """A truncated series did not meet its tolerance before its cap."""
