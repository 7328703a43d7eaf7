"""
Exception hierarchy for the zeta-gaps toolkit
"""

from typing import Optional


class ZetaGapsError(Exception):
    """Base class for every error raised by the toolkit"""


class RationalArithmeticError(ZetaGapsError, ZeroDivisionError):
    """Exact rational operation with no defined result (division by zero)"""


class UnsupportedParameterError(ZetaGapsError, ValueError):
    """Parameter outside the implemented range (e.g. h > 7, k outside [3, 7])"""


class PoleError(ZetaGapsError, ArithmeticError):
    """Rational function evaluated at a root of its denominator"""


class DomainError(ZetaGapsError, ValueError):
    """Arguments outside the mathematical domain of a formula"""


class OutOfRegimeError(ZetaGapsError, ValueError):
    """Asymptotic formula requested below the height where it is valid"""


class InsufficientZerosError(ZetaGapsError, ValueError):
    """Gap statistics need at least two zeros"""


class PanelBudgetError(ZetaGapsError, ValueError):
    """Composite quadrature asked for more panels than the configured budget"""


class QuadratureError(ZetaGapsError, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance within the panel budget.

    The best estimate found so far is kept on the exception.
    """

    def __init__(self, message: str, best_estimate: float,
                 abs_error_estimate: float, panels_used: int):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.abs_error_estimate = abs_error_estimate
        self.panels_used = panels_used

    def __reduce__(self):
        return (self.__class__, (str(self), self.best_estimate,
                                 self.abs_error_estimate, self.panels_used))


def describe(error: Exception, context: Optional[str] = None) -> str:
    """One-line description used by the CLI when reporting a failure"""
    prefix = f"{context}: " if context else ""
    return f"{prefix}{type(error).__name__}: {error}"
