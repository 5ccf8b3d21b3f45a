"""
Exception hierarchy for Gibbs Explorer

Runtime failures raise subclasses of GibbsExplorerError so the CLI can map
them onto exit codes; value-domain violations raise ValueError subclasses.
"""

from typing import Optional


class GibbsExplorerError(Exception):
    """Base class for all runtime errors raised by the engine"""

    exit_code = 2


class ConfigValidationError(GibbsExplorerError, ValueError):
    """Configuration violates the documented schema"""

    exit_code = 1

    def __init__(self, key: str, message: str, line: Optional[int] = None):
        self.key = key
        self.line = line
        location = f"line {line}: " if line is not None else ""
        super().__init__(f"{location}{key}: {message}")


class NotLocallyStableError(GibbsExplorerError):
    """Operation needs a local-stability bound the model does not provide"""


class RejectionBudgetExceeded(GibbsExplorerError):
    """Rejection sampler ran out of attempts"""

    def __init__(self, attempts: int, mean_acceptance: float):
        self.attempts = attempts
        self.mean_acceptance = mean_acceptance
        super().__init__(
            f"no proposal accepted after {attempts} attempts "
            f"(mean acceptance ratio {mean_acceptance:.3e}); "
            "the partition function is far below exp(int theta dlambda)"
        )


class SeriesNotSummableError(GibbsExplorerError):
    """A conversion series does not decay at its cutoff"""

    def __init__(self, condition: str, cutoff: int, last_term: float):
        self.condition = condition
        self.cutoff = cutoff
        self.last_term = last_term
        super().__init__(
            f"summability condition violated: {condition} "
            f"(term {last_term:.3e} at cutoff {cutoff})"
        )


class GeometryError(GibbsExplorerError):
    """Geometric construction cannot be carried out"""


class VerificationFailure(GibbsExplorerError):
    """A verification suite did not pass the z-score policy"""

    exit_code = 3
