"""Exception hierarchy shared by all secshare modules."""

from __future__ import annotations


class SecshareError(Exception):
    """Base class for all package errors."""


class ConfigError(SecshareError, ValueError):
    """Invalid network configuration or configuration file."""


class DomainError(SecshareError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class BranchError(SecshareError, ValueError):
    """The requested formula branch is singular at this parameter point.

    Raised by the general-branch evaluators exactly on the equal-power
    line mu == 1/n_s; callers should use the Gamma-moment branch there.
    """


class ConvergenceError(SecshareError, RuntimeError):
    """A quadrature failed to reach its requested tolerance.

    Carries the best available estimate and the error bound attached to it.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (best estimate {estimate!r}, error bound {error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


class CancellationError(SecshareError, ArithmeticError):
    """Catastrophic cancellation detected in an alternating sum.

    ``order`` is the summation order m at which the out-of-range term
    was detected.
    """

    def __init__(self, message: str, order: int):
        super().__init__(f"{message} (detected at order m={order})")
        self.order = order


class ResourceLimitError(SecshareError, RuntimeError):
    """A configured resource cap (partition order, point count, ...) was exceeded."""


class InfeasibleError(SecshareError, RuntimeError):
    """The primary-user QoS constraint cannot be met for any transmit power."""


class DegenerateFieldError(SecshareError, RuntimeError):
    """An interference field came up empty and re-drawing is disabled."""


class ComputationCancelled(SecshareError, RuntimeError):
    """A cooperative cancellation token was set while an integral was running."""
