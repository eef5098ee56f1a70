"""Gaussian probabilities over polyhedral regions by expectation propagation.

The heavy lifting lives in the compiled extension ``epmgp._core``; this
package re-exports its operations. Constraints are ``(direction, lower,
upper)`` tuples with ``None`` meaning unbounded on that side.
"""

from ._core import (  # noqa: F401
    NotPositiveDefiniteError,
    NotReducibleError,
    TailUnderflowError,
    UnsupportedError,
    ValidationError,
    __version__,
    genz_qmc,
    mc_rejection,
    orthant_analytic,
    region_metrics,
    solve,
    truncated_moments,
    univariate_exact,
    whiten,
)

__all__ = [
    "solve",
    "mc_rejection",
    "genz_qmc",
    "orthant_analytic",
    "univariate_exact",
    "truncated_moments",
    "region_metrics",
    "whiten",
    "ValidationError",
    "NotPositiveDefiniteError",
    "TailUnderflowError",
    "NotReducibleError",
    "UnsupportedError",
    "__version__",
]
