"""Exception hierarchy for the toolkit.

Every error that can surface through the CLI maps to a stable exit code so
scripts can branch on failure class. The mapping lives in ``cli.EXIT_CODES``
and is documented in the README.
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(ToolkitError):
    """Arm description file is malformed, unparseable, or invalid."""


class ValidationError(ConfigError):
    """An arm description violates a model invariant.

    Carries the machine-readable violation list produced by
    :func:`armkit.model.validate_arm`.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(f"{v.code} at {v.path}: {v.message}" for v in self.violations)
        super().__init__(f"arm description failed validation: {lines}")


class ComputationError(ToolkitError):
    """A numeric routine could not produce a result."""


class UnreachableTargetError(ComputationError):
    """IK residual stagnated above tolerance; target is outside the
    reachable set (or unreachable at the requested orientation).

    ``best_residual`` is the best ``(position_m, orientation_rad)`` error
    pair seen across all attempts, or None when the target was rejected
    before iterating (reach-bound precheck).
    """

    def __init__(self, message, best_residual):
        super().__init__(message)
        self.best_residual = best_residual


class NoConvergenceError(ComputationError):
    """Iteration budget exhausted while the residual was still improving.

    ``best_residual`` follows the same ``(position_m, orientation_rad)``
    convention as :class:`UnreachableTargetError` for IK; ``bracket`` carries
    the last search bracket for scalar searches (payload bisection).
    """

    def __init__(self, message, best_residual=None, bracket=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.bracket = bracket


class DegenerateFitError(ComputationError):
    """Calibration data does not determine the model (e.g. all speeds equal)."""


class EmptyCloudError(ComputationError):
    """A workspace statistic was requested on an empty point cloud."""


class ResourceLimitError(ToolkitError):
    """Requested sample count exceeds the configured cap."""


class BomDataError(ToolkitError):
    """BOM file is malformed or a stated line total contradicts
    quantity x unit cost."""


class OutputError(ToolkitError):
    """Failed to write a requested output file."""
