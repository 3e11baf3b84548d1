"""Exception types shared across the package."""

from __future__ import annotations


class MlcError(Exception):
    """Base class for all mlcontour errors."""


class ContourValidityError(MlcError, ValueError):
    """A contour specification violates its admissibility window.

    Carries the full :class:`~mlcontour.geometry.ValidityReport` so callers
    can inspect which constraints failed and by how much.
    """

    def __init__(self, report, message: str = "contour specification is not admissible"):
        self.report = report
        details = "; ".join(
            f"{v.constraint} (distance {v.distance:.3g})" for v in report.violations
        )
        super().__init__(f"{message}: {details}" if details else message)


class PreconditionError(MlcError, ValueError):
    """An evaluation route was called outside its stated preconditions."""


class ConvergenceError(MlcError, RuntimeError):
    """The quadrature (or series) failed to reach the requested tolerance."""


class IntegrandError(MlcError, ArithmeticError):
    """The integrand produced a non-finite sample; the segment is aborted."""
