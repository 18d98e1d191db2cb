import logging
from typing import Any

import numpy as np
from scipy import integrate

from config.constants import ExperimentDefaults, ScheduleConfig
from core.errors import InvalidParameter
from geometry.matrices import Mat2, frobenius_norm
from schedules.base import Schedule
from schedules.canonical import canonical_pair, default_drift, interpolant
from schedules.primitives import Drift, PerturbedSchedule, PiecewiseConstantSchedule, SmoothedSchedule

__all__ = [
    "canonical_pair", "canonical_schedule", "default_drift", "deviation_integral",
    "interpolant", "schedule_norm_bound", "shifted_matrices", "shifted_schedule",
    "ScheduleFactory",
]


def canonical_schedule(c: float) -> PiecewiseConstantSchedule:
    """A(1) on [2k, 2k+1), A(2) on [2k+1, 2k+2)"""
    a1, a2 = canonical_pair(c)
    return PiecewiseConstantSchedule([(1.0, a1), (1.0, a2)])


def shifted_matrices(c: float) -> tuple[Mat2, Mat2]:
    """B(i) = A(i) + I, the zero-diagonal pair; (B(i))^2 = I/4."""
    a1, a2 = canonical_pair(c)
    return a1 + Mat2.identity(), a2 + Mat2.identity()


def shifted_schedule(c: float) -> PiecewiseConstantSchedule:
    b1, b2 = shifted_matrices(c)
    return PiecewiseConstantSchedule([(1.0, b1), (1.0, b2)])


def schedule_norm_bound(schedule: Schedule) -> float:
    """M: the supremum of ||A(t)||_F over one period, inflated by 1%.

    Piecewise-constant schedules take the maximum over their segments;
    smoothed ones are sampled on a 1e-3 grid.
    """
    match schedule:
        case PiecewiseConstantSchedule():
            peak = max(frobenius_norm(m) for _, m in schedule.segments)
        case SmoothedSchedule():
            count = int(round(schedule.period / ScheduleConfig.NORM_GRID_SPACING)) + 1
            grid = np.linspace(0.0, schedule.period, count)
            peak = max(frobenius_norm(schedule.evaluate(float(t))) for t in grid)
        case _:
            raise InvalidParameter("schedule", f"norm bound needs a periodic schedule, got {type(schedule).__name__}")
    return peak * ScheduleConfig.NORM_INFLATION


def deviation_integral(smoothed: SmoothedSchedule) -> float:
    """Integral over one period of ||A_eps(t) - A(t)||_F; at most 8 M eps."""
    base = smoothed.unsmoothed()

    def deviation(t: float) -> float:
        return frobenius_norm(smoothed.evaluate(t) - base.evaluate(t))

    points = [p for p in smoothed.breakpoint_offsets() + [1.0] if 0.0 < p < smoothed.period]
    value, abserr = integrate.quad(deviation, 0.0, smoothed.period, points=sorted(points), limit=200)
    logging.debug(f"Deviation integral for eps={smoothed.epsilon}: {value:.6e} (+- {abserr:.1e})")
    return float(value)


class ScheduleFactory:
    """Builds schedules from the experiment parameters."""

    def __init__(self, c: float = ExperimentDefaults.C):
        self.c = c

    def create_schedule(self, kind: str, epsilon: float | None = None,
                        drift: Drift | None = None) -> Schedule:
        """Create a schedule of the given kind.

        kind is one of "canonical", "shifted", "smoothed" or "perturbed"; the
        perturbed schedule sits on the smoothed base when epsilon is given and
        on the canonical one otherwise.
        """
        match kind:
            case "canonical":
                return canonical_schedule(self.c)
            case "shifted":
                return shifted_schedule(self.c)
            case "smoothed":
                if epsilon is None:
                    raise InvalidParameter("epsilon", "a smoothed schedule needs epsilon")
                return SmoothedSchedule(self.c, epsilon)
            case "perturbed":
                base = SmoothedSchedule(self.c, epsilon) if epsilon is not None else canonical_schedule(self.c)
                return PerturbedSchedule(base, drift if drift is not None else Drift.default())
            case _:
                raise InvalidParameter("schedule", f"unknown schedule kind: {kind}")

    @staticmethod
    def drift_from_document(document: dict[str, Any] | str | None) -> Drift:
        """Drift from a config entry: a built-in name or {"times": [...], "values": [...]}"""
        if document is None:
            return Drift.default()
        if isinstance(document, str):
            return Drift(document)
        try:
            return Drift.tabulated(document["times"], document["values"])
        except KeyError as error:
            raise InvalidParameter("drift", f"tabulated drift is missing {error}") from error
