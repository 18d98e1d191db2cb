import bisect
import logging
import math
from typing import Sequence

import numpy as np

from config.constants import ScheduleConfig
from core.errors import InvalidParameter
from geometry.matrices import Mat2
from schedules.base import Schedule
from schedules.canonical import canonical_pair, default_drift, interpolant


class PiecewiseConstantSchedule(Schedule):
    """Periodic schedule made of constant segments, right-continuous at the switches"""

    def __init__(self, segments: Sequence[tuple[float, Mat2]]) -> None:
        if not segments:
            raise InvalidParameter("segments", "a schedule needs at least one segment")
        for index, (duration, _) in enumerate(segments):
            if not (math.isfinite(duration) and duration > 0.0):
                raise InvalidParameter(f"segments[{index}].duration", f"must be positive, got {duration}")

        self._segments: tuple[tuple[float, Mat2], ...] = tuple((float(d), m) for d, m in segments)
        ends: list[float] = []
        total = 0.0
        for duration, _ in self._segments:
            total += duration
            ends.append(total)
        self._ends = ends
        self._period = total
        logging.debug(f"Piecewise schedule with {len(self._segments)} segment(s), period {total}")

    @property
    def segments(self) -> tuple[tuple[float, Mat2], ...]:
        return self._segments

    @property
    def period(self) -> float:
        return self._period

    def segment_start(self, index: int) -> float:
        """Offset of segment `index` within the period"""
        return 0.0 if index == 0 else self._ends[index - 1]

    def segment_end(self, index: int) -> float:
        return self._ends[index]

    def segment_matrix(self, index: int) -> Mat2:
        return self._segments[index][1]

    def locate(self, t: float) -> tuple[int, int]:
        """(period index k, segment index j) of the segment containing t"""
        k, tau = self.reduce(t)
        j = min(bisect.bisect_right(self._ends, tau), len(self._segments) - 1)
        return k, j

    def evaluate(self, t: float) -> Mat2:
        _, j = self.locate(t)
        return self._segments[j][1]

    def breakpoint_offsets(self) -> list[float]:
        if len(self._segments) == 1:
            return []
        return [self.segment_start(j) for j in range(len(self._segments))]


class SmoothedSchedule(Schedule):
    """Continuous period-2 schedule A_eps: constant A(1), A(2) joined by Bar A ramps of width 2 eps"""

    def __init__(self, c: float, epsilon: float) -> None:
        self._a1, self._a2 = canonical_pair(c)
        if not (ScheduleConfig.EPSILON_MIN < epsilon < ScheduleConfig.EPSILON_MAX):
            raise InvalidParameter("epsilon", f"must lie in (0, 1/4), got {epsilon}")
        self._c = c
        self._epsilon = epsilon

    @property
    def c(self) -> float:
        return self._c

    @property
    def epsilon(self) -> float:
        return self._epsilon

    @property
    def period(self) -> float:
        return ScheduleConfig.CANONICAL_PERIOD

    def _ramp(self, s: float) -> Mat2:
        # Rounding at the branch ends may push s a hair outside [0, 1]
        return interpolant(self._c, min(1.0, max(0.0, s)))

    def evaluate(self, t: float) -> Mat2:
        _, tau = self.reduce(t)
        eps = self._epsilon
        if tau <= eps:
            return self._ramp(0.5 - tau / (2.0 * eps))
        if tau <= 1.0 - eps:
            return self._a1
        if tau <= 1.0 + eps:
            return self._ramp((tau - 1.0) / (2.0 * eps) + 0.5)
        if tau <= 2.0 - eps:
            return self._a2
        return self._ramp((2.0 - tau) / (2.0 * eps) + 0.5)

    def unsmoothed(self) -> PiecewiseConstantSchedule:
        """The piecewise-constant schedule this one approximates"""
        return PiecewiseConstantSchedule([(1.0, self._a1), (1.0, self._a2)])

    def breakpoint_offsets(self) -> list[float]:
        eps = self._epsilon
        return [0.0, eps, 1.0 - eps, 1.0 + eps, 2.0 - eps]


class Drift:
    """Scalar drift a(t): a named built-in or tabulated samples interpolated linearly"""

    BUILTINS = ("default", "zero")

    def __init__(self, name: str, times: Sequence[float] | None = None,
                 values: Sequence[float] | None = None) -> None:
        self.name = name
        self._times: np.ndarray | None = None
        self._values: np.ndarray | None = None

        if name == "tabulated":
            if times is None or values is None:
                raise InvalidParameter("drift", "tabulated drift needs times and values")
            self._times = np.asarray(times, dtype=float)
            self._values = np.asarray(values, dtype=float)
            self._validate_table()
        elif name not in self.BUILTINS:
            raise InvalidParameter("drift", f"unknown drift '{name}', expected one of {self.BUILTINS} or 'tabulated'")

    @classmethod
    def default(cls) -> 'Drift':
        return cls("default")

    @classmethod
    def zero(cls) -> 'Drift':
        """a = 0, the unperturbed control"""
        return cls("zero")

    @classmethod
    def tabulated(cls, times: Sequence[float], values: Sequence[float]) -> 'Drift':
        return cls("tabulated", times, values)

    def _validate_table(self) -> None:
        assert self._times is not None and self._values is not None
        if self._times.ndim != 1 or self._times.shape != self._values.shape or self._times.size < 2:
            raise InvalidParameter("drift", "times and values must be 1-D arrays of equal length >= 2")
        if not np.all(np.diff(self._times) > 0.0):
            raise InvalidParameter("drift.times", "sample times must be strictly increasing")
        if not np.all((self._values > 0.0) & (self._values < ScheduleConfig.DRIFT_MAX)):
            raise InvalidParameter("drift.values", "samples must satisfy 0 < a(t) < 1/4")

    def __call__(self, t: float) -> float:
        match self.name:
            case "default":
                return default_drift(t)
            case "zero":
                return 0.0
            case _:
                assert self._times is not None and self._values is not None
                return float(np.interp(t, self._times, self._values))

    def __repr__(self) -> str:
        return f"Drift({self.name})"


class PerturbedSchedule(Schedule):
    """Non-periodic schedule A(t) + a(t) I over a periodic base"""

    def __init__(self, base: PiecewiseConstantSchedule | SmoothedSchedule, drift: Drift) -> None:
        self._base = base
        self._drift = drift

    @property
    def base(self) -> PiecewiseConstantSchedule | SmoothedSchedule:
        return self._base

    @property
    def drift(self) -> Drift:
        return self._drift

    @property
    def period(self) -> None:
        return None

    def evaluate(self, t: float) -> Mat2:
        return self._base.evaluate(t) + Mat2.scalar(self._drift(t))

    def breakpoint_offsets(self) -> list[float]:
        return self._base.breakpoint_offsets()

    def breakpoints(self, t0: float, t1: float) -> list[float]:
        return self._base.breakpoints(t0, t1)
