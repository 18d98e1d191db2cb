import math
from abc import ABC, abstractmethod

from geometry.matrices import Mat2


class Schedule(ABC):
    """Abstract base class for time-dependent system matrices t -> A(t)"""

    @abstractmethod
    def evaluate(self, t: float) -> Mat2:
        """Return A(t)"""
        pass

    @property
    @abstractmethod
    def period(self) -> float | None:
        """Period of the schedule, None when it is not periodic"""
        pass

    @abstractmethod
    def breakpoint_offsets(self) -> list[float]:
        """Offsets within one period where A(t) is not smooth"""
        pass

    def is_periodic(self) -> bool:
        return self.period is not None

    def reduce(self, t: float) -> tuple[int, float]:
        """Split t into (k, tau) with t = k * period + tau and tau in [0, period).

        evaluate(period) therefore equals evaluate(0).
        """
        period = self.period
        if period is None:
            return 0, t
        k = math.floor(t / period)
        tau = t - k * period
        if tau >= period:
            k += 1
            tau = 0.0
        elif tau < 0.0:
            tau = 0.0
        return k, tau

    def breakpoints(self, t0: float, t1: float) -> list[float]:
        """Ordered kinks of A(t) strictly inside (t0, t1)"""
        period = self.period
        offsets = self.breakpoint_offsets()
        if period is None or not offsets or t1 <= t0:
            return []

        points: list[float] = []
        k = math.floor(t0 / period)
        while k * period < t1:
            for offset in offsets:
                point = k * period + offset
                if t0 < point < t1:
                    points.append(point)
            k += 1
        return points

    def __call__(self, t: float) -> Mat2:
        return self.evaluate(t)
