"""Peano-Baker (Picard) terms of the shifted canonical system B(t) = A(t) + I.

Every term J_k is kept as an exact piecewise matrix polynomial, so partial
sums and their monotonicity carry no quadrature error.
"""

import bisect
import logging
import math
from dataclasses import dataclass

from config.constants import PeanoBakerConfig, ToleranceConfig
from core.errors import DegreeOverflow, InvalidParameter
from geometry.matrices import Mat2, frobenius_norm
from schedules.primitives import PiecewiseConstantSchedule
from systems.schedule_factory import shifted_matrices, shifted_schedule


def _flush(m: Mat2) -> Mat2:
    tiny = ToleranceConfig.FLUSH_TO_ZERO
    return Mat2(*(0.0 if abs(v) < tiny else v for v in m.entries()))


@dataclass(frozen=True)
class PiecewisePolyMatrix:
    """Matrix polynomial sum_j C_j (t - left)^j on each interval [t_i, t_{i+1}]."""

    breakpoints: tuple[float, ...]
    pieces: tuple[tuple[Mat2, ...], ...]

    def __post_init__(self) -> None:
        if len(self.breakpoints) < 2 or len(self.pieces) != len(self.breakpoints) - 1:
            raise InvalidParameter("pieces", "need one coefficient list per interval")
        if any(b <= a for a, b in zip(self.breakpoints[:-1], self.breakpoints[1:])):
            raise InvalidParameter("breakpoints", "must be strictly increasing")

    @property
    def degree(self) -> int:
        return max(len(piece) for piece in self.pieces) - 1

    def _evaluate_piece(self, index: int, t: float) -> Mat2:
        x = t - self.breakpoints[index]
        result = Mat2.zero()
        for coefficient in reversed(self.pieces[index]):
            result = result.scaled(x) + coefficient
        return result

    def evaluate(self, t: float) -> Mat2:
        if not (self.breakpoints[0] <= t <= self.breakpoints[-1]):
            raise InvalidParameter("t", f"{t} lies outside [{self.breakpoints[0]}, {self.breakpoints[-1]}]")
        index = bisect.bisect_right(self.breakpoints, t) - 1
        index = min(max(index, 0), len(self.pieces) - 1)
        return self._evaluate_piece(index, t)

    def __call__(self, t: float) -> Mat2:
        return self.evaluate(t)

    def continuity_defect(self) -> float:
        """Largest jump between neighbouring pieces at the interior breakpoints"""
        defect = 0.0
        for index in range(len(self.pieces) - 1):
            left = self._evaluate_piece(index, self.breakpoints[index + 1])
            right = self.pieces[index + 1][0]
            defect = max(defect, left.max_abs_diff(right))
        return defect

    def integrate_against(self, matrices: list[Mat2]) -> 'PiecewisePolyMatrix':
        """t -> int_{t_0}^t M_i J(tau) dtau, where M_i is constant on interval i.

        Each piece is antidifferentiated term by term and started from the value
        the previous piece reached at the shared breakpoint.
        """
        if len(matrices) != len(self.pieces):
            raise InvalidParameter("matrices", "need one matrix per interval")

        pieces: list[tuple[Mat2, ...]] = []
        start = Mat2.zero()
        for index, (m, piece) in enumerate(zip(matrices, self.pieces)):
            coefficients = [start] + [_flush((m @ c).scaled(1.0 / (j + 1))) for j, c in enumerate(piece)]
            pieces.append(tuple(coefficients))
            width = self.breakpoints[index + 1] - self.breakpoints[index]
            start = Mat2.zero()
            for coefficient in reversed(coefficients):
                start = start.scaled(width) + coefficient
        return PiecewisePolyMatrix(self.breakpoints, tuple(pieces))


def picard_terms(schedule: PiecewiseConstantSchedule, t_end: float, K: int) -> list[PiecewisePolyMatrix]:
    """J_0, ..., J_K on [0, t_end] with J_0 = I and J_{k+1}(t) = int_0^t B(tau) J_k(tau) dtau."""
    breakpoints = tuple([0.0] + schedule.breakpoints(0.0, t_end) + [t_end])
    matrices = [schedule.evaluate(t) for t in breakpoints[:-1]]

    terms = [PiecewisePolyMatrix(breakpoints, tuple((Mat2.identity(),) for _ in matrices))]
    for _ in range(K):
        terms.append(terms[-1].integrate_against(matrices))
    return terms


def _check_terms(K: int) -> None:
    if K < 0:
        raise InvalidParameter("terms", f"must be nonnegative, got {K}")
    if K > PeanoBakerConfig.MAX_TERMS:
        raise DegreeOverflow(f"terms: {K} exceeds the maximum {PeanoBakerConfig.MAX_TERMS}")


def pb_terms(c: float, t_end: float = 2.0, K: int = PeanoBakerConfig.DEFAULT_TERMS) -> list[PiecewisePolyMatrix]:
    _check_terms(K)
    if not (0.0 < t_end <= 2.0):
        raise InvalidParameter("t_end", f"must lie in (0, 2], got {t_end}")
    terms = picard_terms(shifted_schedule(c), t_end, K)
    logging.debug(f"Computed {K + 1} Picard terms for c={c} on [0, {t_end}]")
    return terms


def pb_partial_sum(c: float, K: int, t_end: float = 2.0) -> Mat2:
    """sum_{k <= K} J_k(t_end; 0)"""
    total = Mat2.zero()
    for term in pb_terms(c, t_end, K):
        total = total + term.evaluate(t_end)
    return total


def pb_tail_bound(c: float, K: int) -> float:
    """sum_{k > K} (2 M_B)^k / k!, an upper bound on the truncation error at t = 2"""
    if K < 0:
        raise InvalidParameter("terms", f"must be nonnegative, got {K}")
    b1, b2 = shifted_matrices(c)
    log_rate = math.log(2.0 * max(frobenius_norm(b1), frobenius_norm(b2)))
    return math.fsum(
        math.exp(k * log_rate - math.lgamma(k + 1))
        for k in range(K + 1, K + 1 + PeanoBakerConfig.TAIL_TERMS)
    )


def pb_lower_bound(c: float) -> float:
    """Principal eigenvalue of J_0(2) + J_1(2) = I + B(1) + B(2), i.e. 1 + c + 1/(4c)"""
    if not (math.isfinite(c) and c > 0.0):
        raise InvalidParameter("c", f"must be a positive number, got {c}")
    return 1.0 + c + 1.0 / (4.0 * c)


def pb_instability_threshold() -> float:
    """Larger root of 1 + c + 1/(4c) = e^2"""
    e2 = math.exp(2.0)
    return 0.5 * (e2 - 1.0) + 0.5 * math.sqrt(e2 * e2 - 2.0 * e2)
