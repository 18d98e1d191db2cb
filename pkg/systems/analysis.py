"""Numerical studies that turn the instability argument into pass/fail reports."""

import functools
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from config.constants import ExperimentDefaults, ScheduleConfig, ToleranceConfig
from core.errors import (
    BoundViolated,
    ComputationError,
    InstabilityNotWitnessed,
    InvalidParameter,
)
from core.rootfinding import bisect
from geometry.matrices import frobenius_norm, principal_eigenvalue
from geometry.vectors import Vec2
from schedules.primitives import Drift, PerturbedSchedule, SmoothedSchedule
from systems.direction_flow import growth_cone
from systems.peano_baker import pb_instability_threshold, pb_lower_bound
from systems.propagation import (
    floquet,
    integrate_states,
    integrate_transition,
    poincare_closed_form,
    sample_grid,
)
from systems.schedule_factory import canonical_schedule, deviation_integral, schedule_norm_bound


@dataclass(frozen=True)
class ThresholdReport:
    name: str
    c_star: float
    residual: float
    bracket: tuple[float, float]


@dataclass
class ConvergenceStudy:
    """Per-epsilon errors of the smoothed Poincare map against the piecewise one"""

    c: float
    epsilons: list[float] = field(default_factory=list)
    errors: list[float] = field(default_factory=list)
    bounds: list[float] = field(default_factory=list)
    mus: list[float] = field(default_factory=list)
    norm_bounds: list[float] = field(default_factory=list)
    deviation_integrals: list[float] = field(default_factory=list)
    # ||X_eps(t; 0)||_F at the a-priori sample times, one list per epsilon
    apriori_norms: list[list[float]] = field(default_factory=list)


@dataclass
class NonperiodicReport:
    """Solutions w (periodic system) and v (drift added) from the same initial value"""

    c: float
    mu: float
    times: list[float]
    w_states: list[Vec2]
    v_states: list[Vec2]
    min_gap: float
    period_norms_w: list[float]
    period_norms_v: list[float]

    @property
    def norms_w(self) -> list[float]:
        return [x.length() for x in self.w_states]

    @property
    def norms_v(self) -> list[float]:
        return [x.length() for x in self.v_states]

    @property
    def growth_factor(self) -> float:
        return self.period_norms_v[-1] / self.period_norms_v[0]


@dataclass(frozen=True)
class SweepPoint:
    c: float
    mu1: float
    cone_lo: float
    cone_hi: float
    pb_lower_bound: float


def _check_precision(precision: float) -> float:
    low, high = ExperimentDefaults.THRESHOLD_PRECISION_MIN, ExperimentDefaults.THRESHOLD_PRECISION_MAX
    if not (low <= precision <= high):
        raise InvalidParameter("precision", f"must lie in [{low}, {high}], got {precision}")
    return min(precision, ExperimentDefaults.MAX_BRACKET_WIDTH)


def _mu_minus_one(c: float) -> float:
    return principal_eigenvalue(poincare_closed_form(c)) - 1.0


def _diagonal_bound(c: float) -> float:
    return math.cosh(0.5) ** 2 + 4.0 * c * c * math.sinh(0.5) ** 2


def threshold_mu(precision: float = ExperimentDefaults.THRESHOLD_PRECISION) -> ThresholdReport:
    """Smallest c with principal multiplier above one, by bisection on [1, 5]"""
    width = _check_precision(precision)
    lo, hi = ExperimentDefaults.MU_BRACKET
    bracket = bisect(_mu_minus_one, lo, hi, width)
    logging.info(f"mu threshold: c* = {bracket.root:.12f} after {bracket.iterations} bisections")
    return ThresholdReport("mu", bracket.root, bracket.residual, (bracket.lo, bracket.hi))


def threshold_diag_bound(precision: float = ExperimentDefaults.THRESHOLD_PRECISION) -> ThresholdReport:
    """Closed-form root of cosh^2(1/2) + 4 c^2 sinh^2(1/2) = e^2"""
    width = _check_precision(precision)
    e2 = math.exp(2.0)
    c_star = math.sqrt((e2 - math.cosh(0.5) ** 2) / (4.0 * math.sinh(0.5) ** 2))
    residual = abs(_diagonal_bound(c_star) - e2)
    logging.info(f"diagonal bound threshold: c* = {c_star:.12f}")
    return ThresholdReport("diagonal_bound", c_star, residual, (c_star - 0.5 * width, c_star + 0.5 * width))


def threshold_pb(precision: float = ExperimentDefaults.THRESHOLD_PRECISION) -> ThresholdReport:
    """Root of 1 + c + 1/(4c) = e^2 in closed form, cross-checked by bisection"""
    width = _check_precision(precision)
    e2 = math.exp(2.0)
    c_star = pb_instability_threshold()

    lo, hi = ExperimentDefaults.PB_BRACKET
    bracket = bisect(lambda c: pb_lower_bound(c) - e2, lo, hi, width)
    if abs(bracket.root - c_star) > 2.0 * width:
        raise ComputationError(f"bisection root {bracket.root} disagrees with the closed form {c_star}")

    logging.info(f"Picard lower-bound threshold: c* = {c_star:.12f}")
    return ThresholdReport("peano_baker", c_star, abs(pb_lower_bound(c_star) - e2), (bracket.lo, bracket.hi))


def all_thresholds(precision: float = ExperimentDefaults.THRESHOLD_PRECISION) -> list[ThresholdReport]:
    return [threshold_mu(precision), threshold_diag_bound(precision), threshold_pb(precision)]


@functools.lru_cache(maxsize=1)
def instability_threshold() -> float:
    """c* of threshold_mu at the default precision"""
    return threshold_mu().c_star


def _check_unstable_c(c: float) -> None:
    if not (math.isfinite(c) and c > instability_threshold()):
        raise InvalidParameter("c", f"must exceed the instability threshold {instability_threshold():.6f}, got {c}")


def _check_rk4_step(step: float) -> None:
    if not (math.isfinite(step) and 0.0 < step <= ExperimentDefaults.STEP):
        raise InvalidParameter("step", f"must lie in (0, {ExperimentDefaults.STEP}], got {step}")


def gronwall_audit(c: float, epsilons: Sequence[float] = ExperimentDefaults.EPSILONS,
                   step: float = ExperimentDefaults.STEP) -> ConvergenceStudy:
    """Check ||X_eps(2;0) - P||_F <= 8 M e^{4M} eps and the growth of the smoothed system.

    Raises BoundViolated when an inequality that must hold fails, and
    InstabilityNotWitnessed when the smallest epsilon gives mu_eps <= 1.
    """
    _check_unstable_c(c)
    _check_rk4_step(step)
    if not epsilons:
        raise InvalidParameter("epsilon", "at least one epsilon is required")
    for eps in epsilons:
        if not (ScheduleConfig.EPSILON_MIN < eps < ScheduleConfig.EPSILON_MAX):
            raise InvalidParameter("epsilon", f"must lie in (0, 1/4), got {eps}")

    poincare = poincare_closed_form(c)
    study = ConvergenceStudy(c=c)
    sample_times = ExperimentDefaults.APRIORI_TIMES

    for eps in epsilons:
        schedule = SmoothedSchedule(c, eps)
        m = schedule_norm_bound(schedule)

        transition = integrate_transition(schedule, 0.0, sample_times[0], step)
        norms = [frobenius_norm(transition)]
        for t0, t1 in zip(sample_times[:-1], sample_times[1:]):
            transition = integrate_transition(schedule, t0, t1, step) @ transition
            norms.append(frobenius_norm(transition))
        for t, norm in zip(sample_times, norms):
            if norm > math.exp(m * t):
                raise BoundViolated(f"||X_eps({t}; 0)|| = {norm:.6e} exceeds exp(M t) = {math.exp(m * t):.6e}")

        error = frobenius_norm(transition - poincare)
        bound = 8.0 * m * math.exp(4.0 * m) * eps
        if error > bound:
            raise BoundViolated(f"eps={eps}: error {error:.6e} exceeds the bound {bound:.6e}")

        deviation = deviation_integral(schedule)
        if deviation > 8.0 * m * eps:
            raise BoundViolated(f"eps={eps}: deviation integral {deviation:.6e} exceeds 8 M eps = {8.0 * m * eps:.6e}")

        mu = principal_eigenvalue(transition)
        study.epsilons.append(eps)
        study.errors.append(error)
        study.bounds.append(bound)
        study.mus.append(mu)
        study.norm_bounds.append(m)
        study.deviation_integrals.append(deviation)
        study.apriori_norms.append(norms)
        logging.info(f"eps={eps}: error {error:.3e} <= bound {bound:.3e}, mu_eps = {mu:.9f}")

    smallest = min(range(len(study.epsilons)), key=lambda i: study.epsilons[i])
    if study.mus[smallest] <= 1.0:
        raise InstabilityNotWitnessed(
            f"mu_eps = {study.mus[smallest]:.9f} <= 1 at eps = {study.epsilons[smallest]}")
    return study


def _period_grid(periods: int, period: float, dt: float) -> list[float]:
    """Sample grid that contains every multiple of the period exactly."""
    times = [0.0]
    for k in range(periods):
        times.extend(sample_grid(k * period, (k + 1) * period, dt)[1:])
    return times


def nonperiodic_experiment(c: float, horizon_periods: int = ExperimentDefaults.HORIZON_PERIODS,
                           step: float = ExperimentDefaults.STEP, drift: Drift | None = None,
                           sample_dt: float = ExperimentDefaults.SAMPLE_DT) -> NonperiodicReport:
    """Compare w (canonical system) with v (canonical system plus a(t) I) from w(0).

    Both solutions go through the same RK4 scheme; v must dominate w
    componentwise and ||v(2k)|| must stay above mu^k ||w(0)||.
    """
    _check_unstable_c(c)
    _check_rk4_step(step)
    if horizon_periods < ExperimentDefaults.MIN_HORIZON_PERIODS:
        raise InvalidParameter(
            "horizon_periods", f"must be at least {ExperimentDefaults.MIN_HORIZON_PERIODS}, got {horizon_periods}")
    if not (math.isfinite(sample_dt) and sample_dt > 0.0):
        raise InvalidParameter("dt", f"must be positive, got {sample_dt}")

    base = canonical_schedule(c)
    data = floquet(base)
    perturbed = PerturbedSchedule(base, drift if drift is not None else Drift.default())

    times = _period_grid(horizon_periods, data.period, sample_dt)
    w_states = integrate_states(base, data.w, times, step, force_rk4=True)
    v_states = integrate_states(perturbed, data.w, times, step)

    min_gap = math.inf
    for v, w in zip(v_states[1:], w_states[1:]):
        min_gap = min(min_gap, v.x1 - w.x1, v.x2 - w.x2)
    if min_gap < -ToleranceConfig.COMPARISON_SLACK:
        raise BoundViolated(f"componentwise comparison failed: min(v - w) = {min_gap:.3e}")

    per_period = round(len(times[1:]) / horizon_periods)
    period_indices = [k * per_period for k in range(horizon_periods + 1)]
    period_norms_w = [w_states[i].length() for i in period_indices]
    period_norms_v = [v_states[i].length() for i in period_indices]

    w0 = data.w.length()
    for k, norm in enumerate(period_norms_v):
        floor = data.mu1 ** k * w0 * (1.0 - ToleranceConfig.GROWTH_RELATIVE_SLACK)
        if norm < floor:
            raise BoundViolated(f"||v({k * data.period:g})|| = {norm:.6e} fell below mu^k ||w(0)|| = {floor:.6e}")

    logging.info(f"Non-periodic run, c={c}: ||v|| grew by {period_norms_v[-1] / period_norms_v[0]:.6e} "
                 f"over {horizon_periods} periods, min gap {min_gap:.3e}")
    return NonperiodicReport(
        c=c,
        mu=data.mu1,
        times=times,
        w_states=w_states,
        v_states=v_states,
        min_gap=min_gap,
        period_norms_w=period_norms_w,
        period_norms_v=period_norms_v,
    )


def parameter_sweep(c_min: float, c_max: float, points: int) -> list[SweepPoint]:
    """Principal multiplier, growth cone and Picard lower bound on a uniform c grid"""
    if not (math.isfinite(c_min) and c_min > 0.0):
        raise InvalidParameter("c_min", f"must be positive, got {c_min}")
    if not (math.isfinite(c_max) and c_max > c_min):
        raise InvalidParameter("c_max", f"must exceed c_min = {c_min}, got {c_max}")
    if points < 2:
        raise InvalidParameter("points", f"must be at least 2, got {points}")

    rows: list[SweepPoint] = []
    for c in np.linspace(c_min, c_max, points):
        c = float(c)
        cone = growth_cone(c)
        rows.append(SweepPoint(
            c=c,
            mu1=principal_eigenvalue(poincare_closed_form(c)),
            cone_lo=cone.lo,
            cone_hi=cone.hi,
            pb_lower_bound=pb_lower_bound(c),
        ))
    logging.info(f"Sweep over {points} values of c in [{c_min}, {c_max}]")
    return rows
