"""Transition matrices, Poincare maps and trajectories of x' = A(t) x.

Piecewise-constant schedules are propagated exactly by products of segment
exponentials; every other schedule goes through a fixed-step classical
Runge-Kutta scheme that is split at the kinks of A(t).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence, TypeVar

import numpy as np

from config.constants import ExperimentDefaults, IntegratorConfig
from core.errors import (
    ComputationError,
    DegenerateTrajectory,
    InvalidParameter,
    NonFiniteEntry,
    NumericalOverflow,
    StepTooLarge,
)
from geometry.matrices import Mat2, expm, inverse, spectral
from geometry.transforms import AngleUtils
from geometry.vectors import Vec2
from schedules.base import Schedule
from schedules.primitives import PiecewiseConstantSchedule

State = TypeVar("State", Mat2, Vec2)


@dataclass
class Trajectory:
    """Samples of a solution on an increasing time grid."""

    times: list[float]
    states: list[Vec2]
    norms: list[float] = field(default_factory=list)
    angles: list[float] = field(default_factory=list)
    # d||x||/dt = (A(t) x . x) / ||x||, zero at the origin
    radial_rates: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final_time(self) -> float:
        return self.times[-1]

    @property
    def final_state(self) -> Vec2:
        return self.states[-1]


@dataclass(frozen=True)
class FloquetData:
    """Poincare map over one period and its characteristic multipliers"""

    poincare: Mat2
    mu1: float
    mu2: float
    principal_exponent: float
    # Normalized principal eigenvector of the Poincare map, w(0)
    w: Vec2
    period: float


def _check_step(step: float) -> None:
    if not (math.isfinite(step) and step > 0.0):
        raise InvalidParameter("step", f"must be positive, got {step}")
    if step > IntegratorConfig.MAX_STEP:
        raise StepTooLarge(f"step: {step} exceeds the maximum {IntegratorConfig.MAX_STEP}")


def transition_piecewise(schedule: PiecewiseConstantSchedule, t0: float, t1: float) -> Mat2:
    """X(t1; t0) as the ordered product of segment exponentials, latest factor on the left."""
    if t0 == t1:
        return Mat2.identity()
    if t0 > t1:
        return inverse(transition_piecewise(schedule, t1, t0))

    period = schedule.period
    last = len(schedule.segments) - 1
    result = Mat2.identity()
    t = t0
    k, j = schedule.locate(t)
    while t < t1:
        end = k * period + schedule.segment_end(j)
        if end <= t:
            # t sits on a switch that rounding attributed to the earlier segment
            k, j = (k + 1, 0) if j == last else (k, j + 1)
            continue
        end = min(end, t1)
        try:
            result = expm(schedule.segment_matrix(j), end - t) @ result
        except NonFiniteEntry as error:
            raise NumericalOverflow(f"X({end}; {t0}) left the range of finite doubles") from error
        t = end
        k, j = (k + 1, 0) if j == last else (k, j + 1)
    return result


def _rk4_march(schedule: Schedule, t0: float, t1: float, step: float, state: State) -> State:
    """Classical RK4 for state' = A(t) state from t0 to t1 (t0 <= t1), split at kinks."""
    nodes = [t0] + schedule.breakpoints(t0, t1) + [t1]
    floor_width = IntegratorConfig.MIN_STEP_FRACTION * step
    for a, b in zip(nodes[:-1], nodes[1:]):
        t = a
        while b - t > floor_width:
            h = min(step, b - t)
            k1 = schedule.evaluate(t) @ state
            k2 = schedule.evaluate(t + 0.5 * h) @ (state + k1.scaled(0.5 * h))
            k3 = schedule.evaluate(t + 0.5 * h) @ (state + k2.scaled(0.5 * h))
            k4 = schedule.evaluate(t + h) @ (state + k3.scaled(h))
            state = state + (k1 + k2.scaled(2.0) + k3.scaled(2.0) + k4).scaled(h / 6.0)
            t += h
    return state


def integrate_transition(schedule: Schedule, t0: float, t1: float,
                         step: float = IntegratorConfig.DEFAULT_STEP) -> Mat2:
    """X(t1; t0) by fixed-step RK4 on X' = A(t) X, X(t0) = I.

    The last step of every smooth stretch is shortened to land on its end.
    Raises StepTooLarge for steps above 1e-2.
    """
    _check_step(step)
    if t0 > t1:
        return inverse(integrate_transition(schedule, t1, t0, step))
    try:
        return _rk4_march(schedule, t0, t1, step, Mat2.identity())
    except NonFiniteEntry as error:
        raise NumericalOverflow(f"X({t1}; {t0}) left the range of finite doubles") from error


def transition(schedule: Schedule, t0: float, t1: float,
               step: float = IntegratorConfig.DEFAULT_STEP) -> Mat2:
    """X(t1; t0): exact for piecewise-constant schedules, RK4 otherwise."""
    if isinstance(schedule, PiecewiseConstantSchedule):
        return transition_piecewise(schedule, t0, t1)
    return integrate_transition(schedule, t0, t1, step)


def poincare_closed_form(c: float) -> Mat2:
    """P = exp(A(2)) exp(A(1)) written out entrywise"""
    if not (math.isfinite(c) and c > 0.0):
        raise InvalidParameter("c", f"must be a positive number, got {c}")
    ch = math.cosh(0.5)
    sh = math.sinh(0.5)
    scale = math.exp(-2.0)
    off = (2.0 * c + 1.0 / (2.0 * c)) * ch * sh
    return Mat2(
        scale * (ch * ch + sh * sh / (4.0 * c * c)),
        scale * off,
        scale * off,
        scale * (ch * ch + 4.0 * c * c * sh * sh),
    )


def floquet(schedule: Schedule, step: float = IntegratorConfig.DEFAULT_STEP) -> FloquetData:
    period = schedule.period
    if period is None:
        raise InvalidParameter("schedule", "Floquet data needs a periodic schedule")

    poincare = transition(schedule, 0.0, period, step)
    pair = spectral(poincare)
    data = FloquetData(
        poincare=poincare,
        mu1=pair.lambda1,
        mu2=pair.lambda2,
        principal_exponent=math.log(pair.lambda1) / period,
        w=pair.u,
        period=period,
    )
    logging.debug(f"Floquet multipliers mu1={data.mu1:.12g}, mu2={data.mu2:.12g}")
    return data


def direction_convergence_rate(data: FloquetData) -> float:
    """ln(mu2/mu1)/period: the rate at which positive directions approach w(t)"""
    if data.mu2 <= 0.0:
        raise ComputationError(f"secondary multiplier {data.mu2} is not positive")
    return math.log(data.mu2 / data.mu1) / data.period


def integrate_states(schedule: Schedule, x0: Vec2, times: Sequence[float],
                     step: float = IntegratorConfig.DEFAULT_STEP, force_rk4: bool = False) -> list[Vec2]:
    """x(t) = X(t; times[0]) x0 at every requested time (times increasing)"""
    exact = isinstance(schedule, PiecewiseConstantSchedule) and not force_rk4
    if not exact:
        _check_step(step)

    states = [x0]
    state = x0
    for a, b in zip(times[:-1], times[1:]):
        try:
            if exact:
                assert isinstance(schedule, PiecewiseConstantSchedule)
                state = transition_piecewise(schedule, a, b) @ state
            else:
                state = _rk4_march(schedule, a, b, step, state)
        except NonFiniteEntry as error:
            raise NumericalOverflow(f"x({b}) left the range of finite doubles") from error
        states.append(state)
    return states


def sample_grid(t0: float, t1: float, dt: float) -> list[float]:
    """Uniform grid from t0 to t1 with spacing at most dt, both ends included."""
    count = max(1, math.ceil(round((t1 - t0) / dt, 9)))
    return [float(t) for t in np.linspace(t0, t1, count + 1)]


def trajectory(schedule: Schedule, x0: Vec2, t0: float, T: float, dt: float,
               step: float = IntegratorConfig.DEFAULT_STEP) -> Trajectory:
    if not (math.isfinite(dt) and dt > 0.0):
        raise InvalidParameter("dt", f"must be positive, got {dt}")
    if not T > t0:
        raise InvalidParameter("horizon", f"final time {T} must exceed the initial time {t0}")

    times = sample_grid(t0, T, dt)
    states = integrate_states(schedule, x0, times, step)

    norms: list[float] = []
    angles: list[float] = []
    rates: list[float] = []
    for t, x in zip(times, states):
        norm = x.length()
        if not math.isfinite(norm):
            raise NumericalOverflow(f"||x({t})|| left the range of finite doubles")
        norms.append(norm)
        angles.append(AngleUtils.polar_angle(x))
        unit = x.normalized()
        rates.append((schedule.evaluate(t) @ unit).dot(unit) * norm)

    logging.debug(f"Trajectory with {len(times)} samples on [{t0}, {T}]")
    return Trajectory(times=times, states=states, norms=norms, angles=angles, radial_rates=rates)


def _check_lyapunov_input(tr: Trajectory) -> None:
    elapsed = tr.final_time - tr.times[0]
    if elapsed < ExperimentDefaults.LYAPUNOV_MIN_HORIZON:
        raise InvalidParameter(
            "horizon", f"Lyapunov estimates need at least {ExperimentDefaults.LYAPUNOV_MIN_HORIZON} time units, got {elapsed}")
    if any(norm == 0.0 for norm in tr.norms):
        raise DegenerateTrajectory("trajectory norm vanished; the exponent is undefined")


def lyapunov_estimate(tr: Trajectory) -> float:
    """Endpoint quotient ln(||x(T)|| / ||x(t0)||) / (T - t0)"""
    _check_lyapunov_input(tr)
    return math.log(tr.norms[-1] / tr.norms[0]) / (tr.final_time - tr.times[0])


def lyapunov_regression(tr: Trajectory) -> float:
    """Least-squares slope of ln||x(t)|| against t"""
    _check_lyapunov_input(tr)
    slope, _ = np.polyfit(np.asarray(tr.times), np.log(np.asarray(tr.norms)), 1)
    return float(slope)


def direction_gap(schedule: Schedule, x0: Vec2, t0: float, T: float,
                  step: float = IntegratorConfig.DEFAULT_STEP) -> float:
    """|| x(T)/||x(T)|| - w(T)/||w(T)|| || with w started on the principal eigenvector
    of X(t0 + period; t0)."""
    period = schedule.period
    if period is None:
        raise InvalidParameter("schedule", "the reference solution needs a periodic schedule")
    if not x0.is_nonnegative() or x0.length() == 0.0:
        raise InvalidParameter("x0", f"must be a nonzero vector in the closed positive quadrant, got {x0}")
    if not T > t0:
        raise InvalidParameter("horizon", f"final time {T} must exceed the initial time {t0}")

    w0 = spectral(transition(schedule, t0, t0 + period, step)).u
    flow = transition(schedule, t0, T, step)
    x_end = flow @ x0
    w_end = flow @ w0
    if x_end.length() == 0.0 or w_end.length() == 0.0:
        raise DegenerateTrajectory("solution norm vanished before the final time")
    return (x_end.normalized() - w_end.normalized()).length()
