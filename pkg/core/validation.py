"""Precondition checks run on an ExperimentConfig before any computation."""

import math

import numpy as np

from config.constants import (
    ExperimentDefaults,
    IntegratorConfig,
    PeanoBakerConfig,
    ReportConfig,
    ScheduleConfig,
)
from core.errors import ConfigError, InvalidParameter
from core.input_manager import Commands, ExperimentConfig
from geometry.vectors import Vec2
from systems.analysis import instability_threshold
from systems.schedule_factory import ScheduleFactory


class ConfigValidator:
    """Static checks that raise InvalidParameter naming the offending field"""

    @staticmethod
    def require_positive(field: str, value: float) -> None:
        if not (math.isfinite(value) and value > 0.0):
            raise InvalidParameter(field, f"must be a positive number, got {value}")

    @staticmethod
    def require_epsilon(value: float) -> None:
        if not (math.isfinite(value) and ScheduleConfig.EPSILON_MIN < value < ScheduleConfig.EPSILON_MAX):
            raise InvalidParameter("epsilon", f"must lie in (0, 1/4), got {value}")

    @staticmethod
    def require_step(value: float, maximum: float = IntegratorConfig.MAX_STEP) -> None:
        if not (math.isfinite(value) and 0.0 < value <= maximum):
            raise InvalidParameter("step", f"must lie in (0, {maximum}], got {value}")

    @staticmethod
    def require_unstable_c(value: float) -> None:
        threshold = instability_threshold()
        if not value > threshold:
            raise InvalidParameter("c", f"must exceed the instability threshold {threshold:.6f}, got {value}")

    @staticmethod
    def horizon_periods(config: ExperimentConfig) -> int:
        """Number of whole periods in the horizon of the non-periodic experiment"""
        periods = config.horizon / ScheduleConfig.CANONICAL_PERIOD
        rounded = round(periods)
        if not math.isclose(periods, rounded, rel_tol=0.0, abs_tol=1e-9):
            raise InvalidParameter("horizon", f"must be a whole number of periods of length 2, got {config.horizon}")
        if rounded < ExperimentDefaults.MIN_HORIZON_PERIODS:
            raise InvalidParameter(
                "horizon", f"must span at least {ExperimentDefaults.MIN_HORIZON_PERIODS} periods, got {config.horizon}")
        return int(rounded)

    @staticmethod
    def initial_value(config: ExperimentConfig) -> Vec2 | None:
        """Parse --x0; None means the command picks its own default."""
        if config.x0 is None:
            return None
        if config.x0.strip().lower() == "random":
            rng = np.random.default_rng(config.seed)
            sample = rng.uniform(0.0, 1.0, size=2)
            return Vec2(float(sample[0]), float(sample[1]))
        try:
            parts = [float(p) for p in config.x0.split(",")]
        except ValueError as error:
            raise ConfigError("x0", f'expected "x1,x2" or "random", got {config.x0!r}') from error
        if len(parts) != 2 or not all(math.isfinite(p) for p in parts):
            raise ConfigError("x0", f'expected two finite numbers "x1,x2", got {config.x0!r}')
        return Vec2(parts[0], parts[1])

    @staticmethod
    def validate(config: ExperimentConfig) -> None:
        if config.command not in Commands.ALL:
            raise InvalidParameter("command", f"unknown command {config.command!r}")
        if config.format not in ReportConfig.FORMATS:
            raise InvalidParameter("format", f"expected one of {ReportConfig.FORMATS}, got {config.format!r}")
        if config.seed < 0:
            raise InvalidParameter("seed", f"must be nonnegative, got {config.seed}")

        ConfigValidator.require_positive("c", config.c)
        if config.epsilon is not None:
            ConfigValidator.require_epsilon(config.epsilon)

        x0 = ConfigValidator.initial_value(config)

        match config.command:
            case Commands.THRESHOLDS:
                low = ExperimentDefaults.THRESHOLD_PRECISION_MIN
                high = ExperimentDefaults.THRESHOLD_PRECISION_MAX
                if not (low <= config.precision <= high):
                    raise InvalidParameter("precision", f"must lie in [{low}, {high}], got {config.precision}")
            case Commands.ANALYZE:
                ConfigValidator.require_step(config.step)
            case Commands.SWEEP:
                ConfigValidator.require_positive("c_min", config.c_min)
                if not (math.isfinite(config.c_max) and config.c_max > config.c_min):
                    raise InvalidParameter("c_max", f"must exceed c_min = {config.c_min}, got {config.c_max}")
                if config.points < 2:
                    raise InvalidParameter("points", f"must be at least 2, got {config.points}")
            case Commands.TRAJECTORY:
                ConfigValidator.require_step(config.step)
                ConfigValidator.require_positive("horizon", config.horizon)
                ConfigValidator.require_positive("dt", config.dt)
            case Commands.DIRECTIONS:
                ConfigValidator.require_positive("horizon", config.horizon)
                ConfigValidator.require_positive("dt", config.dt)
                if x0 is not None and (not x0.is_nonnegative() or x0.length() == 0.0):
                    raise InvalidParameter("x0", f"must be a nonzero vector in the closed positive quadrant, got {x0}")
            case Commands.PEANO_BAKER:
                if not (0 <= config.terms <= PeanoBakerConfig.MAX_TERMS):
                    raise InvalidParameter("terms", f"must lie in [0, {PeanoBakerConfig.MAX_TERMS}], got {config.terms}")
            case Commands.SMOOTH:
                ConfigValidator.require_unstable_c(config.c)
                ConfigValidator.require_step(config.step, ExperimentDefaults.STEP)
                for eps in ConfigValidator.epsilons(config):
                    ConfigValidator.require_epsilon(eps)
            case Commands.NONPERIODIC:
                ConfigValidator.require_unstable_c(config.c)
                ConfigValidator.require_step(config.step, ExperimentDefaults.STEP)
                ConfigValidator.require_positive("dt", config.dt)
                ConfigValidator.horizon_periods(config)
                ScheduleFactory.drift_from_document(config.drift)
            case _:
                pass

    @staticmethod
    def epsilons(config: ExperimentConfig) -> tuple[float, ...]:
        """The epsilon list of the smoothing audit; a single --epsilon replaces the default list."""
        if config.epsilon is not None:
            return (config.epsilon,)
        if not config.epsilons:
            raise InvalidParameter("epsilons", "at least one epsilon is required")
        return config.epsilons
