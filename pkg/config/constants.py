"""Configuration constants for the cooperative-instability laboratory"""

import math


class ToleranceConfig:
    """Numerical tolerances shared by the algebra and the checks built on it"""
    # expm switches to the linear branch when |omega^2| <= this * ||m||_F^2
    DEGENERATE_OMEGA_RATIO = 1e-12
    SINGULAR_DET = 1e-300
    UNIT_NORM = 1e-10
    ROTATION_SIGMA = 1e-12
    FLUSH_TO_ZERO = 1e-300
    COMPARISON_SLACK = 1e-12
    # Relative slack of ||v(2k)|| >= mu^k ||w(0)|| for RK4 solutions
    GROWTH_RELATIVE_SLACK = 1e-8

    # Bisection for the sign change angle stops at this bracket width
    ANGLE_BISECTION_WIDTH = 1e-12


class IntegratorConfig:
    """Runge-Kutta integrator settings"""
    DEFAULT_STEP = 1e-3
    MAX_STEP = 1e-2
    DEFAULT_DIRECTION_DT = 1e-2
    # Sub-intervals shorter than this fraction of a step are treated as empty
    MIN_STEP_FRACTION = 1e-9


class ScheduleConfig:
    """Parameters of the canonical schedules"""
    CANONICAL_PERIOD = 2.0
    EPSILON_MIN = 0.0
    EPSILON_MAX = 0.25
    DRIFT_MAX = 0.25
    NORM_GRID_SPACING = 1e-3
    NORM_INFLATION = 1.01

    # The set where A(1)y.y > 0 is nonempty only outside this window
    CONE_THRESHOLD = 1.0 + math.sqrt(3.0) / 2.0


class PeanoBakerConfig:
    """Truncation settings of the Picard series"""
    DEFAULT_TERMS = 40
    MAX_TERMS = 60
    TAIL_TERMS = 200


class ExperimentDefaults:
    """Default parameters of the desk-scale experiments"""
    C = 3.0
    EPSILONS = (0.1, 0.05, 0.02, 0.01)
    STEP = 1e-3
    HORIZON = 50.0
    HORIZON_PERIODS = 25
    MIN_HORIZON_PERIODS = 5
    TERMS = 40
    SAMPLE_DT = 0.05
    SEED = 0

    THRESHOLD_PRECISION = 1e-10
    THRESHOLD_PRECISION_MIN = 1e-12
    THRESHOLD_PRECISION_MAX = 1e-3
    MAX_BRACKET_WIDTH = 1e-8
    MU_BRACKET = (1.0, 5.0)
    PB_BRACKET = (1.0, 10.0)

    LYAPUNOV_MIN_HORIZON = 50.0
    APRIORI_TIMES = (0.5, 1.0, 1.5, 2.0)

    SWEEP_C_MIN = 0.5
    SWEEP_C_MAX = 8.0
    SWEEP_POINTS = 31


class ReportConfig:
    """Report serialization settings"""
    SIGNIFICANT_DIGITS = 17
    FORMATS = ("csv", "json")
    DEFAULT_FORMAT = "csv"
    LINE_TERMINATOR = "\n"
    ENCODING = "utf-8"


class ExitCodes:
    """Process exit codes of the command-line front end"""
    SUCCESS = 0
    RUNTIME_FAILURE = 1
    VALIDATION = 2
    BOUND_VIOLATION = 3
