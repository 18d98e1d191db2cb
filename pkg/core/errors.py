"""Exception hierarchy for the laboratory.

Validation errors map to CLI exit code 2, bound violations to 3 and every
other failure to 1 (see core.app).
"""


class LabError(Exception):
    """Base class of every error raised by the laboratory"""


class ValidationError(LabError):
    """A precondition of an operation does not hold"""


class InvalidParameter(ValidationError):
    """A numeric parameter lies outside its admissible range"""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class ConfigError(ValidationError):
    """The experiment configuration cannot be parsed"""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class NotMetzler(ValidationError):
    """A matrix has a non-positive off-diagonal entry"""


class NotUnit(ValidationError):
    """A direction vector does not have unit length"""


class SingularMatrix(ValidationError):
    """A matrix is numerically singular"""


class NonFiniteEntry(ValidationError):
    """A matrix or vector entry is NaN or infinite"""


class StepTooLarge(ValidationError):
    """An integrator step exceeds the allowed maximum"""


class DegreeOverflow(ValidationError):
    """Too many Picard terms were requested"""


class ComputationError(LabError):
    """A computation could not produce a meaningful result"""


class DegenerateTrajectory(ComputationError):
    """A trajectory collapsed to zero norm"""


class NumericalOverflow(ComputationError):
    """A computed matrix or state left the range of finite doubles"""


class BracketFailure(ComputationError):
    """A root bracket does not contain a sign change"""


class InstabilityNotWitnessed(ComputationError):
    """The smoothed system did not show a principal multiplier above one"""


class BoundViolated(LabError):
    """A theorem-backed inequality failed, which signals a bug"""
