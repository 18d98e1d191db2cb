import math
from dataclasses import dataclass
from typing import Union

from core.errors import NonFiniteEntry


@dataclass(frozen=True, slots=True)
class Vec2:
    """2D column vector with finite entries."""

    x1: float = 0.0
    x2: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise NonFiniteEntry(f"non-finite vector entry in {self!r}")

    def __add__(self, other: 'Vec2') -> 'Vec2':
        """Vector addition using + operator."""
        if isinstance(other, Vec2):
            return Vec2(self.x1 + other.x1, self.x2 + other.x2)
        raise TypeError("Can only add Vec2 to Vec2")

    def __sub__(self, other: 'Vec2') -> 'Vec2':
        """Vector subtraction using - operator."""
        if isinstance(other, Vec2):
            return Vec2(self.x1 - other.x1, self.x2 - other.x2)
        raise TypeError("Can only subtract Vec2 from Vec2")

    def __mul__(self, other: Union['Vec2', float]) -> Union[float, 'Vec2']:
        """Dot product with a Vec2, scaling with a number."""
        if isinstance(other, Vec2):
            return self.dot(other)
        if isinstance(other, (int, float)):
            return self.scaled(float(other))
        raise TypeError("Can only multiply Vec2 with Vec2 or scalar")

    def __neg__(self) -> 'Vec2':
        return Vec2(-self.x1, -self.x2)

    def dot(self, other: 'Vec2') -> float:
        return self.x1 * other.x1 + self.x2 * other.x2

    def scaled(self, factor: float) -> 'Vec2':
        return Vec2(self.x1 * factor, self.x2 * factor)

    def length(self) -> float:
        """Euclidean norm of the vector."""
        return math.hypot(self.x1, self.x2)

    def distance_to(self, other: 'Vec2') -> float:
        """Calculate the distance to another Vec2."""
        return (other - self).length()

    def normalized(self) -> 'Vec2':
        """Return a normalized copy of this vector (the zero vector stays zero)."""
        length = self.length()
        if length == 0:
            return Vec2(0.0, 0.0)
        return Vec2(self.x1 / length, self.x2 / length)

    def is_nonnegative(self) -> bool:
        """True for vectors in the closed positive quadrant."""
        return self.x1 >= 0.0 and self.x2 >= 0.0

    def is_positive(self) -> bool:
        """True for vectors with both coordinates strictly positive."""
        return self.x1 > 0.0 and self.x2 > 0.0

    def as_tuple(self) -> tuple[float, float]:
        return (self.x1, self.x2)

    def __repr__(self) -> str:
        return f"Vec2({self.x1}, {self.x2})"
