"""Polar-coordinate helpers for directions on the unit circle"""

import math

from geometry.vectors import Vec2


class AngleUtils:
    """Utility class for polar angles and unit directions"""

    @staticmethod
    def polar_angle(x: Vec2) -> float:
        """Polar angle of x; lies in [0, pi/2] for x in the closed positive quadrant.

        The zero vector is given angle 0.
        """
        return math.atan2(x.x2, x.x1)

    @staticmethod
    def direction(theta: float) -> Vec2:
        """Unit vector [cos(theta), sin(theta)]"""
        return Vec2(math.cos(theta), math.sin(theta))

    @staticmethod
    def clockwise_normal(y: Vec2) -> Vec2:
        """D y = [y2, -y1], perpendicular to y and pointing clockwise"""
        return Vec2(y.x2, -y.x1)

    @staticmethod
    def is_unit(y: Vec2, tolerance: float) -> bool:
        return abs(y.length() - 1.0) <= tolerance
