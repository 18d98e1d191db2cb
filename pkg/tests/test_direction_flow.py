import math

import numpy as np
import pytest

from core.errors import BracketFailure, InvalidParameter, NotMetzler, NotUnit
from core.rootfinding import bisect
from geometry.matrices import Mat2, expm, spectral
from geometry.transforms import AngleUtils
from geometry.vectors import Vec2
from schedules.canonical import canonical_pair
from systems.direction_flow import (
    Rotation,
    cone_occupancy,
    direction_field,
    growth_cone,
    integrate_direction,
    quadratic_form,
    rotation_indicator,
    rotation_sign,
    sign_change_angle,
)
from systems.propagation import Trajectory


def sigma_closed_form(a: Mat2, theta: float) -> float:
    s, c = math.sin(theta), math.cos(theta)
    return a.a12 * s * s - a.a21 * c * c + (a.a11 - a.a22) * s * c


class TestDirectionField:
    def test_vanishes_on_principal_eigenvector(self):
        a1, _ = canonical_pair(3.0)
        u = spectral(a1).u
        assert direction_field(a1, u).length() < 1e-14
        assert rotation_sign(a1, u) is Rotation.FIXED

    def test_coordinate_axes(self):
        a1, _ = canonical_pair(3.0)
        g = direction_field(a1, Vec2(1.0, 0.0))
        assert g.distance_to(Vec2(0.0, 1.0 / 12.0)) < 1e-15
        assert rotation_indicator(a1, Vec2(1.0, 0.0)) == pytest.approx(-1.0 / 12.0)
        assert rotation_indicator(a1, Vec2(0.0, 1.0)) == pytest.approx(3.0)
        assert rotation_sign(a1, Vec2(1.0, 0.0)) is Rotation.COUNTERCLOCKWISE
        assert rotation_sign(a1, Vec2(0.0, 1.0)) is Rotation.CLOCKWISE

    def test_tangent_to_circle(self, small_metzler_ensemble, rng):
        for m in small_metzler_ensemble:
            y = AngleUtils.direction(float(rng.uniform(0.0, 2.0 * math.pi)))
            assert abs(direction_field(m, y).dot(y)) < 1e-13

    def test_sigma_closed_form(self, small_metzler_ensemble):
        for m in small_metzler_ensemble:
            for theta in np.linspace(0.0, 0.5 * math.pi, 7):
                y = AngleUtils.direction(float(theta))
                assert rotation_indicator(m, y) == pytest.approx(sigma_closed_form(m, float(theta)), abs=1e-12)

    def test_sign_pattern_on_quadrant(self):
        a1, _ = canonical_pair(3.0)
        theta0 = sign_change_angle(a1)
        for theta in np.linspace(0.0, 0.5 * math.pi, 50):
            theta = float(theta)
            if abs(theta - theta0) < 1e-6:
                continue
            expected = Rotation.COUNTERCLOCKWISE if theta < theta0 else Rotation.CLOCKWISE
            assert rotation_sign(a1, AngleUtils.direction(theta)) is expected

    def test_preconditions(self):
        a1, _ = canonical_pair(3.0)
        with pytest.raises(NotUnit):
            direction_field(a1, Vec2(1.0, 1.0))
        with pytest.raises(NotMetzler):
            rotation_sign(Mat2(-1.0, 0.0, 1.0, -1.0), Vec2(1.0, 0.0))
        with pytest.raises(InvalidParameter):
            rotation_sign(a1, Vec2(-1.0, 0.0))

    def test_quadratic_form(self):
        c = 3.0
        a1, _ = canonical_pair(c)
        for theta in np.linspace(0.0, 0.5 * math.pi, 9):
            theta = float(theta)
            expected = -1.0 + 0.5 * (c + 1.0 / (4.0 * c)) * math.sin(2.0 * theta)
            assert quadratic_form(a1, AngleUtils.direction(theta)) == pytest.approx(expected, abs=1e-14)


class TestSignChangeAngle:
    @pytest.mark.parametrize("c", [0.3, 3.0, 10.0])
    def test_principal_directions(self, c):
        a1, a2 = canonical_pair(c)
        assert sign_change_angle(a1) == pytest.approx(math.atan(1.0 / (2.0 * c)), abs=1e-11)
        assert sign_change_angle(a2) == pytest.approx(math.atan(2.0 * c), abs=1e-11)

    def test_symmetric_case(self):
        a1, _ = canonical_pair(0.5)
        assert sign_change_angle(a1) == pytest.approx(0.25 * math.pi, abs=1e-11)

    def test_random_metzler(self, small_metzler_ensemble):
        for m in small_metzler_ensemble:
            u = spectral(m).u
            assert sign_change_angle(m) == pytest.approx(AngleUtils.polar_angle(u), abs=1e-10)


class TestBisect:
    def test_square_root(self):
        bracket = bisect(lambda x: x * x - 2.0, 0.0, 2.0, 1e-12)
        assert bracket.width <= 1e-12
        assert bracket.lo <= bracket.root <= bracket.hi
        assert bracket.root == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_exact_zero_at_end(self):
        bracket = bisect(lambda x: x - 1.0, 1.0, 3.0, 1e-9)
        assert bracket.root == 1.0
        assert bracket.iterations == 0

    def test_no_sign_change(self):
        with pytest.raises(BracketFailure):
            bisect(lambda x: x * x + 1.0, -1.0, 1.0, 1e-9)
        with pytest.raises(InvalidParameter):
            bisect(lambda x: x, 1.0, -1.0, 1e-9)


class TestGrowthCone:
    @pytest.mark.parametrize("c", [0.2, 0.5, 1.0, 1.5, 1.8])
    def test_empty_window(self, c):
        cone = growth_cone(c)
        assert cone.empty
        assert math.isnan(cone.lo) and math.isnan(cone.hi)
        assert cone.width() == 0.0

    def test_window_edges(self):
        assert growth_cone(1.0 + math.sqrt(3.0) / 2.0).empty
        assert not growth_cone(1.0 + math.sqrt(3.0) / 2.0 + 1e-6).empty
        assert not growth_cone(0.1).empty

    def test_canonical_interval(self):
        cone = growth_cone(3.0)
        lo = 0.5 * math.asin(24.0 / 37.0)
        assert cone.lo == pytest.approx(lo, abs=1e-15)
        assert cone.hi == pytest.approx(0.5 * math.pi - lo, abs=1e-15)
        assert cone.contains(0.25 * math.pi)

    def test_matches_sign_of_quadratic_form(self):
        c = 3.0
        a1, _ = canonical_pair(c)
        cone = growth_cone(c)
        for theta in np.linspace(0.0, 0.5 * math.pi, 201):
            theta = float(theta)
            if min(abs(theta - cone.lo), abs(theta - cone.hi)) < 1e-9:
                continue
            assert (quadratic_form(a1, AngleUtils.direction(theta)) > 0.0) == cone.contains(theta)

    def test_symmetric_under_reciprocal(self):
        for c in (2.5, 4.0, 9.0):
            cone, mirror = growth_cone(c), growth_cone(1.0 / (4.0 * c))
            assert cone.lo == pytest.approx(mirror.lo, abs=1e-14)
            assert cone.hi == pytest.approx(mirror.hi, abs=1e-14)

    def test_rejects_bad_c(self):
        with pytest.raises(InvalidParameter):
            growth_cone(0.0)

    def test_occupancy(self):
        angles = [0.1, 0.25 * math.pi, 1.5]
        tr = Trajectory(times=[0.0, 1.0, 2.0], states=[AngleUtils.direction(a) for a in angles], angles=angles)
        assert cone_occupancy(tr, 3.0) == pytest.approx(1.0 / 3.0)
        assert cone_occupancy(tr, 1.0) == 0.0


class TestIntegrateDirection:
    def test_converges_to_principal_direction(self):
        a1, _ = canonical_pair(3.0)
        u = spectral(a1).u
        for y0 in (Vec2(1.0, 0.0), Vec2(0.0, 1.0)):
            path = integrate_direction(a1, y0, 25.0)
            assert path.final_state.distance_to(u) < 1e-9
            assert path.radial_rates[-1] == pytest.approx(-0.5, abs=1e-9)

    def test_angle_is_monotone(self):
        a1, _ = canonical_pair(3.0)
        rising = integrate_direction(a1, Vec2(1.0, 0.0), 10.0).angles
        falling = integrate_direction(a1, Vec2(0.0, 1.0), 10.0).angles
        assert all(b >= a for a, b in zip(rising, rising[1:]))
        assert all(b <= a for a, b in zip(falling, falling[1:]))

    def test_stays_on_unit_circle(self):
        a1, _ = canonical_pair(3.0)
        path = integrate_direction(a1, Vec2(0.6, 0.8), 5.0, 0.05)
        assert all(abs(n - 1.0) < 1e-14 for n in path.norms)
        assert path.times[-1] == pytest.approx(5.0)

    def test_agrees_with_normalized_solution(self):
        a1, _ = canonical_pair(3.0)
        y0 = Vec2(0.6, 0.8)
        path = integrate_direction(a1, y0, 1.0, 1e-3)
        expected = (expm(a1, 1.0) @ y0).normalized()
        assert path.final_state.distance_to(expected) < 1e-10

    def test_preconditions(self):
        a1, _ = canonical_pair(3.0)
        with pytest.raises(NotUnit):
            integrate_direction(a1, Vec2(2.0, 0.0), 1.0)
        with pytest.raises(InvalidParameter):
            integrate_direction(a1, Vec2(1.0, 0.0), 0.0)
        with pytest.raises(InvalidParameter):
            integrate_direction(a1, Vec2(1.0, 0.0), 1.0, -0.1)
