"""Exact 2x2 linear algebra: arithmetic, norms, Perron-Frobenius data of
Metzler matrices and the closed-form matrix exponential."""

import logging
import math
from dataclasses import dataclass
from typing import Union

from config.constants import ToleranceConfig
from core.errors import NonFiniteEntry, NotMetzler, NumericalOverflow, SingularMatrix
from geometry.vectors import Vec2


@dataclass(frozen=True, slots=True)
class Mat2:
    """Real 2x2 matrix [[a11, a12], [a21, a22]] with finite entries."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.a11, self.a12, self.a21, self.a22)):
            raise NonFiniteEntry(f"non-finite matrix entry in {self!r}")

    @staticmethod
    def identity() -> 'Mat2':
        return Mat2(1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def zero() -> 'Mat2':
        return Mat2(0.0, 0.0, 0.0, 0.0)

    @staticmethod
    def scalar(value: float) -> 'Mat2':
        """value * I"""
        return Mat2(value, 0.0, 0.0, value)

    @staticmethod
    def from_rows(rows: list[list[float]]) -> 'Mat2':
        return Mat2(float(rows[0][0]), float(rows[0][1]), float(rows[1][0]), float(rows[1][1]))

    def __add__(self, other: 'Mat2') -> 'Mat2':
        if isinstance(other, Mat2):
            return Mat2(self.a11 + other.a11, self.a12 + other.a12,
                        self.a21 + other.a21, self.a22 + other.a22)
        raise TypeError("Can only add Mat2 to Mat2")

    def __sub__(self, other: 'Mat2') -> 'Mat2':
        if isinstance(other, Mat2):
            return Mat2(self.a11 - other.a11, self.a12 - other.a12,
                        self.a21 - other.a21, self.a22 - other.a22)
        raise TypeError("Can only subtract Mat2 from Mat2")

    def __mul__(self, factor: float) -> 'Mat2':
        """Scaling by a number."""
        if isinstance(factor, (int, float)):
            return self.scaled(float(factor))
        raise TypeError("Use @ for matrix products")

    def __rmul__(self, factor: float) -> 'Mat2':
        return self.__mul__(factor)

    def __matmul__(self, other: Union['Mat2', Vec2]) -> Union['Mat2', Vec2]:
        """Matrix product with a Mat2 or a Vec2."""
        if isinstance(other, Mat2):
            return matmul(self, other)
        if isinstance(other, Vec2):
            return matvec(self, other)
        raise TypeError("Can only multiply Mat2 with Mat2 or Vec2")

    def __neg__(self) -> 'Mat2':
        return self.scaled(-1.0)

    def scaled(self, factor: float) -> 'Mat2':
        return Mat2(self.a11 * factor, self.a12 * factor, self.a21 * factor, self.a22 * factor)

    def trace(self) -> float:
        return self.a11 + self.a22

    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    def transpose(self) -> 'Mat2':
        return Mat2(self.a11, self.a21, self.a12, self.a22)

    def entries(self) -> tuple[float, float, float, float]:
        """Entries in row-major order."""
        return (self.a11, self.a12, self.a21, self.a22)

    def max_abs_diff(self, other: 'Mat2') -> float:
        return max(abs(a - b) for a, b in zip(self.entries(), other.entries()))

    def __repr__(self) -> str:
        return f"Mat2([[{self.a11}, {self.a12}], [{self.a21}, {self.a22}]])"


@dataclass(frozen=True, slots=True)
class SpectralPair:
    """Perron-Frobenius data of a Metzler matrix: lambda1 > lambda2, u > 0, v sign-opposed."""

    lambda1: float
    lambda2: float
    u: Vec2
    v: Vec2


def matmul(a: Mat2, b: Mat2) -> Mat2:
    return Mat2(
        a.a11 * b.a11 + a.a12 * b.a21,
        a.a11 * b.a12 + a.a12 * b.a22,
        a.a21 * b.a11 + a.a22 * b.a21,
        a.a21 * b.a12 + a.a22 * b.a22,
    )


def matvec(a: Mat2, x: Vec2) -> Vec2:
    return Vec2(a.a11 * x.x1 + a.a12 * x.x2, a.a21 * x.x1 + a.a22 * x.x2)


def matpow(m: Mat2, k: int) -> Mat2:
    """m^k for k >= 0 by repeated squaring."""
    if k < 0:
        raise ValueError("matpow needs a nonnegative exponent")
    result = Mat2.identity()
    base = m
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def frobenius_norm(m: Mat2) -> float:
    """Euclidean (Frobenius) norm, submultiplicative."""
    return math.sqrt(m.a11 ** 2 + m.a12 ** 2 + m.a21 ** 2 + m.a22 ** 2)


def inverse(m: Mat2) -> Mat2:
    det = m.det()
    if abs(det) <= ToleranceConfig.SINGULAR_DET:
        raise SingularMatrix(f"determinant {det:.3e} of {m!r} is numerically zero")
    return Mat2(m.a22 / det, -m.a12 / det, -m.a21 / det, m.a11 / det)


def is_metzler(m: Mat2) -> bool:
    """Class M: both off-diagonal entries strictly positive."""
    return m.a12 > 0.0 and m.a21 > 0.0


def is_positive(m: Mat2) -> bool:
    """Class P: all four entries strictly positive."""
    return m.a11 > 0.0 and m.a12 > 0.0 and m.a21 > 0.0 and m.a22 > 0.0


def principal_eigenvalue(m: Mat2) -> float:
    """Larger root of the characteristic polynomial of a Metzler matrix."""
    diff = m.a11 - m.a22
    return 0.5 * (m.a11 + m.a22 + math.sqrt(diff * diff + 4.0 * m.a12 * m.a21))


def spectral(m: Mat2) -> SpectralPair:
    """Principal and secondary eigenpairs of a Metzler matrix.

    The principal eigenvector takes the well-conditioned branch
    [1, a21/(l1 - a22)] when a11 >= a22 and [a12/(l1 - a11), 1] otherwise;
    the secondary one is read off the first row, [a12, l2 - a11], or the
    second row, [l2 - a22, a21], with the same case split.
    """
    if not is_metzler(m):
        raise NotMetzler(f"{m!r} has a non-positive off-diagonal entry")

    lambda1 = principal_eigenvalue(m)
    lambda2 = m.trace() - lambda1

    if m.a11 >= m.a22:
        u = Vec2(1.0, m.a21 / (lambda1 - m.a22))
        v = Vec2(m.a12, lambda2 - m.a11)
    else:
        u = Vec2(m.a12 / (lambda1 - m.a11), 1.0)
        v = Vec2(lambda2 - m.a22, m.a21)

    u = u.normalized()
    v = v.normalized()
    # Fix the sign of v so that its first coordinate is positive
    if v.x1 < 0.0:
        v = -v
    return SpectralPair(lambda1=lambda1, lambda2=lambda2, u=u, v=v)


def eigen_residual(m: Mat2, pair: SpectralPair) -> float:
    """Largest of ||A u - l1 u|| and ||A v - l2 v||."""
    ru = (matvec(m, pair.u) - pair.u.scaled(pair.lambda1)).length()
    rv = (matvec(m, pair.v) - pair.v.scaled(pair.lambda2)).length()
    return max(ru, rv)


def expm(m: Mat2, t: float) -> Mat2:
    """Closed-form exp(t m).

    Split m = alpha I + B with alpha = trace/2 and B traceless, so that
    B^2 = omega^2 I with omega^2 = (a11 - a22)^2/4 + a12 a21. For omega t
    of order one and above the hyperbolic diagonal is written with
    exp((alpha +- omega) t); below that with cosh and sinh. Near omega^2 = 0
    the series is cut after t^2 B^2/2.

    Raises NumericalOverflow when an entry exceeds the double range; entries
    below it flush to zero.
    """
    try:
        return _closed_form_exp(m, t)
    except (OverflowError, NonFiniteEntry) as error:
        raise NumericalOverflow(f"exp({t} m) overflows for m = {m!r}") from error


def _closed_form_exp(m: Mat2, t: float) -> Mat2:
    alpha = 0.5 * m.trace()
    half_diff = 0.5 * (m.a11 - m.a22)
    omega_sq = half_diff * half_diff + m.a12 * m.a21
    norm_sq = frobenius_norm(m) ** 2

    if abs(omega_sq) <= ToleranceConfig.DEGENERATE_OMEGA_RATIO * norm_sq or norm_sq == 0.0:
        logging.debug("expm: linear branch, omega^2 = %.3e", omega_sq)
        scale = math.exp(alpha * t)
        diag = 1.0 + 0.5 * t * t * omega_sq
        return Mat2(
            scale * (diag + t * half_diff),
            scale * t * m.a12,
            scale * t * m.a21,
            scale * (diag - t * half_diff),
        )

    if omega_sq > 0.0:
        omega = math.sqrt(omega_sq)
        if abs(omega * t) < 0.5:
            scale = math.exp(alpha * t)
            ch = scale * math.cosh(omega * t)
            off = scale * math.sinh(omega * t) / omega
            return Mat2(ch + half_diff * off, off * m.a12, off * m.a21, ch - half_diff * off)

        # exp(alpha t) stays folded into grow and decay; alone it under- or overflows first
        grow = math.exp((alpha + omega) * t)
        decay = math.exp((alpha - omega) * t)
        off = 0.5 * (grow - decay) / omega
        ratio = half_diff / omega
        return Mat2(
            0.5 * ((1.0 + ratio) * grow + (1.0 - ratio) * decay),
            off * m.a12,
            off * m.a21,
            0.5 * ((1.0 - ratio) * grow + (1.0 + ratio) * decay),
        )

    omega = math.sqrt(-omega_sq)
    scale = math.exp(alpha * t)
    cos_part = scale * math.cos(omega * t)
    sin_part = scale * math.sin(omega * t) / omega
    return Mat2(
        cos_part + sin_part * half_diff,
        sin_part * m.a12,
        sin_part * m.a21,
        cos_part - sin_part * half_diff,
    )
