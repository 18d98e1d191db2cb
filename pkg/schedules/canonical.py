"""Closed-form matrices of the canonical switching construction"""

import math

from core.errors import InvalidParameter
from geometry.matrices import Mat2, principal_eigenvalue


def _check_c(c: float) -> None:
    if not (math.isfinite(c) and c > 0.0):
        raise InvalidParameter("c", f"must be a positive number, got {c}")


def canonical_pair(c: float) -> tuple[Mat2, Mat2]:
    """A(1) = [[-1, c], [1/(4c), -1]] and its transpose A(2).

    Both have eigenvalues -1/2 and -3/2 for every c > 0.
    """
    _check_c(c)
    q = 1.0 / (4.0 * c)
    return Mat2(-1.0, c, q, -1.0), Mat2(-1.0, q, c, -1.0)


def interpolant(c: float, s: float) -> Mat2:
    """Bar A(s): the linear blend of A(1) and A(2) shifted so its principal eigenvalue is -1/2."""
    _check_c(c)
    if not (0.0 <= s <= 1.0):
        raise InvalidParameter("s", f"must lie in [0, 1], got {s}")
    q = 1.0 / (4.0 * c)
    blended = Mat2(-1.0, (1.0 - s) * c + s * q, s * c + (1.0 - s) * q, -1.0)
    shift = principal_eigenvalue(blended) + 0.5
    return blended - Mat2.scalar(shift)


def default_drift(t: float) -> float:
    """Almost periodic drift (2 + sin t + sin(sqrt(2) t)) / 16, valued in (0, 1/4)."""
    return (2.0 + math.sin(t) + math.sin(math.sqrt(2.0) * t)) / 16.0
