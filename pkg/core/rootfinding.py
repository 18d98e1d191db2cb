import logging
import math
from dataclasses import dataclass
from typing import Callable

from core.errors import BracketFailure, InvalidParameter


@dataclass(frozen=True)
class Bracket:
    """Final bracket of a bisection run and the point reported inside it."""

    lo: float
    hi: float
    root: float
    residual: float
    iterations: int

    @property
    def width(self) -> float:
        return self.hi - self.lo


def bisect(func: Callable[[float], float], lo: float, hi: float, width: float,
           max_iter: int = 200) -> Bracket:
    """Bisection on a sign change of func in [lo, hi] down to the given bracket width.

    The reported root is the secant point of the final bracket, which is much
    closer to the zero than the midpoint when func is smooth.
    """
    if not (width > 0.0 and math.isfinite(width)):
        raise InvalidParameter("precision", f"must be positive, got {width}")
    if not lo < hi:
        raise InvalidParameter("bracket", f"lower end {lo} must be below upper end {hi}")

    f_lo = func(lo)
    f_hi = func(hi)
    if f_lo == 0.0:
        return Bracket(lo, lo, lo, 0.0, 0)
    if f_hi == 0.0:
        return Bracket(hi, hi, hi, 0.0, 0)
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketFailure(f"no sign change on [{lo}, {hi}]: f = {f_lo:.3e}, {f_hi:.3e}")

    iterations = 0
    while hi - lo > width and iterations < max_iter:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = func(mid)
        iterations += 1
        if f_mid == 0.0:
            lo = hi = mid
            f_lo = f_hi = 0.0
            break
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        logging.debug("bisect: iteration %d, bracket [%.15g, %.15g]", iterations, lo, hi)

    if f_hi == f_lo:
        root = 0.5 * (lo + hi)
    else:
        root = min(hi, max(lo, lo - f_lo * (hi - lo) / (f_hi - f_lo)))
    return Bracket(lo, hi, root, abs(func(root)), iterations)
