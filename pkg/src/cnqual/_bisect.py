"""Bracketed bisection shared by the bound solvers."""

from __future__ import annotations

import math
from typing import Callable

__all__ = ["BracketSignError", "bisect_root", "bisect_increasing"]


class BracketSignError(ArithmeticError):
    """The function does not change sign over the bracket."""


def bisect_root(f: Callable[[float], float], lo: float, hi: float, width: float) -> tuple[float, int]:
    """Bisect ``f`` on ``[lo, hi]`` until the bracket is at most ``width`` wide.

    Returns the bracket midpoint and the number of halvings. The endpoint
    values must have strictly opposite signs.
    """
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    if not width > 0:
        raise ValueError("width must be positive")
    f_lo, f_hi = f(lo), f(hi)
    if math.isnan(f_lo) or math.isnan(f_hi) or f_lo * f_hi >= 0 or f_lo == f_hi:
        raise BracketSignError(f"no sign change on [{lo!r}, {hi!r}]: f(lo)={f_lo!r}, f(hi)={f_hi!r}")
    lo_negative = f_lo < 0
    iterations = 0
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        iterations += 1
        if f_mid == 0:
            return mid, iterations
        if (f_mid < 0) == lo_negative:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), iterations


def bisect_increasing(f: Callable[[float], float], lo: float, hi: float, width: float) -> tuple[float, int]:
    """:func:`bisect_root` for a function that must go from negative to positive."""
    f_lo, f_hi = f(lo), f(hi)
    if not (f_lo < 0 < f_hi):
        raise BracketSignError(f"expected f(lo) < 0 < f(hi), got f(lo)={f_lo!r}, f(hi)={f_hi!r}")
    return bisect_root(f, lo, hi, width)
