from collections.abc import Sequence
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq  # pyright: ignore [reportUnknownVariableType]

from strauss.core.domain.errors import BracketError, NumericalError

DEFAULT_ROOT_TOL = 1e-12


def solve_scalar_root(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = DEFAULT_ROOT_TOL,
) -> float:
    """A root of f inside the bracket by Brent's method (secant steps safeguarded by bisection)"""
    lo, hi = bracket
    f_lo, f_hi = f(lo), f(hi)
    if not (np.isfinite(f_lo) and np.isfinite(f_hi)):
        raise BracketError("f is not finite at the bracket ends", lo=lo, hi=hi, f_lo=f_lo, f_hi=f_hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketError("f has the same sign at both bracket ends", lo=lo, hi=hi, f_lo=f_lo, f_hi=f_hi)

    try:
        root = brentq(f, lo, hi, xtol=tol, maxiter=200)
    except RuntimeError as e:
        raise NumericalError(f"Root solve did not converge: {e}", lo=lo, hi=hi) from e
    return float(root)  # pyright: ignore [reportArgumentType]


def interpolate_sign_change(xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
    """Where y first turns from positive to non-positive, by linear interpolation between samples.

    NaN samples are skipped. None when y never changes sign that way."""
    points = [(x, y) for x, y in zip(xs, ys) if np.isfinite(x) and np.isfinite(y)]
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if y0 > 0 >= y1:
            return float(x0 + (x1 - x0) * y0 / (y0 - y1))
    return None
