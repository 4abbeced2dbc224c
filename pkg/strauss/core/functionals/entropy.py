from typing import Literal, Union, overload

import numpy as np
from scipy.special import entr, xlog1py  # pyright: ignore [reportUnknownVariableType]

from strauss.core.domain.errors import DomainError
from strauss.core.domain.graphon import CLAMP_TOLERANCE, FloatArray, StepGraphon

EntropyOrder = Literal[0, 1, 2]

ArrayLike = Union[float, FloatArray]

# (1+r)·log(1+r) − r = Σ_{n≥2} (−1)ⁿ rⁿ / (n(n−1)), coefficients highest degree first
_PHI_SERIES = np.array([(-1) ** n / (n * (n - 1)) for n in range(17, 1, -1)] + [0.0, 0.0])
_PHI_SERIES_RADIUS = 0.1


def _clamped(u: ArrayLike) -> FloatArray:
    arr = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(arr)) or np.any(arr < -CLAMP_TOLERANCE) or np.any(arr > 1 + CLAMP_TOLERANCE):
        raise DomainError("Probability outside [0,1]", value=arr.tolist())
    return np.clip(arr, 0.0, 1.0)


def _out(value: FloatArray, like: ArrayLike) -> ArrayLike:
    if np.ndim(like) == 0:
        return float(value)
    return value


@overload
def h_entropy(u: float, order: EntropyOrder = 0) -> float: ...


@overload
def h_entropy(u: FloatArray, order: EntropyOrder = 0) -> FloatArray: ...


def h_entropy(u: ArrayLike, order: EntropyOrder = 0) -> ArrayLike:
    """Entropy of a coin flip with bias u, or its first or second derivative.

    H(0) = H(1) = 0 by continuity. The derivatives are only defined on (0,1)."""
    arr = _clamped(u)
    if order == 0:
        return _out(entr(arr) + entr(1 - arr), u)
    if np.any(arr <= 0) or np.any(arr >= 1):
        raise DomainError(f"H derivative of order {order} is undefined at the endpoints", value=arr.tolist())
    if order == 1:
        return _out(np.log1p(-arr) - np.log(arr), u)
    if order == 2:
        return _out(-1 / (arr * (1 - arr)), u)
    raise DomainError(f"Unsupported entropy order {order}", order=order)


def _phi(r: FloatArray) -> FloatArray:
    # (1+r)·log(1+r) − r for r ≥ −1, without the cancellation of the linear terms near 0
    out = xlog1py(1 + r, r) - r
    small = np.abs(r) <= _PHI_SERIES_RADIUS
    out[small] = np.polyval(_PHI_SERIES, r[small])
    return out


@overload
def bernoulli_kl_deviation(x: float, p: float) -> float: ...


@overload
def bernoulli_kl_deviation(x: FloatArray, p: float) -> FloatArray: ...


def bernoulli_kl_deviation(x: ArrayLike, p: float) -> ArrayLike:
    """KL(Bernoulli(p + x) ‖ Bernoulli(p)), keeping full relative accuracy as x → 0"""
    if not 0 < p < 1:
        raise DomainError("Reference probability must lie in (0,1)", p=p)
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)) or np.any(arr < -p - CLAMP_TOLERANCE) or np.any(arr > 1 - p + CLAMP_TOLERANCE):
        raise DomainError("p + x is outside [0,1]", p=p, deviation=arr.tolist())
    arr = np.atleast_1d(np.clip(arr, -p, 1 - p))
    value = p * _phi(arr / p) + (1 - p) * _phi(-arr / (1 - p))
    return _out(value.reshape(np.shape(x)), x)


@overload
def bernoulli_kl(u: float, p: float) -> float: ...


@overload
def bernoulli_kl(u: FloatArray, p: float) -> FloatArray: ...


def bernoulli_kl(u: ArrayLike, p: float) -> ArrayLike:
    """Relative entropy KL(Bernoulli(u) ‖ Bernoulli(p)), for u in [0,1] and p in (0,1).

    For a graphon with edge density exactly p, S(g) − H(p) = −Σ c_i c_j KL(g_ij ‖ p),
    which is better conditioned than differencing entropies when g is close to p."""
    arr = _clamped(u)
    return _out(np.asarray(bernoulli_kl_deviation(arr - p, p)), u)


def graphon_entropy(g: StepGraphon) -> float:
    c = g.c
    return float(c @ h_entropy(g.g) @ c)


def excess_entropy(g: StepGraphon, e: float) -> float:
    """S(g) − H(e) for a graphon whose edge density is e, evaluated through Bernoulli divergences"""
    c = g.c
    return -float(c @ bernoulli_kl(g.g, e) @ c)
