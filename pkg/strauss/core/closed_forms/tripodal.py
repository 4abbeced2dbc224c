import numpy as np

from strauss.core.domain.errors import DomainError, SingularityError
from strauss.core.domain.graphon import CLAMP_TOLERANCE, FloatArray, StepGraphon
from strauss.core.domain.params import TripodalAnsatz
from strauss.core.functionals.entropy import bernoulli_kl_deviation, h_entropy


def tripodal_ansatz(e: float, A: float, B: float, c: float) -> StepGraphon:
    return TripodalAnsatz(e=e, A=A, B=B, c=c).graphon()


def c_from_delta(delta: float, A: float, B: float) -> float:
    """Small-pode size giving the ansatz triangle density e³ − δ³"""
    if delta < 0:
        raise DomainError("δ must be non-negative", delta=delta)
    gap = A**3 - B**3
    if not gap > 0:
        raise DomainError("c is undefined unless A³ > B³", A=A, B=B)
    return float(delta / np.cbrt(gap))


def F(e: float, A: float, B: float) -> float:
    """Second-order entropy coefficient of the ansatz as c → 0 at fixed (A, B).

    ΔS ≈ ½·F·δ² against ½·H″(e)·δ² for the symmetric bipodal graphon. The numerator
    H(e+A+B) + H(e−A+B) − 2H(e) − 2B·H′(e) is evaluated as a sum of Bernoulli divergences."""
    if not 0 < e < 1:
        raise DomainError("Edge density must lie in (0,1)", e=e)
    gap = A**3 - B**3
    if gap == 0:
        raise SingularityError("F is singular on A³ = B³", A=A, B=B)
    plus, minus = e + B + A, e + B - A
    for name, u in (("e+A+B", plus), ("e−A+B", minus)):
        if u < -CLAMP_TOLERANCE or u > 1 + CLAMP_TOLERANCE:
            raise DomainError(f"{name} = {u!r} is outside [0,1]", name=name, value=u)
    numerator = -(bernoulli_kl_deviation(B + A, e) + bernoulli_kl_deviation(B - A, e))
    return float(numerator / np.cbrt(gap) ** 2)


def F_surface(e: float, A: FloatArray, B: FloatArray) -> FloatArray:
    """F on arrays of (A, B), NaN wherever A ≤ B or a block leaves [0,1]"""
    A, B = np.broadcast_arrays(np.asarray(A, dtype=np.float64), np.asarray(B, dtype=np.float64))
    plus, minus = e + B + A, e + B - A
    valid = (A > B) & (minus >= 0) & (plus <= 1)
    out = np.full(A.shape, np.nan)
    if not valid.any():
        return out
    a, b = A[valid], B[valid]
    numerator = -(bernoulli_kl_deviation(b + a, e) + bernoulli_kl_deviation(b - a, e))
    out[valid] = numerator / np.cbrt(a**3 - b**3) ** 2
    return out


def F_theta1(e: float) -> float:
    """F at (A, B) = (½, ½ − e), where the small-pode blocks are 0 and 1"""
    if not 0 < e < 0.5:
        raise DomainError("F_theta1 needs e in (0, ½)", e=e)
    numerator = -2 * h_entropy(e) - (1 - 2 * e) * h_entropy(e, 1)
    return float(numerator / (0.75 * e - 1.5 * e**2 + e**3) ** (2 / 3))
