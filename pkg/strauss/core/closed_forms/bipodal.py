from strauss.core.domain.errors import DomainError
from strauss.core.domain.graphon import CLAMP_TOLERANCE, StepGraphon
from strauss.core.functionals.entropy import bernoulli_kl_deviation, h_entropy


def _check(e: float, delta: float) -> None:
    if not 0 < e < 1:
        raise DomainError("Edge density must lie in (0,1)", e=e)
    if delta < -CLAMP_TOLERANCE or delta > min(e, 1 - e) + CLAMP_TOLERANCE:
        raise DomainError("δ must lie in [0, min(e, 1−e)]", e=e, delta=delta)


def symmetric_bipodal(e: float, delta: float) -> StepGraphon:
    """Two podes of size ½ with e − δ on the diagonal blocks and e + δ off the diagonal"""
    _check(e, delta)
    return StepGraphon(sizes=[0.5, 0.5], values=[[e - delta, e + delta], [e + delta, e - delta]])


def bipodal_entropy(e: float, delta: float) -> float:
    _check(e, delta)
    return 0.5 * (h_entropy(e + delta) + h_entropy(e - delta))


def bipodal_excess_entropy(e: float, delta: float) -> float:
    """bipodal_entropy(e, δ) − H(e)"""
    _check(e, delta)
    return -0.5 * (bernoulli_kl_deviation(delta, e) + bernoulli_kl_deviation(-delta, e))
