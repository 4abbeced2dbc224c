import numpy as np

from strauss.core.domain.errors import DomainError
from strauss.core.domain.graphon import CLAMP_TOLERANCE, StepGraphon
from strauss.core.domain.params import CornerEmbedding
from strauss.core.functionals.densities import degree_vector, edge_density, signed_triangle_density
from strauss.core.functionals.entropy import bernoulli_kl, h_entropy


def corner_embed(g0: StepGraphon, e: float, c: float) -> StepGraphon:
    """Place a copy of g0 on [0,c)² and fill the rest so that every degree equals e.

    The rows next to the corner are e − (c/(1−c))·(d0 − e) where d0 is the degree of g0,
    the large block is e + (c/(1−c))²·B with B = ε(g0) − e."""
    CornerEmbedding(g0=g0, e=e, c=c)

    k = g0.k
    ratio = c / (1 - c)
    background = edge_density(g0) - e

    values = np.empty((k + 1, k + 1))
    values[:k, :k] = g0.g
    values[:k, k] = values[k, :k] = e - ratio * (degree_vector(g0) - e)
    values[k, k] = e + ratio**2 * background

    violation = max(-values.min(), values.max() - 1)
    if violation > CLAMP_TOLERANCE:
        raise DomainError(
            f"Corner embedding leaves [0,1] by {violation:.3g}",
            largest_violation=float(violation),
            e=e,
            c=c,
        )
    return StepGraphon.from_arrays(np.append(c * g0.c, 1 - c), values)


def _excess_over_tangent(g0: StepGraphon, e: float) -> float:
    # S(g0) − H(e) − B·H′(e), with B = ε(g0) − e
    s = g0.c
    return -float(s @ bernoulli_kl(g0.g, e) @ s)


def corner_coefficient(g0: StepGraphon, e: float) -> float:
    """(2S(g0) − 2H(e) − 2B·H′(e)) / τ(e − g0)^{2/3}, the F of a general corner graphon"""
    if not 0 < e < 1:
        raise DomainError("Edge density must lie in (0,1)", e=e)
    deficit = signed_triangle_density(g0.c, e - g0.g)
    if not deficit > 0:
        raise DomainError("The corner construction needs τ(e − g0) > 0", triangle_deficit=deficit)
    return float(2 * _excess_over_tangent(g0, e) / np.cbrt(deficit) ** 2)


def corner_entropy_leading(g0: StepGraphon, e: float, c: float) -> float:
    """Entropy of corner_embed(g0, e, c) up to O(c³): H(e) + c²·(S(g0) − H(e) − B·H′(e))"""
    CornerEmbedding(g0=g0, e=e, c=c)
    return float(h_entropy(e)) + c**2 * _excess_over_tangent(g0, e)
