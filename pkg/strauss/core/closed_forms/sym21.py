from typing import Literal

import numpy as np

from strauss.core.domain.errors import DomainError
from strauss.core.domain.graphon import StepGraphon
from strauss.core.domain.params import Sym21Params, sym21_deviations
from strauss.core.functionals.entropy import bernoulli_kl, bernoulli_kl_deviation, h_entropy


def sym21_graphon(p: Sym21Params) -> StepGraphon:
    return p.graphon()


def sym21_triangle(p: Sym21Params) -> float:
    """Triangle density e³ + ¾ec(1−c)D² + ¾c²(1−c)BD² + c³(B³ − A³), exact for the whole family"""
    e, A, B, c, D = p.e, p.A, p.B, p.c, p.D
    return e**3 + 0.75 * e * c * (1 - c) * D**2 + 0.75 * c**2 * (1 - c) * B * D**2 + c**3 * (B**3 - A**3)


def _weighted(c: float, small: float, cross: float, mixed: float, large: float) -> float:
    # The two small podes have size c/2 each, the large one 1 − c
    return 0.5 * c**2 * (small + cross) + 2 * c * (1 - c) * mixed + (1 - c) ** 2 * large


def sym21_entropy(p: Sym21Params) -> float:
    h = [float(h_entropy(v)) for v in p.blocks]
    return _weighted(p.c, *h)


def sym21_excess_entropy(p: Sym21Params) -> float:
    """sym21_entropy(p) − H(e), evaluated through Bernoulli divergences"""
    kl = [float(bernoulli_kl(v, p.e)) for v in p.blocks]
    return -_weighted(p.c, *kl)


def sym21_excess_entropy_unchecked(e: float, A: float, B: float, c: float, D: float = 0.0) -> float:
    """sym21_excess_entropy without building the model, accurate for blocks close to e.

    Raises DomainError when a block leaves [0,1]."""
    kl = bernoulli_kl_deviation(np.asarray(sym21_deviations(A, B, c, D), dtype=np.float64), e)
    return -_weighted(c, *kl.tolist())


def sym21_dS_dD(p: Sym21Params, order: Literal[1, 2]) -> float:
    """First or second derivative of sym21_entropy in D, at D = 0.

    The block values move with D at rates (1−c, 1−c, (1−2c)/2, −c)."""
    if p.D != 0:
        raise DomainError("The D-derivatives are taken at D = 0", D=p.D)
    c = p.c
    if order == 1:
        small, cross, mixed, large = (float(h_entropy(v, 1)) for v in p.blocks)
        return 0.5 * c**2 * (1 - c) * (small + cross) + c * (1 - c) * (1 - 2 * c) * mixed - c * (1 - c) ** 2 * large
    if order == 2:
        small, cross, mixed, large = (float(h_entropy(v, 2)) for v in p.blocks)
        return (
            0.5 * c**2 * (1 - c) ** 2 * (small + cross)
            + 0.5 * c * (1 - c) * (1 - 2 * c) ** 2 * mixed
            + c**2 * (1 - c) ** 2 * large
        )
    raise DomainError(f"Unsupported derivative order {order}", order=order)
