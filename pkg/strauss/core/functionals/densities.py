import numpy as np
from pydantic import BaseModel

from strauss.core.domain.errors import ParameterError
from strauss.core.domain.graphon import FloatArray, StepGraphon
from strauss.core.functionals.entropy import h_entropy

MIN_ORACLE_GRID = 16


def edge_density(g: StepGraphon) -> float:
    c = g.c
    return float(c @ g.g @ c)


def signed_triangle_density(sizes: FloatArray, values: FloatArray) -> float:
    """Triangle density of a step kernel whose values may be negative, e-g e − g0"""
    if len(sizes) == 1:
        return (float(sizes[0]) * float(values[0][0])) ** 3
    return float(np.einsum("i,j,k,ij,jk,ki->", sizes, sizes, sizes, values, values, values))


def triangle_density(g: StepGraphon) -> float:
    return signed_triangle_density(g.c, g.g)


def degree_vector(g: StepGraphon) -> FloatArray:
    return g.g @ g.c


def l2_deviation(g: StepGraphon, e: float) -> float:
    """Squared L2 distance between g and the constant graphon e"""
    c = g.c
    return float(c @ ((g.g - e) ** 2) @ c)


class OracleResult(BaseModel):
    edge: float
    triangle: float
    entropy: float


def riemann_oracle(g: StepGraphon, n: int) -> OracleResult:
    """Brute-force the three functionals on the n×n midpoint grid.

    Exact when every pode boundary falls on a grid line, within O(1/n) otherwise."""
    if n < MIN_ORACLE_GRID:
        raise ParameterError(f"Oracle grid must be at least {MIN_ORACLE_GRID}", n=n)

    midpoints = (np.arange(n) + 0.5) / n
    edges = np.cumsum(g.c)
    pode = np.clip(np.searchsorted(edges, midpoints, side="right"), 0, g.k - 1)
    w = g.g[np.ix_(pode, pode)]

    return OracleResult(
        edge=float(w.mean()),
        triangle=float(np.sum((w @ w) * w.T) / n**3),
        entropy=float(h_entropy(w).mean()),
    )
