"""Identity suite: the closed forms against the generic functionals and finite differences"""

from itertools import islice
from typing import Callable

import numpy as np
from pydantic import BaseModel

from strauss.core.closed_forms.corner import corner_coefficient
from strauss.core.closed_forms.sym21 import sym21_dS_dD, sym21_entropy, sym21_excess_entropy, sym21_triangle
from strauss.core.closed_forms.tripodal import F, tripodal_ansatz
from strauss.core.domain.graphon import StepGraphon
from strauss.core.domain.params import Sym21Params, sym21_blocks
from strauss.core.functionals.densities import riemann_oracle, triangle_density
from strauss.core.functionals.entropy import graphon_entropy

CHECK_SEED = 20240101
IDENTITY_TOL = 1e-13
DERIVATIVE_TOL = 1e-7
ORACLE_TOL = 1e-12
# The Riemann oracle is O(n²) memory, a handful of draws is enough
ORACLE_DRAWS = 3
FD_STEP = 1e-3


class CheckResult(BaseModel):
    name: str
    worst: float
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        return bool(self.worst <= self.tolerance)


def _draw(rng: np.random.Generator, with_d: bool = True) -> Sym21Params:
    # Rejection sampling of interior members, all blocks within (0.001, 0.999)
    while True:
        e = rng.uniform(0.05, 0.6)
        c = rng.uniform(0.02, 0.5)
        m = min(e, 1 - e)
        A = rng.uniform(0, 0.5 * m)
        B = rng.uniform(-0.3 * m, 0.3 * m)
        D = rng.uniform(-0.2 * m, 0.2 * m) if with_d else 0.0
        if all(0.001 < v < 0.999 for v in sym21_blocks(e, A, B, c, D)):
            return Sym21Params(e=e, A=A, B=B, c=c, D=D)


def _worst(
    name: str,
    tolerance: float,
    samples: list[Sym21Params],
    error: Callable[[Sym21Params], float],
) -> CheckResult:
    worst = max((error(p) for p in samples), default=0.0)
    return CheckResult(name=name, worst=worst, tolerance=tolerance, samples=len(samples))


def _fd(p: Sym21Params, order: int) -> float:
    def s(d: float) -> float:
        return sym21_excess_entropy(p.model_copy(update={"D": d}))

    def central(h: float) -> float:
        if order == 1:
            return (s(h) - s(-h)) / (2 * h)
        return (s(h) - 2 * s(0) + s(-h)) / h**2

    # Richardson extrapolation cancels the h² error term
    return (4 * central(FD_STEP / 2) - central(FD_STEP)) / 3


def _ansatz_error(p: Sym21Params) -> float:
    return abs(triangle_density(tripodal_ansatz(p.e, p.A, p.B, p.c)) - (p.e**3 - p.c**3 * (p.A**3 - p.B**3)))


def _bipodal_g0(p: Sym21Params) -> StepGraphon:
    e, A, B = p.e, p.A, p.B
    return StepGraphon(sizes=[0.5, 0.5], values=[[e - A + B, e + A + B], [e + A + B, e - A + B]])


def _on_grid(p: Sym21Params, n: int) -> Sym21Params:
    # Small podes of c/2 on whole grid cells, so the midpoint rule is exact
    cells = max(1, round(p.c * n / 2))
    return p.model_copy(update={"c": 2 * cells / n})


def _oracle_error(p: Sym21Params, n: int) -> float:
    oracle = riemann_oracle(p.graphon(), n)
    return max(abs(oracle.triangle - sym21_triangle(p)), abs(oracle.entropy - sym21_entropy(p)))


def run_checks(draws: int = 1000, n_grid: int = 2000, seed: int = CHECK_SEED) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    family = [_draw(rng) for _ in range(draws)]
    ansatz = [_draw(rng, with_d=False) for _ in range(draws)]
    # F is evaluated away from A³ = B³ and from tiny A, where rounding of e ± A + B dominates
    corner = [
        p for p in ansatz if p.A >= 0.02 and abs(p.B) <= 0.5 * p.A and 0 <= p.e - p.A + p.B and p.e + p.A + p.B <= 1
    ]
    # The D-derivatives are only tested where every block stays well inside (0,1) under the FD stencil
    smooth = [p for p in ansatz if all(0.05 < v < 0.95 for v in p.blocks)]
    on_grid = (_on_grid(p, n_grid) for p in family)
    oracle = list(islice((q for q in on_grid if all(0 < v < 1 for v in q.blocks)), ORACLE_DRAWS))

    return [
        _worst(
            "sym21_triangle = triangle_density",
            IDENTITY_TOL,
            family,
            lambda p: abs(sym21_triangle(p) - triangle_density(p.graphon())),
        ),
        _worst(
            "sym21_entropy = graphon_entropy",
            IDENTITY_TOL,
            family,
            lambda p: abs(sym21_entropy(p) - graphon_entropy(p.graphon())),
        ),
        _worst(
            "ansatz triangle = e³ − c³(A³ − B³)",
            IDENTITY_TOL,
            ansatz,
            _ansatz_error,
        ),
        _worst(
            "corner_coefficient(bipodal g0) = F",
            IDENTITY_TOL,
            corner,
            lambda p: abs(corner_coefficient(_bipodal_g0(p), p.e) - F(p.e, p.A, p.B)),
        ),
        _worst(
            "dS/dD at D = 0 matches finite differences",
            DERIVATIVE_TOL,
            smooth,
            lambda p: max(abs(sym21_dS_dD(p, 1) - _fd(p, 1)), abs(sym21_dS_dD(p, 2) - _fd(p, 2))),
        ),
        _worst(
            f"closed forms match the {n_grid}×{n_grid} Riemann oracle",
            ORACLE_TOL,
            oracle,
            lambda p: _oracle_error(p, n_grid),
        ),
    ]
