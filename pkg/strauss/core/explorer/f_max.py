import math
from collections.abc import Sequence
from typing import Any, NamedTuple, Optional

import numpy as np
from scipy.stats import linregress  # pyright: ignore [reportUnknownVariableType]

from strauss.core._common_types import Objective
from strauss.core._logger import logger
from strauss.core.closed_forms.tripodal import F, F_surface
from strauss.core.domain.errors import DataError, DomainError
from strauss.core.domain.graphon import FloatArray
from strauss.core.domain.params import LocalMax, NewtonOptions
from strauss.core.domain.phase import BranchLabel
from strauss.core.domain.sweep import SweepTable, format_number
from strauss.core.functionals.entropy import h_entropy
from strauss.core.optimizer.continuation import ContinuationOptions, continuation_sweep
from strauss.core.optimizer.grid import grid_scan
from strauss.core.optimizer.newton import newton_maximize
from strauss.core.optimizer.roots import interpolate_sign_change

# Above this edge density the tripodal ansatz never beats the symmetric bipodal graphon near the ER curve
E0 = (3 - math.sqrt(3)) / 6

# The O(e) branch is searched on (0, min(O_E_RANGE·e, O_E_RANGE_CAP))² and labelled by A < O_E_RANGE·e
O_E_RANGE = 10.0
O_E_RANGE_CAP = 0.45
F_GRID_RESOLUTION = 200
THETA1_SEED_MARGIN = 1e-3
# A maximizer with A below COLLAPSE_RATIO·e has run into the constant graphon, where F → H″(e)
COLLAPSE_RATIO = 2e-3

FM_COLUMNS = ["e", "A", "B", "F_m", "Hpp", "gap"]


class BranchMax(LocalMax):
    """A local maximum of F(A, B) at fixed e. 'point' is (A, B) and 'value' is F there"""

    e: float
    branch: BranchLabel
    collapsed: bool = False

    @property
    def A(self) -> float:
        return self.point[0]

    @property
    def B(self) -> float:
        return self.point[1]

    @property
    def gap(self) -> float:
        """F − H″(e), the second-order entropy advantage over the symmetric bipodal graphon"""
        return self.value - h_entropy(self.e, 2)


def branch_of(e: float, A: float) -> BranchLabel:
    return BranchLabel.O_E if A < O_E_RANGE * e else BranchLabel.THETA_1


def o_e_box(e: float) -> tuple[float, float]:
    return 0.0, min(O_E_RANGE * e, O_E_RANGE_CAP)


def theta1_seed(e: float) -> list[float]:
    A = 0.5 - THETA1_SEED_MARGIN
    return [A, A - e]


def _free_objective(e: float) -> Objective:
    def objective(x: FloatArray) -> Optional[float]:
        A, B = float(x[0]), float(x[1])
        if not A > B:
            return None
        return F(e, A, B)

    return objective


def _face_objective(e: float) -> Objective:
    # F along e − A + B = 0, where the small-pode diagonal block is 0
    def objective(x: FloatArray) -> Optional[float]:
        A = float(x[0])
        return F(e, A, A - e)

    return objective


def _check_e(e: float) -> None:
    if not 0 < e < 0.5:
        raise DomainError("F is maximized for e in (0, ½)", e=e)


def refine_branch(
    e: float,
    branch: BranchLabel,
    seed: Sequence[float],
    opts: Optional[NewtonOptions] = None,
) -> BranchMax:
    """Newton refinement of an F maximum from 'seed' = (A, B).

    THETA_1 seeds are refined along the face e − A + B = 0 from their A."""
    _check_e(e)
    if branch == BranchLabel.THETA_1:
        result = newton_maximize(_face_objective(e), [seed[0]], opts)
        A = result.point[0]
        B = A - e
    else:
        result = newton_maximize(_free_objective(e), list(seed[:2]), opts)
        A, B = result.point

    collapsed = A < COLLAPSE_RATIO * e
    if collapsed:
        logger.info("F maximizer at e=%s collapsed to A=%.3g, using the limit H″(e)", e, A)
    return BranchMax(
        point=[A, B],
        value=h_entropy(e, 2) if collapsed else result.value,
        converged=result.converged or collapsed,
        iterations=result.iterations,
        gradient_norm=result.gradient_norm,
        e=e,
        branch=branch_of(e, A),
        collapsed=collapsed,
    )


def default_seeds(e: float) -> list[list[float]]:
    """The best O(e) grid cell and the Θ(1) seed next to (½, ½ − e)"""
    _check_e(e)
    lo, hi = o_e_box(e)
    grid = grid_scan(
        lambda A, B: F_surface(e, A, B),
        [(lo, hi), (lo, hi)],
        F_GRID_RESOLUTION,
        vectorized=True,
    )
    return [grid[0].point, theta1_seed(e)]


def maximize_F_at(
    e: float,
    seeds: Optional[Sequence[Sequence[float]]] = None,
    opts: Optional[NewtonOptions] = None,
) -> list[BranchMax]:
    """Local maxima of F(A, B) at fixed e, the best one per branch, best first.

    Seeds are (A, B) points; without them the O(e) branch is seeded by a grid scan and the
    Θ(1) branch next to (½, ½ − e). F_m(e) is the value of the first result."""
    _check_e(e)
    seeds = default_seeds(e) if seeds is None else seeds

    best: dict[BranchLabel, BranchMax] = {}
    for seed in seeds:
        try:
            found = refine_branch(e, branch_of(e, seed[0]), seed, opts)
        except DomainError as err:
            logger.warning("F seed %s at e=%s is infeasible: %s", list(seed), e, err)
            continue
        current = best.get(found.branch)
        if current is None or found.value > current.value:
            best[found.branch] = found

    if not best:
        raise DomainError("F has no feasible point among the seeds", e=e)
    return sorted(best.values(), key=lambda b: -b.value)


class _FmProblem:
    kind = "fm_curve"
    parameter_name = "e"
    columns = FM_COLUMNS

    def __init__(self, branch: BranchLabel, opts: Optional[NewtonOptions]):
        self._branch = branch
        self._opts = opts

    def solve(self, parameter: float, seed: FloatArray) -> Optional[FloatArray]:
        try:
            if seed[0] < COLLAPSE_RATIO * parameter:
                # Nothing left to track, start the branch again from scratch
                found = maximize_F_at(parameter, opts=self._opts)[0]
            else:
                found = refine_branch(parameter, self._branch, seed, self._opts)
        except DomainError as err:
            logger.debug("F maximization failed at e=%s: %s", parameter, err)
            return None
        return np.array([found.A, found.B, found.value])

    def row(self, parameter: float, solution: FloatArray) -> dict[str, float]:
        A, B, F_m = solution.tolist()
        hpp = h_entropy(parameter, 2)
        return {"e": parameter, "A": A, "B": B, "F_m": F_m, "Hpp": hpp, "gap": F_m - hpp}


def fm_curve(
    e_range: tuple[float, float],
    step: float,
    opts: Optional[NewtonOptions] = None,
    options: Optional[ContinuationOptions] = None,
) -> SweepTable:
    """F_m(e), its maximizer and F_m − H″(e) along e, by continuation of the branch dominant at the first e.

    The metadata records 'gap_crossing', where F_m − H″(e) stops being positive."""
    e_start, e_stop = e_range
    for e in e_range:
        _check_e(e)
    start = maximize_F_at(e_start, opts=opts)[0]
    problem = _FmProblem(start.branch, opts)
    config: dict[str, Any] = {"branch": start.branch.value}
    table = continuation_sweep(
        problem,
        (e_start, e_stop, step if e_stop >= e_start else -abs(step)),
        np.array([start.A, start.B, start.value]),
        options,
        config,
    )
    crossing = interpolate_sign_change(table.column("e").tolist(), table.column("gap").tolist())
    if crossing is not None:
        table.metadata["gap_crossing"] = format_number(crossing)
    return table


class ScalingSlopes(NamedTuple):
    slope_A: float
    slope_B: float
    slope_gap: float


SCALING_MIN_ROWS = 10


def scaling_fit(table: SweepTable, window: tuple[float, float]) -> ScalingSlopes:
    """Least-squares slopes of ln A, ln B and ln(F_m − H″) against ln(e₀ − e) over the rows with e in window"""
    e_lo, e_hi = sorted(window)
    complete = table.complete_rows()
    e = complete.column("e")
    mask = (e >= e_lo) & (e <= e_hi)
    if mask.sum() < SCALING_MIN_ROWS:
        raise DataError(
            f"Scaling fit needs at least {SCALING_MIN_ROWS} rows in the window",
            window=[e_lo, e_hi],
            rows=int(mask.sum()),
        )

    distance = E0 - e[mask]
    series = {name: complete.column(name)[mask] for name in ("A", "B", "gap")}
    for name, values in {"e₀ − e": distance, **series}.items():
        if np.any(values <= 0):
            raise DataError(f"Non-positive {name} inside the scaling window", window=[e_lo, e_hi])

    x = np.log(distance)
    slopes = [float(linregress(x, np.log(values)).slope) for values in series.values()]  # pyright: ignore
    return ScalingSlopes(*slopes)
