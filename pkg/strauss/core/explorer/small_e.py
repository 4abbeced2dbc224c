import math
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, Field  # pyright: ignore [reportUnknownVariableType]

from strauss.core._logger import logger
from strauss.core.closed_forms.bipodal import bipodal_excess_entropy
from strauss.core.domain.errors import (
    DomainError,
    EmptyResultError,
    NumericalError,
    OutOfScopeError,
    ParameterError,
    StraussError,
)
from strauss.core.domain.params import NewtonOptions, Sym21Params
from strauss.core.domain.phase import BranchLabel, DMode
from strauss.core.domain.sweep import SweepTable, format_number
from strauss.core.explorer.boundary import alternate_to_crossing
from strauss.core.explorer.f_max import BranchMax, maximize_F_at
from strauss.core.explorer.tripodal import TripodalMax, TripodalObjective, best_tripodal
from strauss.core.functionals.entropy import h_entropy
from strauss.core.optimizer.continuation import parameter_grid
from strauss.core.optimizer.roots import interpolate_sign_change
from strauss.core.utils._iter import ordered_map

# theta1_crossing is only attempted below this edge density
SMALL_E_LIMIT = 0.01
# δ grid for bracketing the Θ(1)/O(e) crossing, as a fraction of e
CROSSING_STEP_FRACTION = 1 / 200
# Entropies this close are ties
CLASSIFY_TIE_TOLERANCE = 1e-12
# A candidate that does not converge is retried once with this many times the iteration budget
RETRY_ITERATION_FACTOR = 4

SMALL_E_COLUMNS = [
    "e",
    "A_oe",
    "B_oe",
    "F_oe",
    "A_theta",
    "B_theta",
    "F_theta",
    "Hpp",
    "dominant_theta",
    "delta_cross",
]

_TripodalPair = tuple[TripodalMax, TripodalMax]


def converged_tripodal(
    e: float,
    delta: float,
    d_mode: DMode,
    branch: BranchLabel,
    seed: Optional[list[float]] = None,
    opts: Optional[NewtonOptions] = None,
) -> TripodalMax:
    """best_tripodal, retried once from where it stopped when it does not converge.

    Raises NumericalError when the retry does not converge either, so that no comparison
    is made with a value short of the maximum."""
    found = best_tripodal(e, delta, d_mode, seed=seed, branch=branch, opts=opts)
    if found.converged:
        return found
    base = opts or NewtonOptions()
    longer = base.model_copy(update={"max_iter": base.max_iter * RETRY_ITERATION_FACTOR})
    found = best_tripodal(e, delta, d_mode, seed=found.point, branch=branch, opts=longer)
    if not found.converged:
        raise NumericalError(
            f"The {branch.value} maximization did not converge",
            e=e,
            delta=delta,
            d_mode=d_mode.value,
            gradient_norm=found.gradient_norm,
        )
    return found


def _branches(e: float, opts: Optional[NewtonOptions]) -> dict[BranchLabel, BranchMax]:
    return {b.branch: b for b in maximize_F_at(e, opts=opts)}


class _BranchRace:
    """The Θ(1) branch against the O(e) branch at fixed e, both with D = 0"""

    def __init__(self, e: float, opts: Optional[NewtonOptions]):
        self.e = e
        self.opts = opts

    def _best(self, delta: float, branch: BranchLabel, seed: Optional[list[float]]) -> TripodalMax:
        return converged_tripodal(self.e, delta, DMode.ANSATZ, branch, seed, self.opts)

    def cold(self, delta: float) -> tuple[_TripodalPair, float]:
        pair = (self._best(delta, BranchLabel.THETA_1, None), self._best(delta, BranchLabel.O_E, None))
        return pair, pair[0].excess - pair[1].excess

    def refine(self, delta: float, pair: _TripodalPair) -> tuple[_TripodalPair, float]:
        theta, o_e = pair
        refined = (
            self._best(delta, BranchLabel.THETA_1, theta.point),
            self._best(delta, BranchLabel.O_E, o_e.point),
        )
        return refined, refined[0].excess - refined[1].excess

    def held_gap(self, delta: float, pair: _TripodalPair) -> float:
        theta, o_e = pair
        return (
            TripodalObjective(self.e, delta, DMode.ANSATZ, BranchLabel.THETA_1).excess(theta.point)
            - TripodalObjective(self.e, delta, DMode.ANSATZ, BranchLabel.O_E).excess(o_e.point)
        )


def theta1_crossing(e: float, opts: Optional[NewtonOptions] = None) -> Optional[float]:
    """The δ where the Θ(1) tripodal branch stops beating the O(e) one, at fixed e < 0.01.

    None when the O(e) branch already wins as δ → 0, or when the Θ(1) branch wins up to min(e, 1−e)."""
    if not 0 < e < SMALL_E_LIMIT:
        raise ParameterError(f"theta1_crossing needs 0 < e < {SMALL_E_LIMIT}", e=e)
    branches = _branches(e, opts)
    theta, o_e = branches.get(BranchLabel.THETA_1), branches.get(BranchLabel.O_E)
    if theta is None or o_e is None:
        raise NumericalError("Both F branches are needed to compare them", e=e, found=sorted(branches))
    if o_e.value >= theta.value:
        return None

    race = _BranchRace(e, opts)
    step = e * CROSSING_STEP_FRACTION
    cap = min(e, 1 - e)
    try:
        lo, gap = race.cold(step)
        if gap <= 0:
            return None
        while True:
            nxt = lo[0].delta + step
            if nxt > cap:
                logger.info("Θ(1) branch wins up to δ_cap at e=%s", e)
                return None
            pair, gap = race.refine(nxt, lo)
            if gap <= 0:
                break
            lo = pair
    except DomainError as err:
        raise NumericalError(f"Lost track of a branch at e={e}: {err}", e=e) from err

    delta, _, iterations = alternate_to_crossing(race.refine, race.held_gap, (lo[0].delta, lo), nxt)
    logger.info("Θ(1)/O(e) crossing at e=%s: δ=%.10g after %d alternations", e, delta, iterations)
    return delta


class ClassifiedPoint(BaseModel):
    """The winning candidate at (e, t) among the symmetric bipodal graphon and the two tripodal branches"""

    e: float
    t: float
    delta: float
    label: BranchLabel
    entropy: float
    params: Optional[Sym21Params] = Field(default=None, description="None for the bipodal winner")
    tie: bool = Field(default=False, description="Whether another candidate matched the winning entropy")
    candidates: dict[BranchLabel, float] = Field(default_factory=dict, description="Entropy of every candidate")


def classify_point(
    e: float,
    t: float,
    d_mode: DMode = DMode.ANSATZ,
    opts: Optional[NewtonOptions] = None,
) -> ClassifiedPoint:
    """The best of the symmetric bipodal graphon and the tripodal branches at edge density e and
    triangle density t ≤ e³. Ties go to BIPODAL, then O_E."""
    if not 0 < e < 1:
        raise DomainError("Edge density must lie in (0,1)", e=e)
    if t > e**3:
        raise OutOfScopeError("Only triangle densities at or below e³ are classified", e=e, t=t)
    if not t > 0:
        raise DomainError("Triangle density must be positive", t=t)
    delta = float(np.cbrt(e**3 - t))
    if delta > min(e, 1 - e):
        raise DomainError("δ is beyond min(e, 1−e)", e=e, delta=delta)

    h = h_entropy(e)
    excess: dict[BranchLabel, float] = {BranchLabel.BIPODAL: bipodal_excess_entropy(e, delta)}
    params: dict[BranchLabel, Sym21Params] = {}
    if delta > 0 and e < 0.5:
        for branch, mode in ((BranchLabel.O_E, d_mode), (BranchLabel.THETA_1, DMode.ANSATZ)):
            try:
                found = converged_tripodal(e, delta, mode, branch, opts=opts)
            except (DomainError, EmptyResultError) as err:
                logger.info("No %s candidate at e=%s δ=%s: %s", branch.value, e, delta, err)
                continue
            excess[branch] = found.excess
            params[branch] = found.params

    best = max(excess.values())
    # dicts keep insertion order, BIPODAL then O_E then THETA_1
    winners = [label for label, value in excess.items() if value >= best - CLASSIFY_TIE_TOLERANCE]
    label = winners[0]
    return ClassifiedPoint(
        e=e,
        t=t,
        delta=delta,
        label=label,
        entropy=h + excess[label],
        params=params.get(label),
        tie=len(winners) > 1,
        candidates={k: h + v for k, v in excess.items()},
    )


def _small_e_row(e: float, opts: Optional[NewtonOptions]) -> dict[str, float]:
    branches = _branches(e, opts)
    o_e, theta = branches.get(BranchLabel.O_E), branches.get(BranchLabel.THETA_1)
    crossing: Optional[float] = None
    if e < SMALL_E_LIMIT and theta is not None:
        try:
            crossing = theta1_crossing(e, opts)
        except StraussError as err:
            logger.warning("No Θ(1)/O(e) crossing at e=%s: %s", e, err)
    return {
        "e": e,
        "A_oe": o_e.A if o_e else math.nan,
        "B_oe": o_e.B if o_e else math.nan,
        "F_oe": o_e.value if o_e else math.nan,
        "A_theta": theta.A if theta else math.nan,
        "B_theta": theta.B if theta else math.nan,
        "F_theta": theta.value if theta else math.nan,
        "Hpp": h_entropy(e, 2),
        "dominant_theta": float(theta is not None and (o_e is None or theta.value > o_e.value)),
        "delta_cross": math.nan if crossing is None else crossing,
    }


def small_e_table(
    e_values: tuple[float, float, float],
    opts: Optional[NewtonOptions] = None,
    workers: Optional[int] = None,
) -> SweepTable:
    """Both F branches, the dominant one and the Θ(1)/O(e) crossing δ for each e of (start, stop, step).

    Points are independent and may be computed concurrently. The metadata records
    'dominance_crossing', the e where the O(e) branch takes over from the Θ(1) one."""
    start, stop, step = e_values
    config: dict[str, Any] = {"start": start, "stop": stop, "step": step}
    table = SweepTable.create("small_e", SMALL_E_COLUMNS, config)
    for row in ordered_map(parameter_grid(start, stop, step), lambda e: _small_e_row(e, opts), workers):
        table.append(**row)

    advantage = (table.column("F_theta") - table.column("F_oe")).tolist()
    crossing = interpolate_sign_change(table.column("e").tolist(), advantage)
    if crossing is not None:
        table.metadata["dominance_crossing"] = format_number(crossing)
    return table
