from typing import Any, Callable, NamedTuple, Optional, TypeVar

import numpy as np

from strauss.core._logger import logger
from strauss.core.closed_forms.bipodal import bipodal_entropy, bipodal_excess_entropy
from strauss.core.domain.errors import (
    BracketError,
    DomainError,
    NoTripodalPhaseError,
    NumericalError,
    ParameterError,
    StraussError,
)
from strauss.core.domain.graphon import FloatArray
from strauss.core.domain.params import NewtonOptions
from strauss.core.domain.phase import BranchLabel, DMode, PhaseBoundaryRow
from strauss.core.domain.sweep import SweepTable, format_number
from strauss.core.explorer.f_max import maximize_F_at
from strauss.core.explorer.tripodal import TripodalMax, TripodalObjective, best_tripodal
from strauss.core.optimizer.continuation import ContinuationOptions, continuation_sweep
from strauss.core.optimizer.roots import interpolate_sign_change, solve_scalar_root

# δ grid used to bracket the crossing, shrunk for small e
DELTA_STEP = 1e-4
MAX_ALTERNATIONS = 100
DELTA_TOL = 1e-12
# Halvings of the first δ before concluding that the tripodal graphon never wins
MAX_START_HALVINGS = 20

BOUNDARY_ANCHOR = 0.1
BOUNDARY_COLUMNS = ["e", "delta_m", "A", "B", "c", "D", "S_tri", "S_sb", "block_jump", "iterations"]
TRACE_COLUMNS = ["delta", "A", "B", "c", "D", "S_tri", "S_sb", "S_gap"]

State = TypeVar("State")


class BoundaryGuess(NamedTuple):
    """A previous boundary point: δ and the optimizer variables of the mode"""

    delta: float
    variables: list[float]


def exploration_step(e: float) -> float:
    return min(DELTA_STEP, min(e, 1 - e) / 100)


def alternate_to_crossing(
    refine: Callable[[float, State], tuple[State, float]],
    held_gap: Callable[[float, State], float],
    lo: tuple[float, State],
    hi: float,
    max_outer: int = MAX_ALTERNATIONS,
    tol: float = DELTA_TOL,
) -> tuple[float, State, int]:
    """Zero of a maximized entropy gap in δ, alternating two solves until δ settles.

    With the parameters held, the gap is solved for δ. At that δ the parameters are maximized
    again. 'lo' is a δ with a positive maximized gap and its parameters, 'hi' a δ where the
    maximized gap is not positive. The bracket shrinks with every re-maximized sign, and a held
    gap without a sign change in the bracket falls back to bisection.

    Returns δ, the parameters maximized there and the number of alternations."""
    delta, state = lo
    lo_delta, hi_delta = lo[0], hi
    for k in range(1, max_outer + 1):
        try:
            nxt = solve_scalar_root(lambda d, s=state: held_gap(d, s), (lo_delta, hi_delta), tol)
        except (BracketError, DomainError):
            nxt = 0.5 * (lo_delta + hi_delta)
        try:
            state, gap = refine(nxt, state)
        except DomainError as err:
            raise NumericalError(f"Re-maximization failed at δ={nxt}: {err}") from err
        if gap > 0:
            lo_delta = nxt
        else:
            hi_delta = nxt
        moved = abs(nxt - delta)
        delta = nxt
        logger.debug("Alternation %d: δ=%.17g gap=%.3g", k, delta, gap)
        if moved < tol or hi_delta - lo_delta < tol:
            return delta, state, k
    raise NumericalError(
        f"δ did not settle in {max_outer} alternations",
        lo=lo_delta,
        hi=hi_delta,
    )


class _BipodalRace:
    """The best tripodal graphon of one (e, mode, branch) against the symmetric bipodal one"""

    def __init__(self, e: float, d_mode: DMode, branch: BranchLabel, opts: Optional[NewtonOptions]):
        self.e = e
        self.d_mode = d_mode
        self.branch = branch
        self.opts = opts

    def cold(self, delta: float) -> TripodalMax:
        return best_tripodal(self.e, delta, self.d_mode, branch=self.branch, opts=self.opts)

    def from_variables(self, delta: float, variables: list[float]) -> tuple[TripodalMax, float]:
        refined = best_tripodal(self.e, delta, self.d_mode, seed=variables, branch=self.branch, opts=self.opts)
        return refined, refined.bipodal_gap

    def _objective(self, delta: float) -> TripodalObjective:
        return TripodalObjective(self.e, delta, self.d_mode, self.branch)

    def refine(self, delta: float, found: TripodalMax) -> tuple[TripodalMax, float]:
        try:
            return self.from_variables(delta, self._objective(delta).carried(found.point, found.delta))
        except DomainError:
            if self.d_mode != DMode.FREE_D:
                raise
        logger.info("Carried FREE_D seed left the family at δ=%s, restarting from D = 0", delta)
        refined = self.cold(delta)
        return refined, refined.bipodal_gap

    def held_gap(self, delta: float, found: TripodalMax) -> float:
        objective = self._objective(delta)
        return objective.excess(objective.carried(found.point, found.delta)) - bipodal_excess_entropy(self.e, delta)


def _cold_start(race: _BipodalRace, step: float) -> TripodalMax:
    e = race.e
    f_max = maximize_F_at(e, opts=race.opts)
    if not any(b.branch == race.branch and b.gap > 0 for b in f_max):
        raise NoTripodalPhaseError("The tripodal graphon never beats the bipodal one near the ER curve", e=e)

    delta = step
    for _ in range(MAX_START_HALVINGS):
        found = race.cold(delta)
        if found.bipodal_gap > 0:
            return found
        delta /= 2
    raise NoTripodalPhaseError("No δ with a tripodal advantage", e=e, smallest_delta=delta)


def _warm_start(
    race: _BipodalRace,
    guess: BoundaryGuess,
    step: float,
) -> Optional[tuple[TripodalMax, Optional[float]]]:
    # The guess itself when the tripodal graphon wins there (no upper end yet), otherwise a walk down
    # to the first δ where it wins. None when the guess is unusable
    try:
        found, gap = race.from_variables(guess.delta, guess.variables)
        if gap > 0:
            return found, None
        hi = guess.delta
        while hi - step > 0:
            found, gap = race.refine(hi - step, found)
            if gap > 0:
                return found, hi
            hi -= step
    except DomainError as err:
        logger.info("Boundary guess at e=%s is unusable: %s", race.e, err)
    return None


def _walk_up(race: _BipodalRace, lo: TripodalMax, step: float, cap: float) -> tuple[TripodalMax, float]:
    while True:
        nxt = lo.delta + step
        if nxt > cap:
            raise NoTripodalPhaseError("No crossing below δ_cap", e=race.e, delta_cap=cap)
        try:
            found, gap = race.refine(nxt, lo)
        except DomainError as err:
            raise NumericalError(f"Lost the tripodal branch at δ={nxt}: {err}", e=race.e) from err
        if gap <= 0:
            return lo, nxt
        lo = found


def _bracket(race: _BipodalRace, seed: Optional[BoundaryGuess], step: float, cap: float) -> tuple[TripodalMax, float]:
    warm = _warm_start(race, seed, step) if seed is not None else None
    if warm is None:
        return _walk_up(race, _cold_start(race, step), step, cap)
    lo, hi = warm
    return (lo, hi) if hi is not None else _walk_up(race, lo, step, cap)


def delta_max(
    e: float,
    d_mode: DMode = DMode.FREE_D,
    seed: Optional[BoundaryGuess] = None,
    branch: BranchLabel = BranchLabel.O_E,
    opts: Optional[NewtonOptions] = None,
) -> PhaseBoundaryRow:
    """The largest δ at which the best tripodal graphon still ties the symmetric bipodal one.

    The crossing is bracketed on a δ grid, from 'seed' when given, and then located by
    alternating a root solve in δ with a re-maximization of the tripodal parameters."""
    if not 0 < e < 1:
        raise DomainError("Edge density must lie in (0,1)", e=e)
    if e >= 0.5:
        raise NoTripodalPhaseError("The tripodal graphon never beats the bipodal one for e ≥ ½", e=e)
    race = _BipodalRace(e, d_mode, branch, opts)
    step = exploration_step(e)
    cap = min(e, 1 - e)

    lo, hi = _bracket(race, seed, step, cap)

    delta_m, found, iterations = alternate_to_crossing(race.refine, race.held_gap, (lo.delta, lo), hi)
    p = found.params
    row = PhaseBoundaryRow(
        e=e,
        delta_m=delta_m,
        A=p.A,
        B=p.B,
        c=p.c,
        D=p.D,
        S_tri=found.entropy,
        S_sb=bipodal_entropy(e, delta_m),
        d_mode=d_mode,
        branch=branch,
        iterations=iterations,
    )
    logger.info("δ_m(%s) = %.10g after %d alternations (%s)", e, delta_m, iterations, d_mode.value)
    return row


def _variables(row: PhaseBoundaryRow) -> list[float]:
    return TripodalObjective(row.e, row.delta_m, row.d_mode, row.branch).variables(row.A, row.B, row.c, row.D)


class _BoundaryProblem:
    kind = "boundary"
    parameter_name = "e"
    columns = BOUNDARY_COLUMNS

    def __init__(self, d_mode: DMode, branch: BranchLabel, opts: Optional[NewtonOptions]):
        self._d_mode = d_mode
        self._branch = branch
        self._opts = opts
        self._rows: dict[float, PhaseBoundaryRow] = {}

    def solve(self, parameter: float, seed: FloatArray) -> Optional[FloatArray]:
        guess = BoundaryGuess(float(seed[0]), seed[1:].tolist())
        try:
            row = delta_max(parameter, self._d_mode, guess, self._branch, self._opts)
        except StraussError as err:
            logger.info("No boundary point at e=%s: %s", parameter, err)
            return None
        self._rows[parameter] = row
        return np.array([row.delta_m, *_variables(row)])

    def row(self, parameter: float, solution: FloatArray) -> dict[str, float]:
        r = self._rows[parameter]
        return {
            "e": r.e,
            "delta_m": r.delta_m,
            "A": r.A,
            "B": r.B,
            "c": r.c,
            "D": r.D,
            "S_tri": r.S_tri,
            "S_sb": r.S_sb,
            "block_jump": r.block_jump(),
            "iterations": float(r.iterations or 0),
        }


def boundary_curve(
    e_range: tuple[float, float],
    step: float,
    d_mode: DMode = DMode.FREE_D,
    anchor: float = BOUNDARY_ANCHOR,
    branch: BranchLabel = BranchLabel.O_E,
    opts: Optional[NewtonOptions] = None,
    options: Optional[ContinuationOptions] = None,
) -> SweepTable:
    """δ_m(e) over e_range, continued outwards in both directions from the anchor.

    Each e starts from the boundary point of its neighbour. Rows are in increasing e."""
    e_min, e_max = sorted(e_range)
    if not step > 0:
        raise ParameterError("The e step must be positive", step=step)
    anchor = min(max(anchor, e_min), e_max)
    start = delta_max(anchor, d_mode, branch=branch, opts=opts)
    seed = np.array([start.delta_m, *_variables(start)])

    config: dict[str, Any] = {
        "e_min": e_min,
        "e_max": e_max,
        "step": step,
        "anchor": anchor,
        "d_mode": d_mode.value,
        "branch": branch.value,
    }
    table = SweepTable.create("boundary", BOUNDARY_COLUMNS, config)
    if e_min < anchor:
        down = continuation_sweep(_BoundaryProblem(d_mode, branch, opts), (anchor, e_min, -step), seed, options)
        table.rows.extend(reversed(down.rows))
        if "truncated_at" in down.metadata:
            table.metadata["truncated_below"] = down.metadata["truncated_at"]
    up = continuation_sweep(_BoundaryProblem(d_mode, branch, opts), (anchor, e_max, step), seed, options)
    table.rows.extend(up.rows[1:] if e_min < anchor else up.rows)
    if "truncated_at" in up.metadata:
        table.metadata["truncated_above"] = up.metadata["truncated_at"]
    return table


class _TraceProblem:
    kind = "trace"
    parameter_name = "delta"
    columns = TRACE_COLUMNS

    def __init__(self, e: float, d_mode: DMode, opts: Optional[NewtonOptions]):
        self._e = e
        self._d_mode = d_mode
        self._opts = opts
        self._found: dict[float, TripodalMax] = {}

    def solve(self, parameter: float, seed: FloatArray) -> Optional[FloatArray]:
        # Solutions carry their δ in front of the optimizer variables
        try:
            start = TripodalObjective(self._e, parameter, self._d_mode).carried(seed[1:].tolist(), float(seed[0]))
            found = best_tripodal(self._e, parameter, self._d_mode, seed=start, opts=self._opts)
        except StraussError as err:
            logger.info("Trace failed at δ=%s: %s", parameter, err)
            return None
        self._found[parameter] = found
        return np.array([parameter, *found.point])

    def row(self, parameter: float, solution: FloatArray) -> dict[str, float]:
        found = self._found[parameter]
        p = found.params
        return {
            "delta": parameter,
            "A": p.A,
            "B": p.B,
            "c": p.c,
            "D": p.D,
            "S_tri": found.entropy,
            "S_sb": bipodal_entropy(self._e, parameter),
            "S_gap": found.bipodal_gap,
        }


def trace_vs_delta(
    e: float,
    d_mode: DMode,
    delta_step: float,
    delta_stop: float,
    opts: Optional[NewtonOptions] = None,
    options: Optional[ContinuationOptions] = None,
) -> SweepTable:
    """The best tripodal parameters and entropies along δ at fixed e, from δ = delta_step.

    The metadata records 'crossing_delta', where S_tri − S_sb changes sign."""
    if not 0 < delta_step <= delta_stop:
        raise ParameterError("Need 0 < delta_step ≤ delta_stop", delta_step=delta_step, delta_stop=delta_stop)
    if delta_stop > min(e, 1 - e):
        raise ParameterError("delta_stop is beyond min(e, 1−e)", e=e, delta_stop=delta_stop)
    start = best_tripodal(e, delta_step, d_mode, opts=opts)
    table = continuation_sweep(
        _TraceProblem(e, d_mode, opts),
        (delta_step, delta_stop, delta_step),
        np.array([delta_step, *start.point]),
        options,
        {"e": e, "d_mode": d_mode.value},
    )
    crossing = interpolate_sign_change(table.column("delta").tolist(), table.column("S_gap").tolist())
    if crossing is not None:
        table.metadata["crossing_delta"] = format_number(crossing)
    return table


def boundary_seed(row: PhaseBoundaryRow) -> BoundaryGuess:
    return BoundaryGuess(row.delta_m, _variables(row))
