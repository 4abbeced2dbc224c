from collections.abc import Sequence
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar  # pyright: ignore [reportUnknownVariableType]

from strauss.core._logger import logger
from strauss.core.closed_forms.bipodal import bipodal_excess_entropy
from strauss.core.closed_forms.sym21 import sym21_excess_entropy_unchecked
from strauss.core.closed_forms.tripodal import c_from_delta
from strauss.core.domain.errors import DomainError, ParameterError
from strauss.core.domain.graphon import FloatArray, StepGraphon
from strauss.core.domain.params import LocalMax, NewtonOptions, Sym21Params
from strauss.core.domain.phase import BranchLabel, DMode
from strauss.core.explorer.f_max import maximize_F_at
from strauss.core.functionals.entropy import h_entropy
from strauss.core.optimizer.newton import newton_maximize
from strauss.core.optimizer.roots import solve_scalar_root

# Seeds for larger δ are walked up from SEED_DELTA by factors of SEED_GROWTH
SEED_DELTA = 1e-4
SEED_GROWTH = 1.25
# c on the Θ(1) face is solved to this absolute accuracy
FACE_C_TOL = 1e-16


class TripodalObjective:
    """Entropy of the (2,1)-symmetric tripodal family at fixed (e, δ) as a function of the optimizer variables.

    ANSATZ: x = (A, B) with D = 0 and c from the triangle constraint.
    FREE_D: x = (B, c, D) with A from the triangle constraint.
    THETA_1 (ANSATZ only): x = (A,) on the face where the small-pode diagonal block is 0.

    Calls return 2(S − H(e))/δ², which tends to F(A, B) as δ → 0, so tolerances do not depend on δ."""

    def __init__(
        self,
        e: float,
        delta: float,
        d_mode: DMode = DMode.ANSATZ,
        branch: BranchLabel = BranchLabel.O_E,
    ):
        if not 0 < e < 1:
            raise DomainError("Edge density must lie in (0,1)", e=e)
        if not delta > 0:
            raise DomainError("δ must be positive", delta=delta)
        if branch == BranchLabel.BIPODAL:
            raise ParameterError("The bipodal branch has no tripodal parameters")
        if branch == BranchLabel.THETA_1 and d_mode != DMode.ANSATZ:
            raise ParameterError("The Θ(1) branch is only followed with D = 0", d_mode=d_mode.value)
        self.e = e
        self.delta = delta
        self.d_mode = d_mode
        self.branch = branch

    def _face_c(self, A: float) -> float:
        """The smaller root c of c³(A³ − B³) = δ³ with B = (A − e)/(1 − c).

        The left side vanishes at c = 0 and c = e/A and has a single peak in between. At a fixed A the
        face only reaches δ up to that peak, beyond it there is no graphon on the face."""
        e, delta = self.e, self.delta
        if not e < A < 1:
            raise DomainError("The face needs e < A < 1", A=A, e=e)

        def shortfall(c: float) -> float:
            # A − B = (e − Ac)/(1 − c) exactly, which avoids cancelling A³ against B³
            B = (A - e) / (1 - c)
            return c**3 * (e - A * c) / (1 - c) * (A * A + A * B + B * B) - delta**3

        top = e / A
        peak = minimize_scalar(
            lambda c: -shortfall(c),
            bounds=(0.0, top),
            method="bounded",
            options={"xatol": 1e-9 * top},
        )
        c_peak = float(peak.x)  # pyright: ignore [reportAttributeAccessIssue]
        if not shortfall(c_peak) > 0:
            raise DomainError("No graphon on the face reaches this δ at this A", A=A, delta=delta, e=e)
        return solve_scalar_root(shortfall, (0.0, c_peak), FACE_C_TOL)

    def carried(self, x: Sequence[float], delta: float) -> list[float]:
        """Variables found at another δ, moved to this objective's δ as a warm start.

        In FREE_D the small-pode size grows like δ and the degree split like δ², so they are
        rescaled and the triangle constraint gives back about the same A."""
        if self.d_mode != DMode.FREE_D:
            return [float(v) for v in x]
        ratio = self.delta / delta
        B, c, D = (float(v) for v in x)
        return [B, c * ratio, D * ratio**2]

    def params(self, x: Sequence[float]) -> tuple[float, float, float, float]:
        """(A, B, c, D) for the optimizer variables. Raises DomainError outside the family"""
        e, delta = self.e, self.delta
        if self.branch == BranchLabel.THETA_1:
            A = float(x[0])
            c = self._face_c(A)
            B, D = (A - e) / (1 - c), 0.0
        elif self.d_mode == DMode.ANSATZ:
            A, B = float(x[0]), float(x[1])
            c, D = c_from_delta(delta, A, B), 0.0
        else:
            B, c, D = float(x[0]), float(x[1]), float(x[2])
            surplus = delta**3 + 0.75 * e * c * (1 - c) * D**2 + 0.75 * c**2 * (1 - c) * B * D**2
            A = float(np.cbrt(B**3 + surplus / c**3))
        if not 0 < c < 1:
            raise DomainError("Pode size must lie in (0,1)", c=c)
        return A, B, c, D

    def variables(self, A: float, B: float, c: float, D: float = 0.0) -> list[float]:
        if self.branch == BranchLabel.THETA_1:
            return [A]
        if self.d_mode == DMode.ANSATZ:
            return [A, B]
        return [B, c, D]

    def excess(self, x: Sequence[float]) -> float:
        """S − H(e) at the optimizer variables"""
        return sym21_excess_entropy_unchecked(self.e, *self.params(x))

    def __call__(self, x: FloatArray, /) -> Optional[float]:
        return 2 * self.excess(x) / self.delta**2


class TripodalMax(LocalMax):
    """The best (2,1)-tripodal graphon found at fixed (e, δ).

    'point' holds the optimizer variables of the mode and 'value' the normalized objective."""

    e: float
    delta: float
    d_mode: DMode
    branch: BranchLabel = BranchLabel.O_E
    params: Sym21Params
    excess: float

    @property
    def entropy(self) -> float:
        return h_entropy(self.e) + self.excess

    @property
    def bipodal_gap(self) -> float:
        """S_tri − S_sb, computed without the common H(e)"""
        return self.excess - bipodal_excess_entropy(self.e, self.delta)

    def graphon(self) -> StepGraphon:
        return self.params.graphon()


def _package(objective: TripodalObjective, result: LocalMax) -> TripodalMax:
    A, B, c, D = objective.params(result.point)
    return TripodalMax(
        **result.model_dump(),
        e=objective.e,
        delta=objective.delta,
        d_mode=objective.d_mode,
        branch=objective.branch,
        params=Sym21Params(e=objective.e, A=A, B=B, c=c, D=D),
        excess=objective.excess(result.point),
    )


def _optimize(objective: TripodalObjective, seed: Sequence[float], opts: Optional[NewtonOptions]) -> TripodalMax:
    found = _package(objective, newton_maximize(objective, seed, opts))
    if not found.converged:
        logger.warning(
            "Tripodal maximization at e=%s δ=%s (%s, %s) did not converge",
            objective.e,
            objective.delta,
            objective.d_mode.value,
            objective.branch.value,
        )
    return found


def _f_seed(e: float, branch: BranchLabel, opts: Optional[NewtonOptions]) -> tuple[float, float]:
    for found in maximize_F_at(e, opts=opts):
        if found.branch == branch:
            return found.A, found.B
    raise DomainError(f"F has no {branch.value} branch at this edge density", e=e)


def _ramp(delta: float) -> list[float]:
    # SEED_DELTA, SEED_GROWTH·SEED_DELTA, … up to delta
    steps = [min(delta, SEED_DELTA)]
    while steps[-1] < delta:
        steps.append(min(delta, SEED_GROWTH * steps[-1]))
    return steps


def best_tripodal(
    e: float,
    delta: float,
    d_mode: DMode = DMode.ANSATZ,
    seed: Optional[Sequence[float]] = None,
    branch: BranchLabel = BranchLabel.O_E,
    opts: Optional[NewtonOptions] = None,
) -> TripodalMax:
    """The entropy-maximizing (2,1)-tripodal graphon with triangle density e³ − δ³.

    'seed' is in the variables of the mode, see TripodalObjective. Without a seed the branch's
    F maximizer is used at small δ and followed up to 'delta' in geometric steps. FREE_D starts
    from the D = 0 solution at each step."""
    objective = TripodalObjective(e, delta, d_mode, branch)
    if seed is not None:
        return _optimize(objective, seed, opts)

    A, B = _f_seed(e, branch, opts)
    for step in _ramp(delta):
        ansatz = TripodalObjective(e, step, DMode.ANSATZ, branch)
        found = _optimize(ansatz, ansatz.variables(A, B, 0.0), opts)
        if d_mode == DMode.FREE_D:
            free = TripodalObjective(e, step, DMode.FREE_D, branch)
            p = found.params
            found = _optimize(free, free.variables(p.A, p.B, p.c, 0.0), opts)
        A, B = found.params.A, found.params.B
    return found  # pyright: ignore [reportPossiblyUnboundVariable]
