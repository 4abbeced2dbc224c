from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, Field  # pyright: ignore [reportUnknownVariableType]

from strauss.core._common_types import ContinuationProblem
from strauss.core._logger import logger
from strauss.core.domain.errors import DomainError, ParameterError
from strauss.core.domain.graphon import FloatArray
from strauss.core.domain.sweep import SweepTable, format_number


class ContinuationOptions(BaseModel):
    max_halvings: int = Field(default=8, description="Step halvings allowed per target before a gap row")
    max_gap_rows: int = Field(default=3, description="Consecutive gap rows before the sweep is truncated")


def parameter_grid(start: float, stop: float, step: float) -> list[float]:
    """start, start + step, … up to stop inclusive. A negative step sweeps downwards"""
    if step == 0 or not np.isfinite(step):
        raise ParameterError("Sweep step must be a nonzero number", step=step)
    span = stop - start
    if span * step < 0:
        raise ParameterError("Sweep step points away from stop", start=start, stop=stop, step=step)
    count = int(np.floor(span / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _advance(
    problem: ContinuationProblem,
    parameter: float,
    solution: FloatArray,
    target: float,
    max_halvings: int,
) -> Optional[FloatArray]:
    step = target - parameter
    halvings = 0
    while parameter != target:
        trial = target if abs(target - parameter) <= abs(step) * (1 + 1e-9) else parameter + step
        solved = problem.solve(trial, solution)
        if solved is None:
            halvings += 1
            if halvings > max_halvings:
                return None
            step /= 2
            logger.warning("Continuation step halved to %.3g towards %s = %s", step, problem.parameter_name, target)
            continue
        parameter, solution = trial, solved
    return solution


def continuation_sweep(
    problem: ContinuationProblem,
    param_range: tuple[float, float, float],
    seed: FloatArray,
    options: Optional[ContinuationOptions] = None,
    config: Optional[dict[str, Any]] = None,
) -> SweepTable:
    """Solve the problem at each parameter of the range, seeding every solve with the previous solution.

    A target that still fails after max_halvings step halvings is recorded as a gap row and the
    next target starts again from the last solution. After max_gap_rows consecutive gaps the
    sweep stops and the table metadata records where."""
    options = options or ContinuationOptions()
    start, stop, step = param_range
    targets = parameter_grid(start, stop, step)
    table = SweepTable.create(
        problem.kind,
        problem.columns,
        {"start": start, "stop": stop, "step": step, **options.model_dump(), **(config or {})},
    )

    solution = problem.solve(targets[0], np.asarray(seed, dtype=np.float64))
    if solution is None:
        raise DomainError("The seed does not solve the problem at the start of the sweep", start=start)
    table.append(**problem.row(targets[0], solution))
    parameter = targets[0]

    gaps = 0
    for target in targets[1:]:
        advanced = _advance(problem, parameter, solution, target, options.max_halvings)
        if advanced is None:
            gaps += 1
            table.append_gap(**{problem.parameter_name: target})
            logger.warning("Continuation failed at %s = %s", problem.parameter_name, target)
            if gaps >= options.max_gap_rows:
                table.metadata["truncated_at"] = format_number(target)
                logger.warning("Sweep truncated after %d consecutive failures at %s", gaps, target)
                break
            continue
        gaps = 0
        parameter, solution = target, advanced
        table.append(**problem.row(target, solution))
        logger.info("%s = %s solved", problem.parameter_name, format_number(target))
    return table
