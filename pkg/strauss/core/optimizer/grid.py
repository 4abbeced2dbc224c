import functools
from collections.abc import Sequence
from typing import Union

import numpy as np
from scipy.ndimage import maximum_filter  # pyright: ignore [reportUnknownVariableType]

from strauss.core._common_types import GridObjective, Objective
from strauss.core.domain.errors import EmptyResultError, ParameterError
from strauss.core.domain.graphon import FloatArray
from strauss.core.domain.params import LocalMax
from strauss.core.optimizer.newton import evaluate
from strauss.core.utils._iter import ordered_map

MIN_RESOLUTION = 8
# Candidate values closer than this are ranked by their points instead
TIE_TOLERANCE = 1e-12

Box = Sequence[tuple[float, float]]


def _compare(a: LocalMax, b: LocalMax) -> int:
    if abs(a.value - b.value) > TIE_TOLERANCE:
        return -1 if a.value > b.value else 1
    if a.point == b.point:
        return 0
    return -1 if a.point < b.point else 1


def rank_candidates(candidates: Sequence[LocalMax]) -> list[LocalMax]:
    """Sort by value descending, near-ties broken by the lexicographically smallest point"""
    return sorted(candidates, key=functools.cmp_to_key(_compare))


def _evaluate_cells(
    objective: Union[Objective, GridObjective],
    axes: list[FloatArray],
    vectorized: bool,
) -> FloatArray:
    mesh = np.meshgrid(*axes, indexing="ij")
    if vectorized:
        values = np.asarray(objective(*mesh), dtype=np.float64)  # pyright: ignore [reportCallIssue]
        return np.broadcast_to(values, mesh[0].shape).copy()

    def cell(point: FloatArray) -> float:
        value = evaluate(objective, point)  # pyright: ignore [reportArgumentType]
        return np.nan if value is None else value

    points = np.stack([m.ravel() for m in mesh], axis=-1)
    return np.asarray(ordered_map(points, cell), dtype=np.float64).reshape(mesh[0].shape)


def grid_scan(
    objective: Union[Objective, GridObjective],
    box: Box,
    resolution: Union[int, Sequence[int]],
    vectorized: bool = False,
) -> list[LocalMax]:
    """Strict local maxima of the objective over a regular grid on 'box', best first.

    Neighbours are the full 3^d − 1 stencil. Infeasible cells (None, NaN) are skipped.
    With vectorized=True the objective receives the meshgrid arrays and returns an array."""
    dims = len(box)
    counts = [resolution] * dims if isinstance(resolution, int) else list(resolution)
    if len(counts) != dims or any(n < MIN_RESOLUTION for n in counts):
        raise ParameterError(f"Grid resolution must be at least {MIN_RESOLUTION} per dimension", resolution=counts)
    if any(not (np.isfinite(lo) and np.isfinite(hi) and lo < hi) for lo, hi in box):
        raise ParameterError("Grid box must be finite and well ordered", box=[list(b) for b in box])

    axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(box, counts)]
    values = _evaluate_cells(objective, axes, vectorized)
    values[~np.isfinite(values)] = -np.inf
    if np.all(values == -np.inf):
        raise EmptyResultError("Objective is invalid on every grid cell", box=[list(b) for b in box])

    footprint = np.ones((3,) * dims, dtype=bool)
    footprint[(1,) * dims] = False
    neighbours = maximum_filter(values, footprint=footprint, mode="constant", cval=-np.inf)
    peaks = np.argwhere((values > neighbours) & np.isfinite(values))
    if len(peaks) == 0:
        # A plateau holds the maximum, report its first cell
        peaks = np.argwhere(values == values.max())[:1]

    candidates = [
        LocalMax(
            point=[float(axes[d][idx[d]]) for d in range(dims)],
            value=float(values[tuple(idx)]),
            converged=False,
        )
        for idx in peaks
    ]
    return rank_candidates(candidates)
