from typing import Optional

import numpy as np
import pytest

from strauss.core.domain.errors import EmptyResultError, ParameterError
from strauss.core.domain.graphon import FloatArray
from strauss.core.domain.params import LocalMax
from strauss.core.optimizer.grid import grid_scan, rank_candidates
from strauss.core.optimizer.newton import newton_maximize


def _bowl(x: FloatArray) -> float:
    return -float(x[0] ** 2 + x[1] ** 2)


class TestGridScan:
    def test_single_peak(self):
        candidates = grid_scan(_bowl, [(-1, 1), (-1, 1)], 51)
        assert len(candidates) == 1
        assert candidates[0].point == pytest.approx([0, 0], abs=1e-15)

    def test_vectorized(self):
        candidates = grid_scan(lambda x, y: -(x**2 + y**2), [(-1, 1), (-1, 1)], 51, vectorized=True)
        assert [c.point for c in candidates] == [pytest.approx([0, 0], abs=1e-15)]

    def test_two_peaks_sorted(self):
        def objective(x: FloatArray) -> float:
            return float(np.exp(-((x[0] - 0.5) ** 2) * 20) + 0.5 * np.exp(-((x[0] + 0.5) ** 2) * 20))

        candidates = grid_scan(objective, [(-1, 1)], 41)
        assert [c.point[0] for c in candidates] == pytest.approx([0.5, -0.5])
        assert candidates[0].value > candidates[1].value

    def test_three_dimensions(self):
        candidates = grid_scan(lambda x: -float(np.sum((x - 0.25) ** 2)), [(0, 1)] * 3, 9)
        assert candidates[0].point == pytest.approx([0.25, 0.25, 0.25])

    def test_skips_invalid_cells(self):
        def objective(x: FloatArray) -> Optional[float]:
            return None if x[0] > 0 else float(x[0])

        # The best valid cell borders the invalid region
        candidates = grid_scan(objective, [(-1, 1)], 21)
        assert candidates[0].point[0] == pytest.approx(0, abs=1e-15)

    def test_all_invalid(self):
        with pytest.raises(EmptyResultError):
            grid_scan(lambda x: None, [(0, 1)], 10)

    @pytest.mark.parametrize(("box", "resolution"), [([(0, 1)], 7), ([(0, 1), (0, 1)], [10, 5]), ([(1, 0)], 10)])
    def test_invalid_parameters(self, box: list[tuple[float, float]], resolution: int):
        with pytest.raises(ParameterError):
            grid_scan(_bowl, box, resolution)

    def test_plateau(self):
        candidates = grid_scan(lambda x: 1.0, [(0, 1)], 10)
        assert len(candidates) == 1

    def test_refined_by_newton(self):
        def objective(x: FloatArray) -> float:
            return -float((x[0] - 0.123) ** 2 + (x[1] + 0.456) ** 2)

        seed = grid_scan(objective, [(-1, 1), (-1, 1)], 21)[0]
        res = newton_maximize(objective, seed.point)
        assert res.point == pytest.approx([0.123, -0.456], abs=1e-10)


def test_rank_candidates_breaks_ties_by_point():
    a = LocalMax(point=[0.2, 0.1], value=1.0, converged=True)
    b = LocalMax(point=[0.1, 0.9], value=1.0 + 1e-13, converged=True)
    c = LocalMax(point=[0.0, 0.0], value=0.5, converged=True)
    assert rank_candidates([a, c, b]) == [b, a, c]
