import math

import numpy as np
import pytest

from strauss.core.domain.errors import DataError, DomainError
from strauss.core.domain.phase import BranchLabel
from strauss.core.domain.sweep import SweepTable
from strauss.core.explorer.f_max import (
    E0,
    FM_COLUMNS,
    branch_of,
    fm_curve,
    maximize_F_at,
    refine_branch,
    scaling_fit,
)
from strauss.core.functionals.entropy import h_entropy


def test_e0_is_exact():
    assert E0 == (3 - math.sqrt(3)) / 6
    assert E0 == pytest.approx(0.211325, abs=1e-6)


@pytest.mark.parametrize(
    ("e", "A", "expected"),
    [(0.01, 0.025, BranchLabel.O_E), (0.01, 0.1, BranchLabel.THETA_1), (0.1, 0.499, BranchLabel.O_E)],
)
def test_branch_of(e: float, A: float, expected: BranchLabel):
    assert branch_of(e, A) == expected


class TestMaximizeFAt:
    def test_tripodal_advantage_below_e0(self):
        results = maximize_F_at(0.15)
        assert len(results) == 1
        assert results[0].branch == BranchLabel.O_E
        assert results[0].converged
        assert results[0].value > h_entropy(0.15, 2)

    def test_no_advantage_above_e0(self):
        assert maximize_F_at(0.25)[0].value <= h_entropy(0.25, 2) + 1e-12

    def test_theta1_dominates_at_tiny_e(self):
        results = maximize_F_at(0.001)
        assert [r.branch for r in results] == [BranchLabel.THETA_1, BranchLabel.O_E]
        assert results[0].value > results[1].value

    def test_small_e_shape(self):
        e = 0.005
        o_e = next(r for r in maximize_F_at(e) if r.branch == BranchLabel.O_E)
        assert 2.0 <= o_e.A / e <= 3.0
        assert 1.0 <= o_e.B / e <= 2.0
        assert -1.0 <= o_e.value * e <= -0.9

    def test_theta1_stays_on_the_face(self):
        e = 0.001
        theta = next(r for r in maximize_F_at(e) if r.branch == BranchLabel.THETA_1)
        assert theta.B == pytest.approx(theta.A - e, abs=1e-15)
        assert theta.A <= 0.5

    def test_explicit_seed_matches_default(self):
        default = maximize_F_at(0.1)[0]
        seeded = maximize_F_at(0.1, seeds=[[0.24, 0.15]])[0]
        assert seeded.point == pytest.approx(default.point, abs=1e-6)
        assert seeded.value == pytest.approx(default.value, abs=1e-10)

    def test_infeasible_seeds(self):
        with pytest.raises(DomainError):
            maximize_F_at(0.1, seeds=[[0.1, 0.2]])

    @pytest.mark.parametrize("e", [0.0, 0.5, 0.7])
    def test_out_of_range(self, e: float):
        with pytest.raises(DomainError):
            maximize_F_at(e)

    def test_collapse_reports_the_limit(self):
        result = refine_branch(0.3, BranchLabel.O_E, [1e-4, 0.0])
        assert result.collapsed
        assert result.value == h_entropy(0.3, 2)
        assert result.gap == 0


class TestFmCurve:
    def test_single_point(self):
        table = fm_curve((0.1, 0.1), 0.001)
        assert table.columns == FM_COLUMNS
        assert len(table) == 1
        best = maximize_F_at(0.1)[0]
        row = table.row_dict(0)
        assert row["F_m"] == pytest.approx(best.value, abs=1e-10)
        assert row["A"] == pytest.approx(best.A, abs=1e-6)
        assert row["gap"] == pytest.approx(row["F_m"] - row["Hpp"])

    def test_gap_decays_towards_e0(self):
        table = fm_curve((0.15, 0.19), 0.01)
        gaps = table.column("gap")
        assert len(gaps) == 5
        assert np.all(gaps > 0)
        assert np.all(np.diff(gaps) < 0)
        assert table.metadata["kind"] == "fm_curve"
        assert "gap_crossing" not in table.metadata


def _power_law_table(distances: np.ndarray) -> SweepTable:
    table = SweepTable.create("fm_curve", FM_COLUMNS)
    for d in distances:
        e = E0 - d
        hpp = h_entropy(e, 2)
        table.append(e=e, A=2 * d, B=3 * d**2, F_m=hpp + 5 * d**3, Hpp=hpp, gap=5 * d**3)
    return table


class TestScalingFit:
    def test_exact_power_laws(self):
        table = _power_law_table(np.geomspace(0.005, 0.05, 12))
        slopes = scaling_fit(table, (E0 - 0.05, E0 - 0.005))
        assert slopes.slope_A == pytest.approx(1, abs=1e-10)
        assert slopes.slope_B == pytest.approx(2, abs=1e-10)
        assert slopes.slope_gap == pytest.approx(3, abs=1e-10)

    def test_too_few_rows(self):
        table = _power_law_table(np.geomspace(0.005, 0.05, 5))
        with pytest.raises(DataError):
            scaling_fit(table, (E0 - 0.05, E0 - 0.005))

    def test_window_straddling_e0(self):
        table = _power_law_table(np.linspace(-0.01, 0.05, 13))
        with pytest.raises(DataError):
            scaling_fit(table, (E0 - 0.05, E0 + 0.01))
