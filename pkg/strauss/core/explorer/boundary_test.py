import pytest

from strauss.core.domain.errors import DomainError, NoTripodalPhaseError, NumericalError, ParameterError
from strauss.core.domain.phase import DMode
from strauss.core.explorer.boundary import (
    TRACE_COLUMNS,
    alternate_to_crossing,
    boundary_seed,
    delta_max,
    exploration_step,
    trace_vs_delta,
)


# The gap 1 − δ − (x − δ)² is maximized at x = δ, where it vanishes at δ = 1
def _refine(delta: float, x: float) -> tuple[float, float]:
    return delta, 1 - delta


def _held_gap(delta: float, x: float) -> float:
    return 1 - delta - (x - delta) ** 2


def _no_held_gap(delta: float, x: float) -> float:
    raise DomainError("infeasible")


class TestAlternateToCrossing:
    def test_converges(self):
        delta, state, iterations = alternate_to_crossing(_refine, _held_gap, (0.5, 0.5), 1.5)
        assert delta == pytest.approx(1, abs=1e-12)
        assert state == delta
        assert iterations <= 8

    def test_falls_back_to_bisection(self):
        delta, _, iterations = alternate_to_crossing(_refine, _no_held_gap, (0.5, 0.5), 1.5)
        assert delta == pytest.approx(1, abs=1e-11)
        assert iterations > 6

    def test_gives_up(self):
        with pytest.raises(NumericalError):
            alternate_to_crossing(_refine, _no_held_gap, (0.5, 0.5), 1.5, max_outer=3)


@pytest.mark.parametrize(("e", "expected"), [(0.1, 1e-4), (0.005, 5e-5), (0.995, 5e-5)])
def test_exploration_step(e: float, expected: float):
    assert exploration_step(e) == pytest.approx(expected)


class TestDeltaMax:
    @pytest.mark.parametrize("e", [0.25, 0.6])
    def test_no_tripodal_phase(self, e: float):
        with pytest.raises(NoTripodalPhaseError):
            delta_max(e, DMode.ANSATZ)

    def test_ansatz_boundary(self):
        row = delta_max(0.1, DMode.ANSATZ)
        assert abs(row.S_tri - row.S_sb) <= 1e-10
        assert 0.003 < row.delta_m < 0.006
        assert row.delta_m <= 0.11 * row.e
        assert row.iterations is not None and row.iterations <= 100
        assert row.D == 0
        # The optimal graphon jumps at the boundary
        assert row.block_jump() > 0.01

    @pytest.mark.parametrize("e", [0.05, 0.1])
    def test_free_d_boundary_walks_up_from_small_delta(self, e: float):
        row = delta_max(e, DMode.FREE_D)
        assert abs(row.S_tri - row.S_sb) <= 1e-10
        assert row.delta_m > 0
        assert row.delta_m >= delta_max(e, DMode.ANSATZ).delta_m - 1e-10

    def test_warm_start_finds_the_same_boundary(self):
        row = delta_max(0.1, DMode.ANSATZ)
        again = delta_max(0.1, DMode.ANSATZ, seed=boundary_seed(row))
        assert again.delta_m == pytest.approx(row.delta_m, abs=1e-10)

    def test_neighbouring_seed(self):
        row = delta_max(0.1, DMode.ANSATZ)
        near = delta_max(0.101, DMode.ANSATZ, seed=boundary_seed(row))
        assert abs(near.S_tri - near.S_sb) <= 1e-10


class TestTraceVsDelta:
    def test_crosses_at_the_boundary(self):
        table = trace_vs_delta(0.1, DMode.ANSATZ, 0.001, 0.006)
        assert table.columns == TRACE_COLUMNS
        assert len(table.complete_rows()) == 6
        crossing = float(table.metadata["crossing_delta"])
        assert crossing == pytest.approx(delta_max(0.1, DMode.ANSATZ).delta_m, abs=2e-4)
        assert table.column("D").tolist() == [0.0] * 6

    @pytest.mark.parametrize(("step", "stop"), [(0.0, 0.01), (0.01, 0.005), (0.01, 0.2)])
    def test_invalid_range(self, step: float, stop: float):
        with pytest.raises(ParameterError):
            trace_vs_delta(0.1, DMode.ANSATZ, step, stop)
