import pytest

from strauss.core.domain.errors import DomainError
from strauss.core.domain.phase import BranchLabel, DMode, PhaseBoundaryRow


def _row(**kwargs: float) -> PhaseBoundaryRow:
    base = {"e": 0.1, "delta_m": 0.005, "A": 0.2, "B": 0.105, "c": 0.02, "S_tri": 0.3, "S_sb": 0.3}
    base.update(kwargs)
    return PhaseBoundaryRow(d_mode=DMode.FREE_D, **base)  # pyright: ignore [reportArgumentType]


def test_enum_values():
    assert DMode("free") is DMode.FREE_D
    assert BranchLabel("THETA_1") is BranchLabel.THETA_1


def test_delta_m_positive():
    with pytest.raises(DomainError):
        _row(delta_m=0.0)


def test_block_jump():
    # The cross block e + A + B(1−c) is the farthest from e ± δ
    assert _row().block_jump() == pytest.approx(0.1 + 0.2 + 0.105 * 0.98 - 0.105)


def test_block_jump_of_near_constant_graphon():
    row = _row(A=0.0, B=0.0)
    assert row.block_jump() == pytest.approx(0.005)
