from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator  # pyright: ignore [reportUnknownVariableType]

from strauss.core.domain.errors import DomainError
from strauss.core.domain.params import sym21_blocks


class BranchLabel(str, Enum):
    # (A, B) of order e, seeded near (2.5e, 1.5e)
    O_E = "O_E"
    # (A, B) of order one, seeded at (½, ½−e)
    THETA_1 = "THETA_1"
    BIPODAL = "BIPODAL"


class DMode(str, Enum):
    # D pinned to 0, entropy maximized over (A, B) with c from the triangle constraint
    ANSATZ = "ansatz"
    # D free, entropy maximized over (B, c, D) with A from the triangle constraint
    FREE_D = "free"


class PhaseBoundaryRow(BaseModel):
    """The best (2,1)-tripodal graphon at the largest δ where it still ties the symmetric bipodal one"""

    e: float
    delta_m: float = Field(description="The boundary δ, with triangle density e³ − δ³")
    A: float
    B: float
    c: float
    D: float = 0.0
    S_tri: float = Field(description="Entropy of the best tripodal graphon at delta_m")
    S_sb: float = Field(description="Entropy of the symmetric bipodal graphon at delta_m")
    d_mode: DMode
    branch: BranchLabel = BranchLabel.O_E
    iterations: Optional[int] = Field(default=None, description="Outer alternations used to converge")

    @model_validator(mode="after")
    def _validate(self):
        if not self.delta_m > 0:
            raise DomainError("delta_m must be positive", delta_m=self.delta_m)
        return self

    @property
    def entropy_gap(self) -> float:
        return self.S_tri - self.S_sb

    def block_jump(self) -> float:
        """Distance between the boundary tripodal graphon and the symmetric bipodal one.

        Every tripodal block is compared with the closest bipodal value e ± δ, so this is a lower
        bound on the sup distance under any measure-preserving relabelling of the podes."""
        bipodal = (self.e - self.delta_m, self.e + self.delta_m)
        return max(min(abs(v - b) for b in bipodal) for v in sym21_blocks(self.e, self.A, self.B, self.c, self.D))
