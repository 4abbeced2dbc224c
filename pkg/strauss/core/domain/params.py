from typing import NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator  # pyright: ignore [reportUnknownVariableType]

from strauss.core.domain.errors import DomainError, ParameterError
from strauss.core.domain.graphon import CLAMP_TOLERANCE, StepGraphon, clamp_probability


class Sym21Blocks(NamedTuple):
    """Block values of a (2,1)-symmetric tripodal graphon.

    small: value on each small pode's own square, cross: between the two small podes,
    mixed: between a small pode and the large one, large: on the large pode's square."""

    small: float
    cross: float
    mixed: float
    large: float

    def as_matrix(self) -> list[list[float]]:
        return [
            [self.small, self.cross, self.mixed],
            [self.cross, self.small, self.mixed],
            [self.mixed, self.mixed, self.large],
        ]

    def feasible(self) -> bool:
        return all(-CLAMP_TOLERANCE <= v <= 1 + CLAMP_TOLERANCE for v in self)


def sym21_deviations(A: float, B: float, c: float, D: float = 0.0) -> Sym21Blocks:
    """Block values minus e, see sym21_blocks"""
    return Sym21Blocks(
        small=-A + B * (1 - c) + (1 - c) * D,
        cross=A + B * (1 - c) + (1 - c) * D,
        mixed=-c * B + (1 - 2 * c) * D / 2,
        large=c * c * B / (1 - c) - c * D,
    )


def sym21_blocks(e: float, A: float, B: float, c: float, D: float = 0.0) -> Sym21Blocks:
    """Block values with constant-degree background B, coupling A and degree split D.

    The degrees are e + (1−c)D/2 on the small podes and e − cD/2 on the large one."""
    return Sym21Blocks(*(e + d for d in sym21_deviations(A, B, c, D)))


_BLOCK_NAMES = ("g11", "g12", "g13", "g33")


class Sym21Params(BaseModel):
    """Parameters of the (2,1)-symmetric tripodal family: two podes of size c/2, one of size 1−c"""

    e: float = Field(description="The edge density")
    A: float = Field(description="Coupling amplitude between the two small podes")
    B: float = Field(description="Background amplitude, keeps the degree function constant when D = 0")
    c: float = Field(description="Combined size of the two small podes")
    D: float = Field(default=0.0, description="Degree split between small and large podes")

    @model_validator(mode="after")
    def _validate(self):
        if not 0 < self.e < 1:
            raise DomainError("Edge density must lie in (0,1)", e=self.e)
        if not 0 < self.c < 1:
            raise DomainError("Pode size c must lie in (0,1)", c=self.c)
        for name, value in zip(_BLOCK_NAMES, self.blocks):
            clamp_probability(value, name)
        return self

    @property
    def blocks(self) -> Sym21Blocks:
        return sym21_blocks(self.e, self.A, self.B, self.c, self.D)

    @property
    def delta(self) -> float:
        """Triangle deficit of the D = 0 member, c·cbrt(A³ − B³)"""
        return float(self.c * np.cbrt(self.A**3 - self.B**3))

    def graphon(self) -> StepGraphon:
        half = self.c / 2
        return StepGraphon(
            sizes=[half, half, 1 - self.c],
            values=self.blocks.as_matrix(),
        )


class TripodalAnsatz(Sym21Params):
    """The constant-degree member of the (2,1)-symmetric family"""

    @model_validator(mode="after")
    def _no_degree_split(self):
        if self.D != 0:
            raise DomainError("The tripodal ansatz has D = 0", D=self.D)
        return self


class CornerEmbedding(BaseModel):
    """A rescaled copy of g0 placed in the [0,c)² corner of an otherwise near-constant graphon"""

    g0: StepGraphon
    e: float
    c: float

    @model_validator(mode="after")
    def _validate(self):
        if not 0 < self.e < 1:
            raise DomainError("Edge density must lie in (0,1)", e=self.e)
        if not 0 < self.c < 1:
            raise DomainError("Corner size must lie in (0,1)", c=self.c)
        return self


class NewtonOptions(BaseModel):
    step_tol: float = Field(default=1e-10, description="Converged when the Newton step is below step_tol·(1+|x|∞)")
    grad_tol: float = Field(default=1e-10, description="Converged when the gradient sup-norm is below grad_tol")
    max_iter: int = Field(default=50)
    fd_step: float = Field(default=1e-6, description="Relative finite-difference step")
    damping: float = Field(default=0.5, description="Backtracking factor for rejected steps")
    max_backtracks: int = Field(default=40)

    @model_validator(mode="after")
    def _validate(self):
        for name in ("step_tol", "grad_tol", "fd_step", "damping"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive", **{name: getattr(self, name)})
        if self.damping >= 1:
            raise ParameterError("damping must be below 1", damping=self.damping)
        if self.max_iter < 1 or self.max_backtracks < 1:
            raise ParameterError("max_iter and max_backtracks must be at least 1")
        return self


class LocalMax(BaseModel):
    point: list[float]
    value: float
    converged: bool
    iterations: int = 0
    gradient_norm: Optional[float] = Field(
        default=None,
        description="Sup-norm of the finite-difference gradient at the returned point",
    )
    on_boundary: bool = Field(
        default=False,
        description="Converged on the edge of the feasible region, where no feasible step goes uphill",
    )

    @property
    def x(self):
        return np.asarray(self.point, dtype=np.float64)
