import json
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, model_validator  # pyright: ignore [reportUnknownVariableType]

from strauss.core.domain.errors import DomainError

# Entries this close to [0,1] are snapped onto the boundary
CLAMP_TOLERANCE = 1e-12
SIZE_SUM_TOLERANCE = 1e-12

FloatArray = npt.NDArray[np.float64]


def clamp_probability(value: float, name: str = "value") -> float:
    """Snap a value within CLAMP_TOLERANCE of [0,1] onto the interval, reject anything farther"""
    if value < -CLAMP_TOLERANCE or value > 1 + CLAMP_TOLERANCE or not np.isfinite(value):
        raise DomainError(f"{name} = {value!r} is outside [0,1]", name=name, value=float(value))
    return min(max(value, 0.0), 1.0)


class StepGraphon(BaseModel):
    """A k-podal graphon: pode sizes summing to 1 and a symmetric matrix of block values.

    Block values are probabilities. Construction clamps entries grazing the boundary
    of [0,1] and raises DomainError for anything else that is not a valid graphon."""

    sizes: list[float] = Field(description="The pode sizes, all positive, summing to 1")
    values: list[list[float]] = Field(description="The k×k symmetric matrix of block values, row-major")

    @model_validator(mode="after")
    def _validate(self):
        k = len(self.sizes)
        if k == 0:
            raise DomainError("A graphon needs at least one pode")
        if any(not s > 0 for s in self.sizes):
            raise DomainError("Pode sizes must be positive", sizes=self.sizes)
        total = float(np.sum(self.sizes))
        if abs(total - 1) > SIZE_SUM_TOLERANCE:
            raise DomainError(f"Pode sizes sum to {total!r}, not 1", sizes=self.sizes)
        if len(self.values) != k or any(len(row) != k for row in self.values):
            raise DomainError(f"Values must be a {k}×{k} matrix")

        for i in range(k):
            for j in range(k):
                self.values[i][j] = clamp_probability(self.values[i][j], f"g[{i}][{j}]")
        for i in range(k):
            for j in range(i + 1, k):
                if self.values[i][j] != self.values[j][i]:
                    raise DomainError(
                        f"Values are not symmetric at ({i},{j})",
                        i=i,
                        j=j,
                        upper=self.values[i][j],
                        lower=self.values[j][i],
                    )
        return self

    @classmethod
    def constant(cls, p: float) -> "StepGraphon":
        return cls(sizes=[1.0], values=[[p]])

    @classmethod
    def from_arrays(cls, sizes: Any, values: Any) -> "StepGraphon":
        return cls(
            sizes=np.asarray(sizes, dtype=np.float64).tolist(),
            values=np.asarray(values, dtype=np.float64).tolist(),
        )

    @classmethod
    def from_json(cls, raw: str) -> "StepGraphon":
        try:
            payload = json.loads(raw)
        except json.JSONDecodeError as e:
            raise DomainError(f"Invalid graphon JSON: {e}") from e
        return cls.model_validate(payload)

    def to_json(self) -> str:
        return json.dumps({"sizes": self.sizes, "values": self.values})

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def c(self) -> FloatArray:
        return np.asarray(self.sizes, dtype=np.float64)

    @property
    def g(self) -> FloatArray:
        return np.asarray(self.values, dtype=np.float64)

    def permuted(self, order: list[int]) -> "StepGraphon":
        """Relabel the podes: pode i of the result is pode order[i] of self"""
        idx = np.asarray(order)
        return StepGraphon.from_arrays(self.c[idx], self.g[np.ix_(idx, idx)])

    def split(self, pode: int, fraction: float) -> "StepGraphon":
        """Split a pode in two pieces carrying the same row of values"""
        if not 0 < fraction < 1:
            raise DomainError("Split fraction must lie in (0,1)", fraction=fraction)
        c, g = self.c, self.g
        idx = np.insert(np.arange(self.k), pode + 1, pode)
        sizes = c[idx]
        sizes[pode] *= fraction
        sizes[pode + 1] *= 1 - fraction
        return StepGraphon.from_arrays(sizes, g[np.ix_(idx, idx)])
