from typing import Optional, Protocol

from strauss.core.domain.graphon import FloatArray


class Objective(Protocol):
    """A function to maximize. None marks a point outside the feasible region"""

    def __call__(self, x: FloatArray, /) -> Optional[float]: ...


class GridObjective(Protocol):
    """A vectorized objective evaluated on meshgrid arrays. NaN marks infeasible cells"""

    def __call__(self, *axes: FloatArray) -> FloatArray: ...


class ContinuationProblem(Protocol):
    """A family of problems indexed by a scalar parameter, solved from a nearby solution"""

    kind: str
    parameter_name: str
    columns: list[str]

    def solve(self, parameter: float, seed: FloatArray) -> Optional[FloatArray]:
        """The solution at 'parameter' starting from 'seed', None when the solve failed"""
        ...

    def row(self, parameter: float, solution: FloatArray) -> dict[str, float]:
        """The table row recorded for an accepted solution"""
        ...
