from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator  # pyright: ignore [reportUnknownVariableType]

from strauss.core.domain.errors import ParameterError
from strauss.core.domain.params import NewtonOptions
from strauss.core.domain.phase import DMode

Command = Literal["fm-curve", "scaling", "boundary", "trace", "small-e", "classify", "check"]


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(BaseModel):
    """A validated command line: which sweep to run, its ranges and where to write the table"""

    command: Command
    e_min: Optional[float] = None
    e_max: Optional[float] = None
    e_step: Optional[float] = None
    e: Optional[float] = None
    t: Optional[float] = None
    delta_step: Optional[float] = None
    delta_stop: Optional[float] = None
    d_mode: DMode = DMode.FREE_D
    table: Optional[str] = Field(default=None, description="fm-curve CSV to fit instead of a fresh sweep")
    n_grid: int = 2000
    draws: int = 1000

    out: str = Field(default="-", description="Output path, '-' for standard output")
    output_format: OutputFormat = OutputFormat.CSV
    svg: Optional[str] = None
    newton: NewtonOptions = Field(default_factory=NewtonOptions)

    @model_validator(mode="after")
    def _validate(self):
        if self.e_min is not None and self.e_max is not None and self.e_min > self.e_max:
            raise ParameterError("--e-min must not exceed --e-max", flag="--e-min", e_min=self.e_min, e_max=self.e_max)
        for flag, value in (("--e-step", self.e_step), ("--delta-step", self.delta_step)):
            if value is not None and not value > 0:
                raise ParameterError(f"{flag} must be positive", flag=flag, value=value)
        if self.delta_step is not None and self.delta_stop is not None and self.delta_step > self.delta_stop:
            raise ParameterError("--delta-step must not exceed --delta-stop", flag="--delta-stop")
        for flag, value in (("--e-min", self.e_min), ("--e-max", self.e_max), ("--e", self.e)):
            if value is not None and not 0 < value < 1:
                raise ParameterError(f"{flag} must lie in (0,1)", flag=flag, value=value)
        if self.n_grid < 16 or self.draws < 1:
            raise ParameterError("--n-grid must be at least 16 and --draws at least 1", flag="--n-grid")
        return self

    @property
    def e_range(self) -> tuple[float, float]:
        if self.e_min is None or self.e_max is None:
            raise ParameterError(f"{self.command} needs --e-min and --e-max", flag="--e-min")
        return self.e_min, self.e_max
