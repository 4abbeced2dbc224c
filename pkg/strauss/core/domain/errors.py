from typing import Any, Literal, Optional, Union

from pydantic import BaseModel

ErrorCode = Union[
    Literal[
        # An argument lies outside the domain of a function, e-g a block value outside [0,1]
        "domain_error",
        # An algorithm parameter is invalid, e-g a grid that is too coarse
        "parameter_error",
        # F(A,B) was evaluated on A³ = B³
        "singularity_error",
        # A root bracket does not contain a sign change
        "bracket_error",
        # A table or a fit window cannot support the requested computation
        "data_error",
        # The objective is invalid on every grid cell
        "empty_result",
        # The tripodal entropy never exceeds the symmetric bipodal entropy up to δ_cap
        "no_tripodal_phase",
        # The requested point lies above the Erdős–Rényi curve
        "out_of_scope",
        # Newton or branch tracking failed to converge
        "numerical_error",
    ],
    str,
]


class BaseError(BaseModel):
    details: Optional[dict[str, Any]] = None
    message: str
    code: Optional[ErrorCode] = None


class StraussError(Exception):
    default_code: ErrorCode = "numerical_error"

    def __init__(self, message: str, code: Optional[ErrorCode] = None, **details: Any):
        super().__init__(message)
        self.error = BaseError(message=message, code=code or self.default_code, details=details or None)

    def __str__(self):
        return f"StraussError : [{self.error.code}]: [{self.error.message}]"

    @classmethod
    def error_cls(cls, code: str) -> type["StraussError"]:
        return _ERROR_CLASSES.get(code, cls)

    @classmethod
    def from_error(cls, error: BaseError) -> "StraussError":
        return cls.error_cls(error.code or "")(error.message, error.code, **(error.details or {}))

    @property
    def code(self) -> Optional[ErrorCode]:
        return self.error.code

    @property
    def message(self) -> str:
        return self.error.message

    @property
    def details(self) -> Optional[dict[str, Any]]:
        return self.error.details

    @property
    def exit_code(self) -> int:
        # Matches the CLI contract: 2 for invalid inputs, 3 for numerical failures
        return 3


class DomainError(StraussError):
    default_code = "domain_error"

    @property
    def exit_code(self) -> int:
        return 2


class ParameterError(DomainError):
    default_code = "parameter_error"


class SingularityError(DomainError):
    default_code = "singularity_error"


class OutOfScopeError(DomainError):
    default_code = "out_of_scope"


class BracketError(StraussError):
    default_code = "bracket_error"


class DataError(StraussError):
    default_code = "data_error"


class EmptyResultError(StraussError):
    default_code = "empty_result"


class NoTripodalPhaseError(StraussError):
    default_code = "no_tripodal_phase"


class NumericalError(StraussError):
    default_code = "numerical_error"


_ERROR_CLASSES: dict[str, type[StraussError]] = {
    c.default_code: c
    for c in (
        DomainError,
        ParameterError,
        SingularityError,
        OutOfScopeError,
        BracketError,
        DataError,
        EmptyResultError,
        NoTripodalPhaseError,
        NumericalError,
    )
}
