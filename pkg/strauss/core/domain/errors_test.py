import pytest
from pydantic import BaseModel, ValidationError, field_validator

from strauss.core.domain.errors import (
    BaseError,
    BracketError,
    DomainError,
    NoTripodalPhaseError,
    OutOfScopeError,
    ParameterError,
    SingularityError,
    StraussError,
)


def test_strauss_error_code():
    error = SingularityError("A³ equals B³", A=0.2, B=0.2)
    assert error.code == "singularity_error"
    assert error.message == "A³ equals B³"
    assert error.details == {"A": 0.2, "B": 0.2}


def test_strauss_error_str():
    error = BracketError("no sign change")
    assert str(error) == "StraussError : [bracket_error]: [no sign change]"


def test_strauss_error_no_details():
    assert DomainError("bad").details is None


@pytest.mark.parametrize(
    ("code", "expected"),
    [
        ("domain_error", DomainError),
        ("parameter_error", ParameterError),
        ("out_of_scope", OutOfScopeError),
        ("no_tripodal_phase", NoTripodalPhaseError),
        ("unknown_code", StraussError),
    ],
)
def test_error_cls(code: str, expected: type[StraussError]):
    assert StraussError.error_cls(code) is expected


def test_from_error():
    error = StraussError.from_error(BaseError(message="nope", code="parameter_error", details={"n": 4}))
    assert isinstance(error, ParameterError)
    assert error.details == {"n": 4}


@pytest.mark.parametrize(
    ("error", "exit_code"),
    [
        (DomainError("x"), 2),
        (ParameterError("x"), 2),
        (OutOfScopeError("x"), 2),
        (BracketError("x"), 3),
        (NoTripodalPhaseError("x"), 3),
    ],
)
def test_exit_code(error: StraussError, exit_code: int):
    assert error.exit_code == exit_code


class _Model(BaseModel):
    value: float

    @field_validator("value")
    @classmethod
    def _check(cls, v: float) -> float:
        if v < 0:
            raise DomainError("negative")
        return v


def test_errors_are_not_wrapped_by_pydantic():
    # Not a ValueError, so pydantic lets it propagate untouched
    with pytest.raises(DomainError):
        _Model(value=-1)

    with pytest.raises(ValidationError):
        _Model.model_validate({"value": "abc"})
