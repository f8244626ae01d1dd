import re
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, field_validator

RATIONAL_PATTERN = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def check_rational(value: str) -> str:
    if not RATIONAL_PATTERN.match(value.strip()):
        raise ValueError(f"{value!r} is not a rational of the form p/q")
    return value.strip()


Rational = Annotated[str, AfterValidator(check_rational)]


class TermModel(BaseModel):
    """One monomial coeff * x1^e1 * ... * xm^em"""

    coeff: Rational
    exps: List[int]

    @field_validator("exps")
    @classmethod
    def exponents_non_negative(cls, v: List[int]) -> List[int]:
        if any(e < 0 for e in v):
            raise ValueError("exponents must be non-negative")
        return v


class FormTermModel(BaseModel):
    axes: List[int]
    poly: List[TermModel]


class FormFile(BaseModel):
    """A classical differential form with polynomial coefficients"""

    dim: int = Field(ge=1, le=4)
    degree: int = Field(ge=0, le=4)
    terms: List[FormTermModel] = []


class CubeFile(BaseModel):
    """A polynomial singular cube R^dim_in -> R^dim_out"""

    dim_in: int = Field(ge=0, le=4)
    dim_out: int = Field(ge=1, le=4)
    components: List[List[TermModel]]


class ScaledDisplacements(BaseModel):
    scaled: List[Rational]


class PipeFile(BaseModel):
    """An infinitesimal pipe: base point and how the displacement slots are filled"""

    base: List[Rational]
    dim: int = Field(ge=0, le=4)
    displacements: Union[Literal["symbolic"], ScaledDisplacements] = "symbolic"


class EdgesFile(BaseModel):
    """Labels for the twelve edges of a cube diagram, keyed "01", "02", ..."""

    edges: Dict[str, str]
    abelian: bool = False


class NilTermModel(BaseModel):
    monomial: List[List[int]]
    coeff: str


class WeilElementModel(BaseModel):
    """base + the nilpotent terms, monomials as [slot, coordinate] pairs in normal form"""

    base: List[str]
    nil: List[NilTermModel]


class PointModel(BaseModel):
    """An infinitesimal point: base[k] and nil[k] describe coordinate k"""

    base: List[str]
    nil: List[List[NilTermModel]]


class WordModel(BaseModel):
    source: Optional[str] = None
    target: Optional[str] = None
    letters: List[List[str]]


class SuiteConfig(BaseModel):
    """One verification run"""

    suite: str
    inputs: List[str] = []
    trials: int = Field(default=20, ge=0)
    seed: int = 0
    max_dimension: int = 4

    @field_validator("max_dimension")
    @classmethod
    def dimension_capped(cls, v: int) -> int:
        if not 1 <= v <= 4:
            raise ValueError("max_dimension must lie in 1..4")
        return v


class CheckResult(BaseModel):
    """One checked identity; witness holds what is needed to replay it"""

    model_config = ConfigDict(populate_by_name=True)

    case: str
    passed: bool = Field(alias="pass")
    lhs: str = ""
    rhs: str = ""
    witness: Dict[str, Any] = {}


class Report(BaseModel):
    suite: str
    seed: int
    trials: int
    checks: List[CheckResult] = []

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def add(self, check: CheckResult) -> None:
        self.checks.append(check)

    def extend(self, checks: List[CheckResult]) -> None:
        self.checks.extend(checks)

    def finalize(self) -> "Report":
        self.checks = sorted(self.checks, key=lambda check: check.case)
        return self

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


class SubdivisionModel(BaseModel):
    """The two halves of an (i, s)-subdivision; pipes are listed by their simplex vertices"""

    direction: int
    parameter: Rational
    first: Union[CubeFile, List[PointModel]]
    second: Union[CubeFile, List[PointModel]]
