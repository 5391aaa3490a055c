from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Annotated, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, WithJsonSchema

from hpdegrees.services.padic import parse_rational


def _to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ValueError(f"cannot read {value!r} as a rational")


def _fraction_str(value: Fraction) -> str:
    return str(value)


def _to_valuation(value):
    if value == "inf" or (isinstance(value, float) and math.isinf(value)):
        return math.inf
    return int(value)


def _valuation_out(value) -> int | str:
    return "inf" if math.isinf(value) else int(value)


# Exact rationals travel as "a/b" (or "a") strings.
RationalField = Annotated[
    Fraction,
    BeforeValidator(_to_fraction),
    PlainSerializer(_fraction_str, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]

# Valuations are ints, or the string "inf" for the valuation of zero.
ValuationField = Annotated[
    float | int,
    BeforeValidator(_to_valuation),
    PlainSerializer(_valuation_out),
    WithJsonSchema({"anyOf": [{"type": "integer"}, {"const": "inf"}]}),
]


class ProofStatus(str, Enum):
    PROVEN_N_LE_5 = "PROVEN_N_LE_5"
    PROVEN_ODD_RANGE = "PROVEN_ODD_RANGE"
    OPEN = "OPEN"


class OutputFormat(str, Enum):
    human = "human"
    json = "json"
    csv = "csv"


class Suite(str, Enum):
    exponent = "exponent"
    congruence = "congruence"
    ktheory = "ktheory"
    all = "all"


# --- Congruence models ---

class LevelEvidence(BaseModel):
    m: int
    product_valuation: ValuationField
    modulus_valuation: int
    satisfied: bool


class CongruenceVerdict(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: RationalField
    n: int
    p: int
    per_level: list[LevelEvidence]
    overall: bool

    def failing_level(self) -> Optional[int]:
        for level in self.per_level:
            if not level.satisfied:
                return level.m
        return None


class LocalVerdict(CongruenceVerdict):
    """Direct congruences at one prime plus the closed-form reading of the same k."""

    valuation: ValuationField
    in_d_p: bool
    e: int
    f: int
    closed_form: bool
    constructed_range: bool
    status: ProofStatus


# --- K-theory models ---

class EndoVerdict(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: RationalField
    n: int
    phi: list[RationalField]  # b_1..b_n of phi(x) = sum b_j x^j
    integral: bool
    parity_ok: bool
    in_fg: bool


# --- Verdict / report models ---

class Evidence(BaseModel):
    primes: list[LocalVerdict]
    direct_divisibility: Optional[bool] = None
    ktheory: Optional[EndoVerdict] = None
    in_fg_infinity: Optional[bool] = None
    depth: Optional[int] = None


class FGVerdict(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: RationalField
    n: int
    member: bool
    evidence: Evidence

    def failing(self) -> list[tuple[int, int]]:
        """(prime, first failing level) pairs."""
        out = []
        for verdict in self.evidence.primes:
            level = verdict.failing_level()
            if level is not None:
                out.append((verdict.p, level))
        return out


class ExponentRow(BaseModel):
    p: int
    n: int
    e: int
    f: int
    status: ProofStatus


class ResidueSet(BaseModel):
    n: int
    modulus: int
    residues: list[int]


# --- Verification models ---

class VerifyFailure(BaseModel):
    case: str
    expected: str
    got: str


class SkippedCase(BaseModel):
    case: str
    reason: str


class VerifyOutcome(BaseModel):
    suite: str
    cases_run: int = 0
    failures: list[VerifyFailure] = Field(default_factory=list)
    skipped: list[SkippedCase] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


class ReportConfig(BaseModel):
    output_format: OutputFormat = OutputFormat.human
    pmax: int = Field(default=13, ge=1)
    nmax: int = Field(default=12, ge=1)
    scan_guard: int = Field(default=2**24, ge=1)
    jobs: int = Field(default=1, ge=1)
    ktheory_check_bound: int = Field(default=8, ge=0)
