"""Pydantic request/response models for the verification service."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..exactnum import QBase, exact_base
from ..constructor import MultiIndex
from ..measures import ParamSet

VERIFY_SUITES = ("orthogonality", "raising", "lowering", "ode", "third-order", "classical", "all")
LIMIT_STUDIES = ("q1", "jacobi")


class InstanceSpec(BaseModel):
    """One problem instance: base, parameters, and multi-index.

    Rationals travel as "num/den" strings so values round-trip losslessly.
    """

    p: str = Field(description='base as a rational string, e.g. "3/2"')
    N: int = Field(ge=1)
    alpha0: int = Field(ge=0)
    alphas: list[int]
    n: list[int]
    precision_bits: Optional[int] = Field(default=None, ge=64)

    @field_validator("p")
    @classmethod
    def _p_valid(cls, v: str) -> str:
        try:
            val = Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"p must be a rational string: {exc}")
        if val <= 0:
            raise ValueError("p must be positive")
        if val == 1:
            raise ValueError("p = 1 is not a valid base")
        return v

    @model_validator(mode="after")
    def _lengths(self):
        if len(self.n) != len(self.alphas):
            raise ValueError(f"n has {len(self.n)} entries but alphas has {len(self.alphas)}")
        if any(e < 0 for e in self.n):
            raise ValueError("multi-index entries must be nonnegative")
        if any(a < 0 for a in self.alphas):
            raise ValueError("alphas must be nonnegative integers")
        return self

    def base(self) -> QBase:
        return exact_base(Fraction(self.p))

    def params(self) -> ParamSet:
        return ParamSet(self.N, self.alpha0, tuple(self.alphas))

    def index(self) -> MultiIndex:
        return MultiIndex(tuple(self.n))


class ConstructResponse(BaseModel):
    instance: dict
    moments_coefficients: list[str]
    rodrigues_coefficients: list[str]
    equal: bool
    degree: int
    prefactor_ratio: str
    conventions: dict


class VerifyRequest(BaseModel):
    instance: InstanceSpec
    suite: str = "all"

    @field_validator("suite")
    @classmethod
    def _suite_valid(cls, v: str) -> str:
        if v not in VERIFY_SUITES:
            raise ValueError(f"unknown suite {v!r}; choose one of {', '.join(VERIFY_SUITES)}")
        return v


class ReportModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    suite: str
    instance: dict
    passed: bool = Field(alias="pass")
    residuals: dict
    details: dict
    conventions: dict
    timing_s: Optional[float] = None


class XiResponse(BaseModel):
    instance: dict
    xi_solved: list[str]
    xi_lowering: list[str]
    sum_value: str
    sum_rule_ok: bool
    closed_form_match: Optional[bool]
    conventions: dict


class DetAResponse(BaseModel):
    instance: dict
    det_closed: str
    det_bruteforce: str
    equal: bool
    conventions: dict


class LimitsRequest(BaseModel):
    instance: InstanceSpec
    study: str
    sweep: list[float] = Field(min_length=1)

    @field_validator("study")
    @classmethod
    def _study_valid(cls, v: str) -> str:
        if v not in LIMIT_STUDIES:
            raise ValueError(f"unknown study {v!r}; choose one of {', '.join(LIMIT_STUDIES)}")
        return v


class LimitsResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    study: str
    parameter_name: str
    parameters: list[float]
    deviations: list[float]
    slope: float
    expected_slope: float
    tolerance: float
    precision_bits: Optional[int]
    instance: dict
    passed: bool = Field(alias="pass")
