from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from relaxcheck import errors
from relaxcheck.operators.datamodel import frozen_array

RateSource = Literal["computed", "measured", "projected"]


class RateSet(BaseModel):
    """The d²-1 relaxation rates of one generator or one experiment."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    d: int
    rates: np.ndarray
    source: RateSource = "computed"

    @field_validator("rates", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return frozen_array(v, dtype=np.float64)

    @model_validator(mode="after")
    def check_rates(self) -> "RateSet":
        if self.d < 2:
            raise errors.InvalidDimensionError(f"Dimension must be >= 2, got {self.d}")
        expected = self.d * self.d - 1
        if self.rates.shape != (expected,):
            raise errors.InvalidRateError(
                f"Need {expected} rates for d={self.d}, got {self.rates.shape[0] if self.rates.ndim else 0}"
            )
        if not np.all(np.isfinite(self.rates)) or np.any(self.rates < 0):
            raise errors.InvalidRateError(
                f"Rates must be finite and >= 0, got {self.rates.tolist()}"
            )
        return self

    @property
    def total(self) -> float:
        return float(self.rates.sum())

    @property
    def is_zero(self) -> bool:
        return not np.any(self.rates > 0)

    @classmethod
    def from_profile(cls, profile) -> "RateSet":
        return cls(d=profile.d, rates=profile.rates, source="computed")


class ConstraintReport(BaseModel):
    """Per-mode margins of sum(Gamma) >= (d/sqrt(2)) Gamma_alpha."""

    d: int
    margins: List[float]
    passed: bool
    indeterminate: bool
    tightness_ratio: Optional[float]
    tolerance: float
    corollary_passed: Optional[bool] = None
    qubit: Optional["QubitReport"] = None

    @property
    def min_margin(self) -> float:
        return min(self.margins)


class CorollaryReport(BaseModel):
    """Per-mode margins of Gamma_alpha <= sum(Gamma) / 2."""

    d: int
    margins: List[float]
    passed: bool
    indeterminate: bool
    implied_by_main_bound: bool
    tolerance: float


class TriangleMargin(BaseModel):
    permutation: str
    margin: float
    passed: bool


class QubitReport(BaseModel):
    """Gamma_k <= Gamma_i + Gamma_j for each choice of k, plus the 2 T_L >= T_T form."""

    triangles: List[TriangleMargin]
    passed: bool
    indeterminate: bool
    transverse_pair: Optional[List[int]] = None
    longitudinal_index: Optional[int] = None
    longitudinal_time: Optional[float] = None
    transverse_time: Optional[float] = None
    # 2 Gamma_T - Gamma_L, the rate form of 2 T_L >= T_T
    lt_margin: Optional[float] = None
    lt_passed: Optional[bool] = None


ConstraintReport.model_rebuild()


class Violation(BaseModel):
    constraint: str
    detail: str
    margin: float


class WitnessVerdict(BaseModel):
    d: int
    verdict: Literal["CONSISTENT", "INCONSISTENT", "INDETERMINATE"]
    times: List[float]
    rates: List[float]
    tolerance: float
    reports: Dict[str, Any]
    violations: List[Violation]

    @property
    def consistent(self) -> bool:
        return self.verdict != "INCONSISTENT"


class ConstraintCheck(BaseModel):
    """Uniform record of one registered inequality, as run by the witness."""

    name: str
    labels: List[str]
    margins: List[float]
    passed: bool
    indeterminate: bool
    # absolute slack: a margin below -threshold is a violation
    threshold: float
    details: Dict[str, Any] = {}

    def violations(self) -> List[Violation]:
        return [
            Violation(constraint=self.name, detail=label, margin=margin)
            for label, margin in zip(self.labels, self.margins)
            if margin < -self.threshold
        ]
