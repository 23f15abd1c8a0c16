from typing import Any, Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from relaxcheck import errors

UINT64_MAX = 2**64 - 1


class EnsembleConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    d: int = Field(ge=2)
    n_samples: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0, le=UINT64_MAX)
    hamiltonian_scale: float = Field(default=1.0, ge=0)
    # None means full rank d²-1
    kossakowski_rank: Optional[int] = None
    kossakowski_scale: float = Field(default=1.0, gt=0)
    special_samples: List[str] = []
    n_workers: int = Field(default=1, ge=1)
    histogram_bins: int = Field(default=20, ge=1)
    witness_tolerance: float = Field(default=1e-9, ge=0)

    @model_validator(mode="after")
    def check_rank_and_specials(self) -> "EnsembleConfig":
        n = self.d * self.d - 1
        if self.kossakowski_rank is not None and not 1 <= self.kossakowski_rank <= n:
            raise errors.SchemaError(
                f"kossakowski_rank must lie in 1..{n} for d={self.d}, got {self.kossakowski_rank}"
            )
        from relaxcheck.generator import families

        unknown = [name for name in self.special_samples if name not in families.FAMILY_REGISTRY]
        if unknown:
            raise errors.SchemaError(
                f"Unknown special samples {unknown}; known: {families.list_families()}"
            )
        return self

    @property
    def rank(self) -> int:
        return self.kossakowski_rank or self.d * self.d - 1


class SampleRecord(BaseModel):
    index: int
    label: str
    ratio: Optional[float]
    rate_sum: float
    rate_max: float
    trace_c: float
    trace_identity_residual: float
    pairing_residual: float
    zero_mode_count: int
    structure_ok: bool
    passed: bool


class Histogram(BaseModel):
    edges: List[float]
    counts: List[int]


class EnsembleStats(BaseModel):
    config: EnsembleConfig
    count: int
    samples: List[SampleRecord]
    max_ratio: Optional[float]
    argmax_index: Optional[int]
    argmax_generator: Optional[Dict[str, Any]]
    histogram: Histogram
    violation_count: int
    violations: List[Dict[str, Any]]
    structure_failures: int
    max_trace_identity_residual: float
    rng: Dict[str, str]

    @property
    def ratios(self) -> List[Optional[float]]:
        return [s.ratio for s in self.samples]

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame([s.model_dump() for s in self.samples])

    def to_dict(self) -> Dict[str, Any]:
        out = self.model_dump(exclude={"samples"})
        out["ratios"] = self.ratios
        return out


class SearchResult(BaseModel):
    d: int
    iterations: int
    accepted: int
    restarts: int
    best_ratio: float
    best_generator: Dict[str, Any]
    report: Dict[str, Any]
