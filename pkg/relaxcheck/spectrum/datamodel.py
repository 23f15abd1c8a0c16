from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from relaxcheck.operators.datamodel import frozen_array


class GeneratorSpectrum(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    d: int
    eigenvalues: np.ndarray
    # shape (d², d, d); each eigen-operator has unit HS norm
    eigen_operators: np.ndarray
    zero_mode_index: int
    defective: bool
    condition_number: float
    zero_tolerance: float
    pair_tolerance: float
    matrix_trace: complex

    @field_validator("eigenvalues", "eigen_operators", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return frozen_array(v)

    @property
    def eigenvectors(self) -> np.ndarray:
        """Column-stacked eigen-operators as the d²xd² matrix of right eigenvectors."""
        n = self.d * self.d
        return self.eigen_operators.transpose(0, 2, 1).reshape(n, n).T

    @property
    def nonzero_mode_indices(self) -> List[int]:
        return [i for i in range(len(self.eigenvalues)) if i != self.zero_mode_index]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eigenvalues": [
                {"re": float(lam.real), "im": float(lam.imag)} for lam in self.eigenvalues
            ],
            "zero_mode_index": self.zero_mode_index,
            "defective": self.defective,
            "condition_number": self.condition_number,
        }


class RelaxationProfile(BaseModel):
    """Rates sorted descending, ties by |omega| ascending then by mode index."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    d: int
    rates: np.ndarray
    times: np.ndarray
    frequencies: np.ndarray
    mode_indices: List[int]

    @field_validator("rates", "times", "frequencies", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return frozen_array(v, dtype=np.float64)

    @property
    def rate_sum(self) -> float:
        return float(self.rates.sum())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rates": self.rates.tolist(),
            "times": self.times.tolist(),
            "frequencies": self.frequencies.tolist(),
        }


class StructureReport(BaseModel):
    conjugate_pairing_ok: bool
    max_pairing_residual: float
    max_real_part: float
    real_parts_ok: bool
    trace_residual: float
    trace_ok: bool
    zero_mode_count: int

    @property
    def passed(self) -> bool:
        return self.conjugate_pairing_ok and self.real_parts_ok and self.trace_ok
