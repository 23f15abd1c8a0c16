from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from relaxcheck import errors
from relaxcheck.operators.datamodel import frozen_array
from relaxcheck.tolerances import DEFAULT_TOLERANCES


class DensityMatrix(BaseModel):
    """Hermitian, unit-trace, positive semidefinite d×d matrix."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return frozen_array(v)

    @model_validator(mode="after")
    def check_state(self, info: ValidationInfo) -> "DensityMatrix":
        tol = (info.context or {}).get("tolerances", DEFAULT_TOLERANCES)
        rho = self.matrix
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 2:
            raise errors.InvalidStateError(f"State must be square with d >= 2, got {rho.shape}")
        norm = max(1.0, float(np.linalg.norm(rho)))
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if herm > tol.herm * norm:
            raise errors.InvalidStateError(f"State is not Hermitian (deviation {herm:.3e})")
        trace = np.trace(rho)
        if abs(trace - 1) > tol.trace_state:
            raise errors.InvalidStateError(f"State trace is {trace:.12g}, expected 1")
        min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min())
        if min_eig < -tol.psd * norm:
            raise errors.InvalidStateError(f"State has negative eigenvalue {min_eig:.3e}")
        return self

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def create(cls, matrix, tolerances=DEFAULT_TOLERANCES) -> "DensityMatrix":
        return cls.model_validate({"matrix": matrix}, context={"tolerances": tolerances})

    @classmethod
    def pure(cls, ket: Sequence[complex]) -> "DensityMatrix":
        psi = np.asarray(ket, dtype=np.complex128)
        psi = psi / np.linalg.norm(psi)
        return cls.create(np.outer(psi, psi.conj()))


class GridSpec(BaseModel):
    t_max: float = Field(gt=0)
    n_points: int = Field(ge=1)

    def times(self) -> np.ndarray:
        if self.n_points == 1:
            return np.zeros(1)
        return np.linspace(0.0, self.t_max, self.n_points)


class SnapshotDiagnostics(BaseModel):
    time: float
    trace_error: float
    hermiticity_error: float
    min_eigenvalue: float


class Trajectory(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    # shape (n_times, d, d)
    states: np.ndarray
    diagnostics: List[SnapshotDiagnostics]
    # max(1, ||M||_2 t_max), the conditioning scale of the propagators
    scale: float

    @field_validator("times", mode="before")
    @classmethod
    def freeze_times(cls, v: Any) -> np.ndarray:
        return frozen_array(v, dtype=np.float64)

    @field_validator("states", mode="before")
    @classmethod
    def freeze_states(cls, v: Any) -> np.ndarray:
        return frozen_array(v)

    def to_dataframe(self, entries: Optional[List[Tuple[int, int]]] = None) -> pd.DataFrame:
        """One row per time: selected entries (re, im) and the diagnostics."""
        d = self.states.shape[1]
        entries = entries if entries is not None else [(i, j) for i in range(d) for j in range(d)]
        rows = []
        for k, diag in enumerate(self.diagnostics):
            row: Dict[str, Any] = {"t": float(self.times[k])}
            for i, j in entries:
                row[f"rho_{i}{j}_re"] = float(self.states[k, i, j].real)
                row[f"rho_{i}{j}_im"] = float(self.states[k, i, j].imag)
            row.update(diag.model_dump(exclude={"time"}))
            rows.append(row)
        return pd.DataFrame(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "times": self.times.tolist(),
            "states": [
                {"re": s.real.tolist(), "im": s.imag.tolist()} for s in self.states
            ],
            "diagnostics": [diag.model_dump() for diag in self.diagnostics],
            "scale": self.scale,
        }


class PhysicalityReport(BaseModel):
    max_trace_error: float
    max_hermiticity_error: float
    # magnitude of the most negative eigenvalue, 0 if none
    max_negative_eigenvalue: float
    trace_tolerance: float
    hermiticity_tolerance: float
    eigenvalue_tolerance: float
    breaches: List[int]
    passed: bool


class ExpectationMode(BaseModel):
    rate: float
    frequency: float
    amplitude_re: float
    amplitude_im: float

    @property
    def amplitude(self) -> complex:
        return complex(self.amplitude_re, self.amplitude_im)


class ExpectationSeries(BaseModel):
    """<A>_t = sum_alpha c_alpha exp((-Gamma_alpha + i omega_alpha) t) + C."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    values: np.ndarray
    # largest |Im Tr(A rho_t)| over the grid
    max_imaginary: float
    constant: float
    modes: List[ExpectationMode]
    valid_decomposition: bool
    reconstruction_error: Optional[float] = None

    @field_validator("times", "values", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return frozen_array(v, dtype=np.float64)

    def reconstruct(self, times: np.ndarray) -> np.ndarray:
        times = np.asarray(times, dtype=np.float64)
        out = np.full(times.shape, self.constant, dtype=np.complex128)
        for mode in self.modes:
            out += mode.amplitude * np.exp((-mode.rate + 1j * mode.frequency) * times)
        return out.real

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.times, "value": self.values})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "times": self.times.tolist(),
            "values": self.values.tolist(),
            "constant": self.constant,
            "modes": [mode.model_dump() for mode in self.modes],
            "valid_decomposition": self.valid_decomposition,
            "reconstruction_error": self.reconstruction_error,
        }
