from functools import cached_property
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_validator,
    model_validator,
)

from relaxcheck import errors
from relaxcheck.operators import vectorize
from relaxcheck.operators.basis import build_gellmann_basis
from relaxcheck.operators.datamodel import ComplexMatrix, OperatorBasis, frozen_array
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances


def _tolerances(info: ValidationInfo) -> Tolerances:
    if info.context and "tolerances" in info.context:
        return info.context["tolerances"]
    return DEFAULT_TOLERANCES


def hermiticity_error(A: np.ndarray) -> float:
    return float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0


def psd_threshold(C: np.ndarray, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Eigenvalues of C in [-threshold, 0) count as rounding noise."""
    if not C.size:
        return 0.0
    return tolerances.psd * float(np.linalg.norm(C, 2))


class GKLSGenerator(BaseModel):
    """L = H + D with H(rho) = -i[H, rho] and D given by the Kossakowski matrix C.

    C is indexed over the d²-1 traceless elements of `basis`.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    d: int = Field(ge=2)
    hamiltonian: np.ndarray
    kossakowski: np.ndarray
    basis: Optional[OperatorBasis] = None

    @field_validator("hamiltonian", "kossakowski", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return frozen_array(v)

    @model_validator(mode="after")
    def check_invariants(self, info: ValidationInfo) -> "GKLSGenerator":
        tol = _tolerances(info)
        d, n = self.d, self.d * self.d - 1
        if self.basis is None:
            object.__setattr__(self, "basis", build_gellmann_basis(d))
        elif self.basis.d != d:
            raise errors.InvalidDimensionError(
                f"Basis is for d={self.basis.d} but generator has d={d}"
            )
        if self.hamiltonian.shape != (d, d):
            raise errors.InvalidDimensionError(
                f"H must be {d}x{d}, got {self.hamiltonian.shape}"
            )
        if self.kossakowski.shape != (n, n):
            raise errors.InvalidDimensionError(
                f"C must be {n}x{n} for d={d}, got {self.kossakowski.shape}"
            )
        H, C = self.hamiltonian, self.kossakowski
        h_err = hermiticity_error(H)
        if h_err > tol.herm * max(1.0, float(np.linalg.norm(H))):
            raise errors.NotHermitianError(
                f"Hamiltonian H is not Hermitian: max |H - H^dagger| = {h_err:.3e}"
            )
        c_err = hermiticity_error(C)
        if c_err > tol.herm * max(1.0, float(np.linalg.norm(C))):
            raise errors.NotHermitianError(
                f"Kossakowski matrix C is not Hermitian: max |C - C^dagger| = {c_err:.3e}"
            )
        min_eig = float(np.linalg.eigvalsh((C + C.conj().T) / 2).min())
        if min_eig < -psd_threshold(C, tol):
            raise errors.NotCompletelyPositiveError(
                f"Kossakowski matrix C is not positive semidefinite: min eigenvalue {min_eig:.3e}"
            )
        return self

    @classmethod
    def create(
        cls,
        d: int,
        hamiltonian: np.ndarray,
        kossakowski: np.ndarray,
        tolerances: Tolerances = DEFAULT_TOLERANCES,
    ) -> "GKLSGenerator":
        return cls.model_validate(
            {"d": d, "hamiltonian": hamiltonian, "kossakowski": kossakowski},
            context={"tolerances": tolerances},
        )

    @classmethod
    def from_lindblad(
        cls,
        d: int,
        hamiltonian: np.ndarray,
        ops: List["LindbladOperator"],
        tolerances: Tolerances = DEFAULT_TOLERANCES,
    ) -> "GKLSGenerator":
        from relaxcheck.generator.lindblad import kossakowski_from_lindblad

        basis = build_gellmann_basis(d)
        C, dH = kossakowski_from_lindblad(ops, basis)
        return cls.create(d, np.asarray(hamiltonian) + dH, C, tolerances)

    @cached_property
    def trace_kossakowski(self) -> float:
        return float(np.trace(self.kossakowski).real)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "H": ComplexMatrix.from_array(self.hamiltonian).model_dump(),
            "C": ComplexMatrix.from_array(self.kossakowski).model_dump(),
        }


class LindbladOperator(BaseModel):
    """User-facing jump operator with a nonnegative rate; L is arbitrary."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rate: float
    operator: np.ndarray

    @field_validator("operator", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return frozen_array(v)

    @field_validator("rate")
    @classmethod
    def check_rate(cls, v: float) -> float:
        if not np.isfinite(v) or v < 0:
            raise errors.InvalidRateError(f"Lindblad rate must be >= 0, got {v}")
        return v


class LindbladTerm(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weight: float = Field(ge=0)
    operator: np.ndarray

    @field_validator("operator", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return frozen_array(v)


class LindbladDecomposition(BaseModel):
    """Diagonal form D(rho) = sum_k p_k (L_k rho L_k^dagger - {L_k^dagger L_k, rho}/2)."""

    d: int
    terms: List[LindbladTerm]

    @property
    def weights(self) -> np.ndarray:
        return np.array([t.weight for t in self.terms])

    @property
    def operators(self) -> np.ndarray:
        if not self.terms:
            return np.zeros((0, self.d, self.d), dtype=np.complex128)
        return np.stack([t.operator for t in self.terms])

    def dissipator(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros((self.d, self.d), dtype=np.complex128)
        for term in self.terms:
            L = term.operator
            LdL = L.conj().T @ L
            out += term.weight * (L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL))
        return out


class Superoperator(BaseModel):
    """d²xd² matrix of a linear map on d×d matrices, tagged with its vec convention."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    d: int = Field(ge=1)
    matrix: np.ndarray
    convention: Literal["column-stacking"] = vectorize.CONVENTION

    @field_validator("matrix", mode="before")
    @classmethod
    def freeze(cls, v: Any) -> np.ndarray:
        return frozen_array(v)

    @model_validator(mode="after")
    def check_shape(self) -> "Superoperator":
        n = self.d * self.d
        if self.matrix.shape != (n, n):
            raise errors.InvalidDimensionError(
                f"Superoperator for d={self.d} must be {n}x{n}, got {self.matrix.shape}"
            )
        return self

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho)
        if rho.shape != (self.d, self.d):
            raise errors.DimensionMismatchError(
                f"Operator of shape {rho.shape} does not act on d={self.d}"
            )
        return vectorize.unvec(self.matrix @ vectorize.vec(rho), self.d)

    def trace_preservation_error(self) -> float:
        """max |vec(I)^T M|: zero iff Tr(M(rho)) = 0 for every rho."""
        row = vectorize.vec(np.eye(self.d)) @ self.matrix
        return float(np.max(np.abs(row)))


class HermiticityReport(BaseModel):
    trials: int
    max_deviation: float
    tolerance: float
    passed: bool
