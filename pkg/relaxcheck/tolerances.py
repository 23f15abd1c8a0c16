"""Central table of numerical thresholds.

Every operation that compares against a threshold takes an optional `Tolerances`;
`DEFAULT_TOLERANCES` is used when none is given.
"""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from relaxcheck import errors, utils


class Tolerances(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    orth: float = Field(default=1e-12, gt=0, description="Basis orthonormality.")
    herm: float = Field(
        default=1e-12, gt=0, description="Hermiticity, scaled by max(1, norm)."
    )
    psd: float = Field(
        default=1e-10, gt=0, description="Negative-eigenvalue clamp relative to norm."
    )
    zero: float = Field(
        default=1e-9, gt=0, description="Zero-mode threshold, times max(1, ||M||_2)."
    )
    pair: float = Field(
        default=1e-8,
        gt=0,
        description="Conjugate pairing threshold, times max(1, spectral radius).",
    )
    kappa_max: float = Field(
        default=1e12, gt=0, description="Eigenvector condition bound (defective flag)."
    )
    witness: float = Field(
        default=1e-9, ge=0, description="Constraint slack relative to the rate sum."
    )
    superop: float = Field(
        default=1e-10, gt=0, description="Superoperator agreement and HP deviation."
    )
    trace_state: float = Field(default=1e-10, gt=0, description="Trace of input states.")
    physical_trace: float = Field(default=1e-9, gt=0)
    physical_herm: float = Field(default=1e-10, gt=0)
    physical_eig: float = Field(default=1e-8, gt=0)
    proof: float = Field(default=1e-8, gt=0, description="Rate identity residual.")
    bw: float = Field(default=1e-12, ge=0, description="Commutator bound slack.")

    def with_overrides(self, overrides: Optional[List[str]] = None) -> "Tolerances":
        """Returns a copy with `KEY=VALUE` overrides applied."""
        if not overrides:
            return self
        updates = {}
        for item in overrides:
            if "=" not in item:
                raise errors.SchemaError(
                    f"Tolerance override must look like KEY=VALUE, got {item!r}"
                )
            key, value = (part.strip() for part in item.split("=", 1))
            if key not in Tolerances.model_fields:
                raise errors.SchemaError(
                    f"Unknown tolerance {key!r}; known: {', '.join(Tolerances.model_fields)}"
                )
            try:
                updates[key] = float(value)
            except ValueError as e:
                raise errors.SchemaError(f"Tolerance {key} is not a number: {value!r}") from e
        return Tolerances(**{**self.model_dump(), **updates})

    @classmethod
    def from_yaml(cls, path: str) -> "Tolerances":
        data = utils.read_yaml(path) or {}
        if not isinstance(data, dict):
            raise errors.SchemaError(f"Tolerance file {path} must hold a mapping")
        return cls(**data)


DEFAULT_TOLERANCES = Tolerances()
