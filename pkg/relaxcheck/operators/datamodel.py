from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from relaxcheck import errors


def frozen_array(values: Any, dtype=np.complex128) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


class ComplexMatrix(BaseModel):
    """JSON form of a dense complex matrix: {"rows", "cols", "re", "im"}."""

    rows: int
    cols: int
    re: List[List[float]]
    im: List[List[float]]

    @model_validator(mode="after")
    def check_shape(self) -> "ComplexMatrix":
        if self.rows < 1 or self.cols < 1:
            raise errors.SchemaError(
                f"Matrix must have positive shape, got {self.rows}x{self.cols}"
            )
        for name, part in (("re", self.re), ("im", self.im)):
            if len(part) != self.rows or any(len(row) != self.cols for row in part):
                raise errors.SchemaError(
                    f"Matrix part {name!r} does not match declared shape {self.rows}x{self.cols}"
                )
        return self

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "ComplexMatrix":
        arr = np.asarray(arr, dtype=np.complex128)
        if arr.ndim != 2:
            raise errors.DimensionMismatchError(
                f"Expected a 2-d array, got shape {arr.shape}"
            )
        return cls(
            rows=arr.shape[0],
            cols=arr.shape[1],
            re=arr.real.tolist(),
            im=arr.imag.tolist(),
        )

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ComplexMatrix":
        if not isinstance(data, dict):
            raise errors.SchemaError(f"Expected a matrix object, got {type(data).__name__}")
        if "im" not in data and "re" in data:
            data = {**data, "im": [[0.0] * len(row) for row in data["re"]]}
        return cls(**data)

    def to_array(self) -> np.ndarray:
        return np.array(self.re, dtype=np.float64) + 1j * np.array(
            self.im, dtype=np.float64
        )


class OperatorBasis(BaseModel):
    """Orthonormal operator basis (F_i), i = 1..d², with F_{d²} = I/sqrt(d) last."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    d: int
    elements: np.ndarray
    name: str = "gellmann"

    @field_validator("elements", mode="before")
    @classmethod
    def freeze_elements(cls, v: Any) -> np.ndarray:
        return frozen_array(v)

    @model_validator(mode="after")
    def check_shape(self) -> "OperatorBasis":
        expected = (self.d * self.d, self.d, self.d)
        if self.elements.shape != expected:
            raise errors.InvalidDimensionError(
                f"Basis for d={self.d} needs shape {expected}, got {self.elements.shape}"
            )
        return self

    @property
    def size(self) -> int:
        return self.d * self.d

    @property
    def traceless(self) -> np.ndarray:
        """F_1..F_{d²-1} stacked as an array of shape (d²-1, d, d)."""
        return self.elements[:-1]

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> np.ndarray:
        return self.elements[i]
