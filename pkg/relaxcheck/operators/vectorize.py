"""Column-stacking vectorization: vec(A rho B) = (B^T kron A) vec(rho)."""

import numpy as np

from relaxcheck import errors

CONVENTION = "column-stacking"


def vec(A: np.ndarray) -> np.ndarray:
    return np.asarray(A).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    v = np.asarray(v)
    if v.shape[0] != d * d:
        raise errors.DimensionMismatchError(
            f"Vector of length {v.shape[0]} cannot be reshaped to {d}x{d}"
        )
    return v.reshape((d, d) + v.shape[1:], order="F")


def sandwich(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix of rho -> A rho B."""
    return np.kron(np.asarray(B).T, np.asarray(A))


def map_matrix(func, d: int) -> np.ndarray:
    """d²xd² matrix of a linear map on d×d matrices, column k = vec(func(E_k))."""
    n = d * d
    columns = [vec(func(unvec(np.eye(n, dtype=np.complex128)[:, k], d))) for k in range(n)]
    return np.stack(columns, axis=1)
