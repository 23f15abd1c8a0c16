"""Generalized Gell-Mann operator basis and Hilbert-Schmidt geometry."""

from functools import lru_cache

import numpy as np

from relaxcheck import errors
from relaxcheck.operators.datamodel import OperatorBasis
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances


def _check_same_shape(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise errors.DimensionMismatchError(
            f"Operands have different shapes: {A.shape} vs {B.shape}"
        )


def hs_inner(A: np.ndarray, B: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(A^dagger B)."""
    A = np.asarray(A)
    B = np.asarray(B)
    _check_same_shape(A, B)
    return complex(np.vdot(A, B))


def hs_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(A)))


@lru_cache(maxsize=32)
def _gellmann_elements(d: int) -> np.ndarray:
    pairs = [(k, l) for k in range(d) for l in range(k + 1, d)]
    elements = []
    for k, l in pairs:
        m = np.zeros((d, d), dtype=np.complex128)
        m[k, l] = m[l, k] = 1 / np.sqrt(2)
        elements.append(m)
    for k, l in pairs:
        m = np.zeros((d, d), dtype=np.complex128)
        m[k, l] = -1j / np.sqrt(2)
        m[l, k] = 1j / np.sqrt(2)
        elements.append(m)
    for j in range(1, d):
        diag = np.zeros(d)
        diag[:j] = 1.0
        diag[j] = -j
        elements.append(np.diag(diag / np.sqrt(j * (j + 1))).astype(np.complex128))
    elements.append(np.eye(d, dtype=np.complex128) / np.sqrt(d))
    return np.stack(elements)


def build_gellmann_basis(d: int) -> OperatorBasis:
    """Builds the normalized generalized Gell-Mann basis.

    Ordering: symmetric elements for (k, l), k < l in lexicographic order, then
    the antisymmetric elements in the same order, then the d-1 diagonal traceless
    elements, and I/sqrt(d) last.

    Args:
        d: Hilbert space dimension, at least 2.
    Returns:
        The OperatorBasis with d² Hermitian, HS-orthonormal elements.
    Raises:
        InvalidDimensionError: if d < 2.
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise errors.InvalidDimensionError(f"Basis dimension must be >= 2, got {d}")
    return OperatorBasis(d=int(d), elements=_gellmann_elements(int(d)))


def gram_matrix(basis: OperatorBasis) -> np.ndarray:
    flat = basis.elements.reshape(basis.size, -1)
    return flat.conj() @ flat.T


def validate_basis(basis: OperatorBasis, tolerances: Tolerances = DEFAULT_TOLERANCES):
    """Raises NumericalError if the basis is not orthonormal, traceless and Hermitian."""
    tol = tolerances.orth
    gram_error = np.max(np.abs(gram_matrix(basis) - np.eye(basis.size)))
    if gram_error > tol:
        raise errors.NumericalError(f"Basis Gram matrix deviates by {gram_error:.3e}")
    traces = np.abs(np.trace(basis.traceless, axis1=1, axis2=2))
    if traces.size and traces.max() > tol:
        raise errors.NumericalError(f"Basis element has trace {traces.max():.3e}")
    herm_error = np.max(np.abs(basis.elements - basis.elements.conj().transpose(0, 2, 1)))
    if herm_error > tol:
        raise errors.NumericalError(f"Basis element not Hermitian ({herm_error:.3e})")


def expand(A: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    """Coefficients <F_i, A> for every basis element."""
    A = np.asarray(A, dtype=np.complex128)
    if A.shape != (basis.d, basis.d):
        raise errors.DimensionMismatchError(
            f"Operator of shape {A.shape} does not act on d={basis.d}"
        )
    return np.einsum("iab,ab->i", basis.elements.conj(), A)


def reconstruct(coefficients: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    coefficients = np.asarray(coefficients)
    if coefficients.shape[0] != basis.size:
        raise errors.DimensionMismatchError(
            f"Need {basis.size} coefficients, got {coefficients.shape[0]}"
        )
    return np.einsum("i,iab->ab", coefficients, basis.elements)


def traceless_elements(basis: OperatorBasis) -> np.ndarray:
    """F_1..F_{d²-1} stacked, shape (d²-1, d, d)."""
    return basis.traceless
