"""The commutator norm bound ||[A, B]|| <= sqrt(2) ||A|| ||B|| in Hilbert-Schmidt norm."""

import numpy as np

from relaxcheck import errors
from relaxcheck.operators.datamodel import ComplexMatrix
from relaxcheck.proofcheck.datamodel import (
    CommutatorSampleReport,
    CommutatorSearchReport,
    ProofStepReport,
)
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances

SQRT2 = np.sqrt(2.0)
_CHUNK = 10_000


def _as_square(A, name: str) -> np.ndarray:
    if isinstance(A, ComplexMatrix):
        A = A.to_array()
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise errors.DimensionMismatchError(f"{name} must be square, got shape {A.shape}")
    return A


def commutator_ratio(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """||[A,B]|| / (sqrt(2) ||A|| ||B||), batched over leading axes; 0 when A or B vanishes."""
    comm = A @ B - B @ A
    num = np.linalg.norm(comm, axis=(-2, -1))
    den = SQRT2 * np.linalg.norm(A, axis=(-2, -1)) * np.linalg.norm(B, axis=(-2, -1))
    return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)


def check_bw_inequality(
    A, B, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> ProofStepReport:
    A = _as_square(A, "A")
    B = _as_square(B, "B")
    if A.shape != B.shape:
        raise errors.DimensionMismatchError(
            f"Operands have different shapes: {A.shape} vs {B.shape}"
        )
    lhs = float(np.linalg.norm(A @ B - B @ A))
    rhs = float(SQRT2 * np.linalg.norm(A) * np.linalg.norm(B))
    return ProofStepReport(
        step="bw_inequality",
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        passed=lhs <= rhs + tolerances.bw * max(1.0, rhs),
    )


def _gaussian_pairs(rng: np.random.Generator, n: int, d: int):
    shape = (2, n, d, d)
    X = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return X[0], X[1]


def sample_bw_ratios(
    d: int,
    n_pairs: int,
    seed: int = 0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> CommutatorSampleReport:
    """Monte-Carlo of the commutator ratio over complex Gaussian pairs."""
    if d < 1:
        raise errors.InvalidDimensionError(f"Dimension must be >= 1, got {d}")
    if n_pairs < 1:
        raise errors.SchemaError(f"n_pairs must be >= 1, got {n_pairs}")
    rng = np.random.default_rng(seed)
    max_ratio, total = 0.0, 0.0
    for start in range(0, n_pairs, _CHUNK):
        A, B = _gaussian_pairs(rng, min(_CHUNK, n_pairs - start), d)
        ratios = commutator_ratio(A, B)
        max_ratio = max(max_ratio, float(ratios.max()))
        total += float(ratios.sum())
    return CommutatorSampleReport(
        d=d,
        n_pairs=n_pairs,
        seed=seed,
        max_ratio=max_ratio,
        mean_ratio=total / n_pairs,
        passed=max_ratio <= 1 + tolerances.bw,
    )


def search_bw_saturation(
    d: int, iterations: int, seed: int = 0, step: float = 0.3
) -> CommutatorSearchReport:
    """Accept-if-better local ascent on the commutator ratio from a random start."""
    if d < 2:
        raise errors.InvalidDimensionError(f"Dimension must be >= 2, got {d}")
    rng = np.random.default_rng(seed)
    A, B = (X[0] for X in _gaussian_pairs(rng, 1, d))
    best = float(commutator_ratio(A, B))
    for _ in range(iterations):
        dA, dB = (X[0] for X in _gaussian_pairs(rng, 1, d))
        A_new, B_new = A + step * dA, B + step * dB
        ratio = float(commutator_ratio(A_new, B_new))
        if ratio > best:
            A, B, best = A_new, B_new, ratio
        else:
            step *= 0.999
    return CommutatorSearchReport(
        d=d,
        iterations=iterations,
        seed=seed,
        best_ratio=best,
        A=ComplexMatrix.from_array(A / np.linalg.norm(A)),
        B=ComplexMatrix.from_array(B / np.linalg.norm(B)),
    )
