"""Action and matrix form of a GKLS generator."""

from typing import Optional, Union

import numpy as np

from relaxcheck import errors
from relaxcheck.generator.datamodel import GKLSGenerator, HermiticityReport, Superoperator
from relaxcheck.logger import logger
from relaxcheck.operators import vectorize
from relaxcheck.operators.basis import hs_norm
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances


def _check_operand(g: GKLSGenerator, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (g.d, g.d):
        raise errors.DimensionMismatchError(
            f"Operator of shape {rho.shape} does not act on d={g.d}"
        )
    return rho


def _kossakowski_products(g: GKLSGenerator) -> np.ndarray:
    """K = sum_ij C_ij F_j^dagger F_i."""
    F = g.basis.traceless
    return np.einsum("ij,jba,ibc->ac", g.kossakowski, F.conj(), F)


def apply_generator(g: GKLSGenerator, rho: np.ndarray) -> np.ndarray:
    """Evaluates L(rho) term by term from the GKLS form, without vectorization.

    L(rho) = -i[H, rho] + 1/2 sum_ij C_ij (2 F_i rho F_j^dagger - {F_j^dagger F_i, rho})
    """
    rho = _check_operand(g, rho)
    H = g.hamiltonian
    F = g.basis.traceless
    jump = np.einsum("ij,iab,bc,jdc->ad", g.kossakowski, F, rho, F.conj())
    K = _kossakowski_products(g)
    return -1j * (H @ rho - rho @ H) + jump - 0.5 * (K @ rho + rho @ K)


def adjoint_apply(g: GKLSGenerator, A: np.ndarray) -> np.ndarray:
    """Heisenberg-picture generator L*(A), defined by <L*(A), B> = <A, L(B)>."""
    A = _check_operand(g, A)
    H = g.hamiltonian
    F = g.basis.traceless
    # sum_ij conj(C_ij) F_i^dagger A F_j
    jump = np.einsum("ij,iba,bc,jcd->ad", g.kossakowski.conj(), F.conj(), A, F)
    K = _kossakowski_products(g)
    Kd = K.conj().T
    return 1j * (H @ A - A @ H) + jump - 0.5 * (Kd @ A + A @ Kd)


def to_superoperator(g: GKLSGenerator) -> Superoperator:
    """Matrix of L under column stacking, vec(A rho B) = (B^T kron A) vec(rho).

    M = -i(I kron H - H^T kron I)
        + 1/2 sum_ij C_ij (2 conj(F_j) kron F_i - I kron F_j^dagger F_i - (F_j^dagger F_i)^T kron I)
    """
    d = g.d
    eye = np.eye(d)
    H = g.hamiltonian
    F = g.basis.traceless
    jump = np.einsum("ij,jab,icd->acbd", g.kossakowski, F.conj(), F).reshape(
        d * d, d * d
    )
    K = _kossakowski_products(g)
    matrix = (
        -1j * (vectorize.sandwich(H, eye) - vectorize.sandwich(eye, H))
        + jump
        - 0.5 * (vectorize.sandwich(K, eye) + vectorize.sandwich(eye, K))
    )
    return Superoperator(d=d, matrix=matrix)


def generator_trace(g: GKLSGenerator) -> float:
    """Trace of the superoperator; equals -d Tr C for any GKLS generator."""
    trace = np.trace(to_superoperator(g).matrix)
    return float(trace.real)


def to_basis_matrix(g: GKLSGenerator) -> np.ndarray:
    """Matrix <F_i, L(F_j)> of the generator in its operator basis.

    Built only from `apply_generator`, so it is independent of `to_superoperator`.
    """
    elements = g.basis.elements
    images = np.stack([apply_generator(g, F) for F in elements])
    return np.einsum("iab,jab->ij", elements.conj(), images)


def _random_operator(rng: np.random.Generator, d: int) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def check_hermiticity_preservation(
    target: Union[GKLSGenerator, Superoperator],
    trials: int = 20,
    seed: Optional[int] = 0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> HermiticityReport:
    """Samples random A and measures max ||L(A)^dagger - L(A^dagger)||.

    Accepts a raw Superoperator so arbitrary (non-GKLS) matrices can be screened.
    """
    if trials < 1:
        raise errors.SchemaError(f"trials must be >= 1, got {trials}")
    if isinstance(target, GKLSGenerator):
        apply = lambda A: apply_generator(target, A)  # noqa: E731
    else:
        apply = target.apply
    rng = np.random.default_rng(seed)
    deviation = 0.0
    for _ in range(trials):
        A = _random_operator(rng, target.d)
        A /= hs_norm(A)
        deviation = max(deviation, hs_norm(apply(A).conj().T - apply(A.conj().T)))
    passed = deviation <= tolerances.superop
    if not passed:
        logger.warning(f"Hermiticity preservation fails: deviation {deviation:.3e}")
    return HermiticityReport(
        trials=trials,
        max_deviation=deviation,
        tolerance=tolerances.superop,
        passed=passed,
    )


def check_adjoint_unital(
    g: GKLSGenerator, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """Returns ||L*(I)||; trace preservation means it vanishes."""
    residual = hs_norm(adjoint_apply(g, np.eye(g.d)))
    if residual > tolerances.superop:
        logger.warning(f"L*(I) does not vanish: {residual:.3e}")
    return residual


def superoperator_agreement(
    g: GKLSGenerator, rho: np.ndarray, superop: Optional[Superoperator] = None
) -> float:
    """||unvec(M vec(rho)) - L(rho)|| for one operand."""
    superop = superop or to_superoperator(g)
    return hs_norm(superop.apply(rho) - apply_generator(g, rho))
