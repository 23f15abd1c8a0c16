"""Eigen-analysis of a generator superoperator."""

from typing import Optional

import numpy as np
import scipy.linalg

from relaxcheck import errors
from relaxcheck.generator.datamodel import Superoperator
from relaxcheck.logger import logger
from relaxcheck.operators import vectorize
from relaxcheck.spectrum.datamodel import (
    GeneratorSpectrum,
    RelaxationProfile,
    StructureReport,
)
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances


def compute_spectrum(
    s: Superoperator, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> GeneratorSpectrum:
    """Full eigendecomposition with a designated zero mode.

    Among eigenvalues with |lambda| <= zero threshold, the designated zero mode is
    the one whose eigen-operator has the largest |trace|, i.e. the direction of
    the stationary density matrix. Remaining near-zero modes stay in the spectrum.

    Raises:
        NotTracePreservingError: if no eigenvalue lies within the zero threshold.
        NumericalError: if the eigensolver fails or returns non-finite values.
    """
    M = s.matrix
    try:
        eigenvalues, V = scipy.linalg.eig(M)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise errors.NumericalError(f"Eigensolver failed: {e}") from e
    if not (np.all(np.isfinite(eigenvalues)) and np.all(np.isfinite(V))):
        raise errors.NumericalError("Eigensolver returned non-finite values")

    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    zero_tol = tolerances.zero * max(1.0, float(np.linalg.norm(M, 2)))
    radius = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    pair_tol = tolerances.pair * max(1.0, radius)

    candidates = np.flatnonzero(np.abs(eigenvalues) <= zero_tol)
    if candidates.size == 0:
        raise errors.NotTracePreservingError(
            f"No eigenvalue within {zero_tol:.3e} of zero; smallest modulus is "
            f"{np.min(np.abs(eigenvalues)):.3e}"
        )
    eye_vec = vectorize.vec(np.eye(s.d))
    traces = np.abs(eye_vec @ V[:, candidates])
    # largest |trace|, then smallest |lambda|, then lowest index
    order = np.lexsort((candidates, np.abs(eigenvalues[candidates]), -traces))
    zero_index = int(candidates[order[0]])

    condition = float(np.linalg.cond(V))
    if not np.isfinite(condition):
        condition = float("inf")
    defective = condition > tolerances.kappa_max
    if defective:
        logger.warning(
            f"Generator is (nearly) defective: eigenvector condition {condition:.3e}"
        )
    eigen_operators = np.stack(
        [vectorize.unvec(V[:, k], s.d) for k in range(V.shape[1])]
    )
    return GeneratorSpectrum(
        d=s.d,
        eigenvalues=eigenvalues,
        eigen_operators=eigen_operators,
        zero_mode_index=zero_index,
        defective=defective,
        condition_number=condition,
        zero_tolerance=zero_tol,
        pair_tolerance=pair_tol,
        matrix_trace=complex(np.trace(M)),
    )


def relaxation_profile(spec: GeneratorSpectrum) -> RelaxationProfile:
    """Rates Gamma = max(0, -Re lambda), times 1/Gamma, frequencies Im lambda.

    The designated zero mode is removed, leaving d²-1 entries. Rates at or below
    the zero threshold map to infinite times.
    """
    modes = np.array(spec.nonzero_mode_indices, dtype=int)
    lam = spec.eigenvalues[modes]
    rates = np.maximum(0.0, -lam.real) + 0.0
    frequencies = lam.imag + 0.0
    order = np.lexsort((modes, np.abs(frequencies), -rates))
    rates, frequencies, modes = rates[order], frequencies[order], modes[order]
    with np.errstate(divide="ignore"):
        times = np.where(rates > spec.zero_tolerance, 1.0 / np.maximum(rates, 1e-300), np.inf)
    return RelaxationProfile(
        d=spec.d,
        rates=rates,
        times=times,
        frequencies=frequencies,
        mode_indices=modes.tolist(),
    )


def _pairing_residual(eigenvalues: np.ndarray) -> float:
    """Greedy conjugate matching on sorted values; returns the worst |lambda_i - conj(lambda_j)|."""
    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    remaining = list(order)
    worst = 0.0
    while remaining:
        i = remaining.pop(0)
        target = np.conj(eigenvalues[i])
        self_residual = abs(eigenvalues[i] - target)
        if remaining:
            dists = np.abs(eigenvalues[remaining] - target)
            j = int(np.argmin(dists))
            if dists[j] < self_residual:
                worst = max(worst, float(dists[j]))
                remaining.pop(j)
                continue
        worst = max(worst, float(self_residual))
    return worst


def verify_spectral_structure(spec: GeneratorSpectrum) -> StructureReport:
    """Reports conjugate pairing, the largest non-zero-mode real part, and trace agreement."""
    residual = _pairing_residual(spec.eigenvalues)
    nonzero = spec.eigenvalues[spec.nonzero_mode_indices]
    max_real = float(nonzero.real.max()) if nonzero.size else 0.0
    trace_residual = float(abs(spec.eigenvalues.sum() - spec.matrix_trace))
    zero_count = int(np.sum(np.abs(spec.eigenvalues) <= spec.zero_tolerance))
    report = StructureReport(
        conjugate_pairing_ok=residual <= spec.pair_tolerance,
        max_pairing_residual=residual,
        max_real_part=max_real,
        real_parts_ok=max_real <= spec.zero_tolerance,
        trace_residual=trace_residual,
        trace_ok=trace_residual <= 1e-10 * max(1.0, abs(spec.matrix_trace)),
        zero_mode_count=zero_count,
    )
    if not report.passed:
        logger.warning(f"Spectral structure check failed: {report.model_dump()}")
    return report


def stationary_state(spec: GeneratorSpectrum) -> Optional[np.ndarray]:
    """Hermitian-projected, trace-normalized zero-mode operator (None if traceless)."""
    u = spec.eigen_operators[spec.zero_mode_index]
    trace = np.trace(u)
    if abs(trace) <= spec.zero_tolerance:
        return None
    rho = u / trace
    return 0.5 * (rho + rho.conj().T)
