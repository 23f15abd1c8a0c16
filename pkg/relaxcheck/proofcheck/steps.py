"""Numerical checks of each step in the argument bounding a single relaxation rate.

For a normalized eigen-operator u of L with eigenvalue lambda = -Gamma + i omega
and the diagonal form D = sum_k p_k (L_k . L_k^dagger - {L_k^dagger L_k, .}/2):

    sum_k p_k (<[L_k,u], L_k u> + <[L_k,u^dagger], L_k u^dagger>) = 2 Gamma
    2 Gamma <= sum_k p_k (||[L_k,u]|| ||L_k u|| + ||[L_k,u^dagger]|| ||L_k u^dagger||)
            <= sum_k p_k (||[L_k,u]|| + ||[L_k,u^dagger]||) ||L_k||
            <= 2 sqrt(2) sum_k p_k ||L_k||^2 = 2 sqrt(2) Tr C

Summing Gamma over all modes gives sum(Gamma) = -Tr L = d Tr C.
"""

from typing import List, Optional

import numpy as np

from relaxcheck import errors
from relaxcheck.generator import (
    GKLSGenerator,
    LindbladDecomposition,
    check_adjoint_unital,
    check_hermiticity_preservation,
    decompose_lindblad,
    generator_trace,
    to_superoperator,
)
from relaxcheck.logger import log_check, logger
from relaxcheck.proofcheck.datamodel import ProofCheckReport, ProofStepReport
from relaxcheck.spectrum import GeneratorSpectrum, compute_spectrum
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances

SQRT2 = np.sqrt(2.0)


def _inequality(step: str, lhs: float, rhs: float, tol: float, mode: Optional[int] = None):
    return ProofStepReport(
        step=step,
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        passed=lhs <= rhs + tol * max(1.0, abs(rhs)),
        mode_index=mode,
    )


def _identity(step: str, lhs: float, rhs: float, tol: float, mode: Optional[int] = None):
    return ProofStepReport(
        step=step,
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        passed=abs(rhs - lhs) <= tol * max(1.0, abs(rhs)),
        mode_index=mode,
    )


def _require_diagonalizable(spec: GeneratorSpectrum) -> None:
    if spec.defective:
        raise errors.UnsupportedSpectrumError(
            f"Spectrum is defective (eigenvector condition {spec.condition_number:.3e}); "
            "eigen-operator identities are not evaluated"
        )


def _commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def _mode_terms(decomposition: LindbladDecomposition, u: np.ndarray):
    """Per-term ([L,u], L u, [L,u^dag], L u^dag, ||L||) for every Lindblad term."""
    ud = u.conj().T
    for term in decomposition.terms:
        L = term.operator
        yield term.weight, _commutator(L, u), L @ u, _commutator(L, ud), L @ ud, L


def check_rate_identity(
    g: GKLSGenerator,
    spec: GeneratorSpectrum,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    decomposition: Optional[LindbladDecomposition] = None,
) -> List[ProofStepReport]:
    """Evaluates the commutator sandwich identity against 2 Gamma on every non-zero mode.

    Gamma here is the raw -Re(lambda), without clamping at zero.

    Raises:
        UnsupportedSpectrumError: if the spectrum is defective.
    """
    _require_diagonalizable(spec)
    decomposition = decomposition or decompose_lindblad(g, tolerances)
    reports = []
    for alpha in spec.nonzero_mode_indices:
        u = spec.eigen_operators[alpha]
        lhs = 0.0 + 0.0j
        for p, cu, lu, cud, lud, _ in _mode_terms(decomposition, u):
            lhs += p * (np.vdot(cu, lu) + np.vdot(cud, lud))
        gamma = -spec.eigenvalues[alpha].real
        reports.append(
            _identity("rate_identity", float(lhs.real), 2 * gamma, tolerances.proof, alpha)
        )
    return reports


def check_chain_bound(
    g: GKLSGenerator,
    spec: GeneratorSpectrum,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    decomposition: Optional[LindbladDecomposition] = None,
) -> List[ProofStepReport]:
    """The four inequalities from 2 Gamma up to 2 sqrt(2) Tr C, for every non-zero mode.

    Raises:
        UnsupportedSpectrumError: if the spectrum is defective.
    """
    _require_diagonalizable(spec)
    decomposition = decomposition or decompose_lindblad(g, tolerances)
    trace_c = g.trace_kossakowski
    tol = tolerances.proof
    reports = []
    for alpha in spec.nonzero_mode_indices:
        u = spec.eigen_operators[alpha]
        schwarz, norm_bound = 0.0, 0.0
        for p, cu, lu, cud, lud, L in _mode_terms(decomposition, u):
            ncu, ncud = np.linalg.norm(cu), np.linalg.norm(cud)
            schwarz += p * (ncu * np.linalg.norm(lu) + ncud * np.linalg.norm(lud))
            norm_bound += p * (ncu + ncud) * np.linalg.norm(L)
        gamma = -spec.eigenvalues[alpha].real
        final = 2 * SQRT2 * trace_c
        reports += [
            _inequality("schwarz", 2 * gamma, float(schwarz), tol, alpha),
            _inequality("submultiplicative", float(schwarz), float(norm_bound), tol, alpha),
            _inequality("commutator_norm_bound", float(norm_bound), final, tol, alpha),
            _inequality("rate_bound", gamma, SQRT2 * trace_c, tol, alpha),
        ]
    return reports


def check_trace_identity(
    g: GKLSGenerator,
    spec: Optional[GeneratorSpectrum] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> List[ProofStepReport]:
    """sum(Gamma) = d Tr C from the spectrum and Tr L = -d Tr C from the matrix."""
    spec = spec or compute_spectrum(to_superoperator(g), tolerances)
    expected = g.d * g.trace_kossakowski
    rate_sum = float(-spec.eigenvalues[spec.nonzero_mode_indices].real.sum())
    return [
        _identity("rate_sum_identity", rate_sum, expected, tolerances.proof),
        _identity("generator_trace", generator_trace(g), -expected, tolerances.superop),
    ]


def check_conjugate_modes(
    g: GKLSGenerator,
    spec: GeneratorSpectrum,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> List[ProofStepReport]:
    """Residual ||L(u^dagger) - conj(lambda) u^dagger|| for every non-zero mode."""
    superop = to_superoperator(g)
    scale = max(1.0, float(np.linalg.norm(superop.matrix, 2)))
    reports = []
    for alpha in spec.nonzero_mode_indices:
        ud = spec.eigen_operators[alpha].conj().T
        residual = float(
            np.linalg.norm(superop.apply(ud) - np.conj(spec.eigenvalues[alpha]) * ud)
        )
        reports.append(
            ProofStepReport(
                step="conjugate_mode",
                lhs=residual,
                rhs=0.0,
                slack=-residual,
                passed=residual <= tolerances.proof * scale,
                mode_index=alpha,
            )
        )
    return reports


def run_proofcheck(
    g: GKLSGenerator, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> ProofCheckReport:
    spec = compute_spectrum(to_superoperator(g), tolerances)
    decomposition = decompose_lindblad(g, tolerances)
    hp = check_hermiticity_preservation(g, tolerances=tolerances)
    unital = check_adjoint_unital(g, tolerances)
    steps = [
        ProofStepReport(
            step="hermiticity_preservation",
            lhs=hp.max_deviation,
            rhs=0.0,
            slack=-hp.max_deviation,
            passed=hp.passed,
        ),
        ProofStepReport(
            step="adjoint_unital",
            lhs=unital,
            rhs=0.0,
            slack=-unital,
            passed=unital <= tolerances.superop,
        ),
        *check_trace_identity(g, spec, tolerances),
        *check_conjugate_modes(g, spec, tolerances),
        *check_rate_identity(g, spec, tolerances, decomposition),
        *check_chain_bound(g, spec, tolerances, decomposition),
    ]
    report = ProofCheckReport(d=g.d, steps=steps)
    log_check(
        "proofcheck",
        report.passed,
        {
            f"{s.step}[{s.mode_index}]" if s.mode_index is not None else s.step: s.slack
            for s in report.failures or steps[:4]
        },
    )
    if not report.passed:
        logger.error(f"{len(report.failures)} proof steps failed on d={g.d}")
    return report
