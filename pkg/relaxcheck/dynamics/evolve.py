"""Semigroup evolution rho_t = exp(t L) rho_0 and what can be read off it."""

from typing import Sequence, Union

import numpy as np
import scipy.linalg

from relaxcheck import errors
from relaxcheck.dynamics.datamodel import (
    DensityMatrix,
    ExpectationMode,
    ExpectationSeries,
    PhysicalityReport,
    SnapshotDiagnostics,
    Trajectory,
)
from relaxcheck.generator import GKLSGenerator, Superoperator, to_superoperator
from relaxcheck.generator.datamodel import hermiticity_error
from relaxcheck.logger import logger
from relaxcheck.operators import vectorize
from relaxcheck.spectrum import compute_spectrum
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances

Target = Union[GKLSGenerator, Superoperator]


def _superoperator(target: Target) -> Superoperator:
    if isinstance(target, GKLSGenerator):
        return to_superoperator(target)
    return target


def _initial_state(rho0, d: int, tolerances: Tolerances) -> np.ndarray:
    state = rho0 if isinstance(rho0, DensityMatrix) else DensityMatrix.create(rho0, tolerances)
    if state.d != d:
        raise errors.DimensionMismatchError(f"State has d={state.d}, generator has d={d}")
    return np.array(state.matrix)


def validate_grid(times: Sequence[float]) -> np.ndarray:
    times = np.asarray(times, dtype=np.float64)
    if times.ndim != 1 or times.size == 0:
        raise errors.InvalidGridError("Time grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(times)) or times[0] < 0:
        raise errors.InvalidGridError("Time grid must be finite and start at t >= 0")
    if np.any(np.diff(times) <= 0):
        raise errors.InvalidGridError("Time grid must be strictly increasing")
    return times


def _is_uniform_from_zero(times: np.ndarray) -> bool:
    if times.size < 3 or times[0] != 0:
        return False
    steps = np.diff(times)
    return bool(np.allclose(steps, steps[0], rtol=1e-12, atol=0))


def snapshot_diagnostics(t: float, rho: np.ndarray) -> SnapshotDiagnostics:
    return SnapshotDiagnostics(
        time=float(t),
        trace_error=float(abs(np.trace(rho) - 1)),
        hermiticity_error=hermiticity_error(rho),
        min_eigenvalue=float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()),
    )


def evolve(
    target: Target,
    rho0,
    times: Sequence[float],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Trajectory:
    """Snapshots exp(t M) vec(rho0) on the grid.

    A uniform grid from 0 reuses one propagator exp(dt M); otherwise each time
    gets its own exponential. A snapshot at t = 0 is rho0 itself.

    Raises:
        InvalidStateError: if rho0 is not a density matrix.
        InvalidGridError: if the grid is empty, negative or not increasing.
    """
    superop = _superoperator(target)
    d = superop.d
    rho0 = _initial_state(rho0, d, tolerances)
    times = validate_grid(times)
    M = superop.matrix
    v0 = vectorize.vec(rho0)
    states = np.empty((times.size, d, d), dtype=np.complex128)

    if _is_uniform_from_zero(times):
        propagator = scipy.linalg.expm((times[1] - times[0]) * M)
        v = v0
        for k in range(times.size):
            if k:
                v = propagator @ v
            states[k] = vectorize.unvec(v, d)
    else:
        for k, t in enumerate(times):
            states[k] = vectorize.unvec(scipy.linalg.expm(t * M) @ v0, d)
    if times[0] == 0:
        states[0] = rho0

    scale = max(1.0, float(np.linalg.norm(M, 2)) * float(times[-1]))
    diagnostics = [snapshot_diagnostics(t, rho) for t, rho in zip(times, states)]
    return Trajectory(times=times, states=states, diagnostics=diagnostics, scale=scale)


def physicality_report(
    traj: Trajectory, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> PhysicalityReport:
    """Worst trace, Hermiticity and negativity errors over the trajectory; never raises."""
    trace_tol = tolerances.physical_trace * traj.scale
    herm_tol = tolerances.physical_herm * traj.scale
    eig_tol = tolerances.physical_eig * traj.scale
    breaches = [
        k
        for k, diag in enumerate(traj.diagnostics)
        if diag.trace_error > trace_tol
        or diag.hermiticity_error > herm_tol
        or diag.min_eigenvalue < -eig_tol
    ]
    report = PhysicalityReport(
        max_trace_error=max(diag.trace_error for diag in traj.diagnostics),
        max_hermiticity_error=max(diag.hermiticity_error for diag in traj.diagnostics),
        max_negative_eigenvalue=max(0.0, -min(diag.min_eigenvalue for diag in traj.diagnostics)),
        trace_tolerance=trace_tol,
        hermiticity_tolerance=herm_tol,
        eigenvalue_tolerance=eig_tol,
        breaches=breaches,
        passed=not breaches,
    )
    if breaches:
        first = traj.diagnostics[breaches[0]]
        logger.warning(
            f"Trajectory leaves the state space at {len(breaches)} snapshots, first at "
            f"t={first.time:.6g} (min eigenvalue {first.min_eigenvalue:.3e})"
        )
    return report


def _cluster(eigenvalues: np.ndarray, tol: float):
    """Groups indices whose eigenvalues lie within `tol` of the group's first member."""
    clusters = []
    for k in np.lexsort((eigenvalues.imag, eigenvalues.real)):
        for cluster in clusters:
            if abs(eigenvalues[cluster[0]] - eigenvalues[k]) <= tol:
                cluster.append(int(k))
                break
        else:
            clusters.append([int(k)])
    return clusters


def expectation_series(
    target: Target,
    rho0,
    A: np.ndarray,
    times: Sequence[float],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ExpectationSeries:
    """Tr(A rho_t) on the grid and its decomposition into decaying exponentials.

    The amplitudes come from expanding vec(rho0) in the right eigenvectors of M:
    c_alpha = a_alpha Tr(A u_alpha) with V a = vec(rho0). Modes with equal
    eigenvalues are merged; modes within the zero threshold form the constant.
    A defective spectrum leaves the values intact and the decomposition empty.

    Raises:
        NotHermitianError: if A is not Hermitian.
    """
    superop = _superoperator(target)
    d = superop.d
    A = np.asarray(A, dtype=np.complex128)
    if A.shape != (d, d):
        raise errors.DimensionMismatchError(f"Observable of shape {A.shape} does not act on d={d}")
    if hermiticity_error(A) > tolerances.herm * max(1.0, float(np.linalg.norm(A))):
        raise errors.NotHermitianError(
            f"Observable is not Hermitian: max |A - A^dagger| = {hermiticity_error(A):.3e}"
        )
    traj = evolve(superop, rho0, times, tolerances)
    raw = np.einsum("ab,tba->t", A, traj.states)
    values = raw.real

    spec = compute_spectrum(superop, tolerances)
    if spec.defective:
        logger.warning("Defective spectrum: expectation values are not decomposed")
        return ExpectationSeries(
            times=traj.times,
            values=values,
            max_imaginary=float(np.max(np.abs(raw.imag))),
            constant=0.0,
            modes=[],
            valid_decomposition=False,
        )

    V = spec.eigenvectors
    a = scipy.linalg.solve(V, vectorize.vec(_initial_state(rho0, d, tolerances)))
    # Tr(A u) = sum_ab A_ab u_ba = vec(A^T) . vec(u)
    weights = vectorize.vec(A.T) @ V
    amplitudes = a * weights
    constant = 0.0 + 0.0j
    modes = []
    floor = 1e-12 * max(1.0, float(np.sum(np.abs(amplitudes))))
    for cluster in _cluster(spec.eigenvalues, spec.pair_tolerance):
        lam = spec.eigenvalues[cluster].mean()
        c = amplitudes[cluster].sum()
        if abs(lam) <= spec.zero_tolerance:
            constant += c
        elif abs(c) > floor:
            modes.append(
                ExpectationMode(
                    rate=float(-lam.real),
                    frequency=float(lam.imag),
                    amplitude_re=float(c.real),
                    amplitude_im=float(c.imag),
                )
            )
    modes.sort(key=lambda m: (m.rate, m.frequency))
    series = ExpectationSeries(
        times=traj.times,
        values=values,
        max_imaginary=float(np.max(np.abs(raw.imag))),
        constant=float(constant.real),
        modes=modes,
        valid_decomposition=True,
    )
    error = float(np.max(np.abs(series.reconstruct(traj.times) - values)))
    return series.model_copy(update={"reconstruction_error": error})


def fit_decay_rate(
    times: Sequence[float], values: Sequence[float], constant: float = 0.0
) -> float:
    """Least-squares decay rate from the slope of log|<A>_t - C|.

    Raises:
        NumericalError: if fewer than two points lie away from the constant.
    """
    times = np.asarray(times, dtype=np.float64)
    deviation = np.abs(np.asarray(values, dtype=np.float64) - constant)
    keep = deviation > 1e-300
    if keep.sum() < 2:
        raise errors.NumericalError("Need at least two points away from the constant to fit")
    slope, _ = np.polyfit(times[keep], np.log(deviation[keep]), 1)
    return float(-slope)


def partial_transpose_generator(d_a: int, d_b: int) -> Superoperator:
    """L = (id kron T) - id on a d_a*d_b system.

    The partial transpose is positive on product states but not completely
    positive, so exp(tL) can drive an entangled state out of the state space.
    """
    if d_a < 1 or d_b < 1 or d_a * d_b < 2:
        raise errors.InvalidDimensionError(f"Need d_a*d_b >= 2, got {d_a}x{d_b}")
    d = d_a * d_b

    def partial_transpose(rho: np.ndarray) -> np.ndarray:
        return rho.reshape(d_a, d_b, d_a, d_b).transpose(0, 3, 2, 1).reshape(d, d)

    matrix = vectorize.map_matrix(partial_transpose, d) - np.eye(d * d)
    return Superoperator(d=d, matrix=matrix)


def bell_state(d_a: int = 2) -> DensityMatrix:
    """Maximally entangled state sum_i |ii> / sqrt(d_a) on a d_a x d_a system."""
    ket = np.zeros(d_a * d_a, dtype=np.complex128)
    ket[[i * d_a + i for i in range(d_a)]] = 1.0
    return DensityMatrix.pure(ket)


def evolve_state(
    target: Target, rho0, t: float, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> np.ndarray:
    """rho_t at a single time."""
    grid = [0.0, t] if t > 0 else [0.0]
    return evolve(target, rho0, grid, tolerances).states[-1]
