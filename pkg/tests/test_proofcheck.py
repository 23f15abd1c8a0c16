import numpy as np
import pytest

from relaxcheck import errors
from relaxcheck.generator import Superoperator, to_superoperator
from relaxcheck.generator import families
from relaxcheck.proofcheck import (
    check_bw_inequality,
    check_chain_bound,
    check_conjugate_modes,
    check_rate_identity,
    check_trace_identity,
    commutator_ratio,
    run_proofcheck,
    sample_bw_ratios,
    search_bw_saturation,
)
from relaxcheck.spectrum import compute_spectrum

from conftest import SIGMA_X, SIGMA_Y, SIGMA_Z, random_generator

SQRT2 = np.sqrt(2)


def spectrum_of(g):
    return compute_spectrum(to_superoperator(g))


def test_bw_saturating_pair():
    report = check_bw_inequality(SIGMA_X / SQRT2, SIGMA_Y / SQRT2)
    assert report.step == "bw_inequality"
    assert report.lhs == pytest.approx(SQRT2)
    assert report.rhs == pytest.approx(SQRT2)
    assert report.passed
    assert commutator_ratio(SIGMA_X, SIGMA_Y) == pytest.approx(1.0)


def test_bw_commuting_and_zero_operands():
    assert check_bw_inequality(SIGMA_Z, SIGMA_Z).lhs == 0
    assert commutator_ratio(np.zeros((2, 2)), SIGMA_X) == 0


def test_bw_shape_mismatch():
    with pytest.raises(errors.DimensionMismatchError):
        check_bw_inequality(np.eye(2), np.eye(3))
    with pytest.raises(errors.DimensionMismatchError):
        check_bw_inequality(np.ones((2, 3)), np.ones((2, 3)))


@pytest.mark.parametrize("d", [2, 3, 5])
def test_bw_sampling(d):
    report = sample_bw_ratios(d, n_pairs=2000, seed=d)
    assert report.passed
    assert 0 < report.mean_ratio < report.max_ratio <= 1 + 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_bw_sampling_large(d):
    assert sample_bw_ratios(d, n_pairs=100_000, seed=d).max_ratio <= 1 + 1e-12


def test_bw_search_improves_on_start():
    start = search_bw_saturation(2, iterations=0, seed=5).best_ratio
    result = search_bw_saturation(2, iterations=300, seed=5)
    assert start <= result.best_ratio <= 1 + 1e-12
    A = result.A.to_array()
    assert np.linalg.norm(A) == pytest.approx(1.0)


def test_dephasing_rate_identity(dephasing):
    reports = check_rate_identity(dephasing, spectrum_of(dephasing))
    assert len(reports) == 3
    assert all(r.passed for r in reports)
    assert sorted(r.lhs for r in reports) == pytest.approx([0, 2, 2], abs=1e-12)


def test_dephasing_chain_values(dephasing):
    reports = check_chain_bound(dephasing, spectrum_of(dephasing))
    first_mode = [r for r in reports if r.mode_index == reports[0].mode_index]
    by_mode = {}
    for r in reports:
        by_mode.setdefault(r.mode_index, {})[r.step] = r
    decaying = [steps for steps in by_mode.values() if steps["rate_bound"].lhs > 0.5]
    assert len(decaying) == 2
    for steps in decaying:
        assert steps["schwarz"].lhs == pytest.approx(2)
        assert steps["schwarz"].rhs == pytest.approx(2)
        assert steps["submultiplicative"].rhs == pytest.approx(2 * SQRT2)
        assert steps["commutator_norm_bound"].lhs == pytest.approx(2 * SQRT2)
        assert steps["commutator_norm_bound"].rhs == pytest.approx(2 * SQRT2)
        assert steps["rate_bound"].rhs == pytest.approx(SQRT2)
    assert len(first_mode) == 4
    assert all(r.passed for r in reports)


def test_unitary_generator_has_zero_rates():
    g = families.unitary(3, rate=2.0)
    reports = check_rate_identity(g, spectrum_of(g))
    assert all(r.lhs == 0 and r.passed for r in reports)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_random_generators_pass_every_step(d):
    for index in range(10):
        report = run_proofcheck(random_generator(d, index))
        assert report.passed, report.failures


@pytest.mark.slow
@pytest.mark.parametrize("d", [2, 3, 4])
def test_random_generators_pass_every_step_large(d):
    for index in range(1000):
        assert run_proofcheck(random_generator(d, index, seed=2024)).passed


def test_rate_identity_is_phase_invariant():
    g = random_generator(3)
    spec = spectrum_of(g)
    rotated = spec.model_copy(
        update={"eigen_operators": spec.eigen_operators * np.exp(0.7j)}
    )
    before = [r.lhs for r in check_rate_identity(g, spec)]
    after = [r.lhs for r in check_rate_identity(g, rotated)]
    np.testing.assert_allclose(after, before, atol=1e-12)


def test_defective_spectrum_is_unsupported(dephasing):
    M = np.zeros((4, 4))
    M[1, 1] = M[2, 2] = -1.0
    M[1, 2] = 1.0
    spec = compute_spectrum(Superoperator(d=2, matrix=M))
    with pytest.raises(errors.UnsupportedSpectrumError):
        check_rate_identity(dephasing, spec)
    with pytest.raises(errors.UnsupportedSpectrumError):
        check_chain_bound(dephasing, spec)


def test_trace_identity(depolarizing):
    steps = {s.step: s for s in check_trace_identity(depolarizing)}
    assert steps["rate_sum_identity"].lhs == pytest.approx(3.0)
    assert steps["rate_sum_identity"].rhs == pytest.approx(3.0)
    assert steps["generator_trace"].lhs == pytest.approx(-3.0)
    assert all(s.passed for s in steps.values())


def test_conjugate_modes():
    g = families.dephasing(2, omega=2.0)
    assert all(r.passed for r in check_conjugate_modes(g, spectrum_of(g)))


def test_proofcheck_report_dict(dephasing):
    data = run_proofcheck(dephasing).to_dict()
    assert data["passed"]
    names = [s["step"] for s in data["steps"]]
    assert names[:4] == [
        "hermiticity_preservation",
        "adjoint_unital",
        "rate_sum_identity",
        "generator_trace",
    ]
    assert all(s["pass"] for s in data["steps"])
