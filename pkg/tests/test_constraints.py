import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relaxcheck import errors
from relaxcheck.analysis import analyze_generator
from relaxcheck.constraints import (
    RateSet,
    bound_constant,
    check_corollary,
    check_main_theorem,
    check_qubit_relations,
    constraints_for_dimension,
    nearest_consistent_rates,
    tightness_ratio,
    witness_measured_rates,
    witness_measured_times,
)
from relaxcheck.constraints.projection import constraint_matrix

SQRT2 = np.sqrt(2)


def rates(*values, d=2):
    return RateSet(d=d, rates=list(values))


def test_dephasing_margins(dephasing):
    report = analyze_generator(dephasing).constraints
    np.testing.assert_allclose(report.margins, [2 - SQRT2, 2 - SQRT2, 2], atol=1e-12)
    assert report.passed
    assert report.tightness_ratio == pytest.approx(SQRT2 / 2)
    assert report.corollary_passed

    corollary = check_corollary(rates(1, 1, 0))
    np.testing.assert_allclose(corollary.margins, [0, 0, 1])
    assert corollary.passed
    assert not corollary.implied_by_main_bound

    qubit = report.qubit
    assert qubit.passed
    assert sorted(t.margin for t in qubit.triangles) == pytest.approx([0, 0, 2], abs=1e-12)


def test_qubit_triangle_labels():
    report = check_qubit_relations(rates(3, 1, 1))
    assert [t.permutation for t in report.triangles] == [
        "Gamma_1 <= Gamma_2 + Gamma_3",
        "Gamma_2 <= Gamma_1 + Gamma_3",
        "Gamma_3 <= Gamma_1 + Gamma_2",
    ]
    assert [t.margin for t in report.triangles] == [-1, 3, 3]
    assert not report.passed


def test_equal_rates():
    r = rates(1, 1, 1)
    report = check_main_theorem(r)
    np.testing.assert_allclose(report.margins, [3 - SQRT2] * 3)
    assert report.tightness_ratio == pytest.approx(SQRT2 / 3)
    qubit = check_qubit_relations(r)
    assert [t.margin for t in qubit.triangles] == [1, 1, 1]


def test_half_sum_is_stronger_than_main_bound_for_qubits():
    r = rates(3, 1, 1)
    assert check_main_theorem(r).passed
    assert not check_main_theorem(r).corollary_passed
    assert not check_corollary(r).passed


def test_main_bound_violation():
    report = check_main_theorem(rates(10, 1, 1))
    assert not report.passed
    assert report.margins[0] == pytest.approx(12 - 10 * SQRT2)
    assert report.tightness_ratio > 1


def test_zero_rates_are_indeterminate():
    report = check_main_theorem(rates(0, 0, 0))
    assert report.indeterminate
    assert report.passed
    assert report.tightness_ratio is None


def test_corollary_implied_from_three_levels():
    assert bound_constant(3) >= 2
    assert check_corollary(RateSet(d=3, rates=np.ones(8))).implied_by_main_bound


def test_wrong_dimension_for_qubit_relations():
    with pytest.raises(errors.WrongDimensionError):
        check_qubit_relations(RateSet(d=3, rates=np.ones(8)))


@pytest.mark.parametrize(
    "d, values",
    [(2, [1, 1]), (2, [1, -1, 1]), (2, [1, np.inf, 1]), (3, [1, 1, 1])],
)
def test_invalid_rate_sets(d, values):
    with pytest.raises(errors.InvalidRateError):
        RateSet(d=d, rates=values)


@settings(deadline=None)
@given(
    st.lists(st.floats(0, 100), min_size=8, max_size=8).filter(lambda v: sum(v) > 1e-3),
    st.floats(1e-3, 1e3),
)
def test_tightness_ratio_is_scale_invariant(values, scale):
    r = RateSet(d=3, rates=values)
    scaled = RateSet(d=3, rates=np.array(values) * scale)
    assert tightness_ratio(scaled) == pytest.approx(tightness_ratio(r), rel=1e-12)


def test_witness_saturating_qubit():
    verdict = witness_measured_times([1, 2, 2], d=2)
    assert verdict.verdict == "CONSISTENT"
    qubit = verdict.reports["qubit_triangle"]["details"]
    assert qubit["lt_margin"] == 0
    assert qubit["longitudinal_index"] == 0
    assert qubit["longitudinal_time"] == 1
    assert qubit["transverse_time"] == 2


def test_witness_inconsistent_qubit():
    verdict = witness_measured_times([0.1, 2, 2], d=2)
    assert verdict.verdict == "INCONSISTENT"
    assert not verdict.consistent
    assert {v.constraint for v in verdict.violations} == {
        "main_bound",
        "half_sum_bound",
        "qubit_triangle",
    }
    assert all(v.margin < 0 for v in verdict.violations)


def test_witness_qutrit_equal_times():
    verdict = witness_measured_times([1.0] * 8, d=3)
    assert verdict.verdict == "CONSISTENT"
    assert set(verdict.reports) == {"main_bound", "half_sum_bound"}


def test_witness_all_infinite_times():
    verdict = witness_measured_times(["inf", float("inf"), "+inf"], d=2)
    assert verdict.verdict == "INDETERMINATE"
    assert verdict.rates == [0, 0, 0]


def test_witness_on_rates_matches_times():
    by_rates = witness_measured_rates([10, 0.5, 0.5], d=2)
    by_times = witness_measured_times([0.1, 2, 2], d=2)
    assert by_rates.verdict == by_times.verdict
    assert by_rates.violations == by_times.violations


def test_witness_scale_invariance():
    a = witness_measured_times([1, 1.5, 2], d=2)
    b = witness_measured_times([1e-6, 1.5e-6, 2e-6], d=2)
    assert a.verdict == b.verdict == "CONSISTENT"
    a = witness_measured_times([1, 2, 2.5], d=2)
    b = witness_measured_times([1e-6, 2e-6, 2.5e-6], d=2)
    assert a.verdict == b.verdict == "INCONSISTENT"
    assert [v.constraint for v in a.violations] == [v.constraint for v in b.violations]


@pytest.mark.parametrize(
    "times, d",
    [([1, 2], 2), ([1, 2, 3, 4], 2), ([0, 1, 1], 2), ([-1, 1, 1], 2), (["x", 1, 1], 2), ([np.nan, 1, 1], 2)],
)
def test_witness_rejects_bad_times(times, d):
    with pytest.raises(errors.InvalidTimeError):
        witness_measured_times(times, d)


def test_witness_rejects_bad_dimension():
    with pytest.raises(errors.InvalidDimensionError):
        witness_measured_times([], 1)


def test_witness_rejects_negative_tolerance():
    with pytest.raises(errors.SchemaError):
        witness_measured_times([1, 1, 1], 2, tolerance=-1.0)


def test_constraints_for_dimension():
    assert set(constraints_for_dimension(2)) == {"main_bound", "half_sum_bound", "qubit_triangle"}
    assert "qubit_triangle" not in constraints_for_dimension(4)


def test_projection_keeps_consistent_rates():
    r = rates(1, 2, 2)
    assert nearest_consistent_rates(r) is r


def test_projection_onto_single_facet():
    y = np.array([10.0, 1.0, 1.0])
    g = np.array([SQRT2 - 1, -1, -1])
    expected = y - (g @ y) / (g @ g) * g
    projected = nearest_consistent_rates(rates(*y))
    assert projected.source == "projected"
    np.testing.assert_allclose(projected.rates, expected, atol=1e-9)
    assert check_main_theorem(projected).margins[0] == pytest.approx(0, abs=1e-9)


def test_projection_spreads_a_single_rate():
    y = np.zeros(8)
    y[0] = 1.0
    projected = nearest_consistent_rates(RateSet(d=3, rates=y)).rates
    assert np.all(projected[1:] > 0)
    np.testing.assert_allclose(projected[1:], projected[1], atol=1e-12)
    assert projected.sum() == pytest.approx(bound_constant(3) * projected[0], abs=1e-9)


rate_vectors = st.lists(st.floats(0, 50), min_size=3, max_size=3)


@settings(deadline=None, max_examples=50)
@given(rate_vectors, rate_vectors)
def test_projection_is_idempotent_and_nonexpansive(a, b):
    pa = nearest_consistent_rates(rates(*a))
    pb = nearest_consistent_rates(rates(*b))
    assert np.all(constraint_matrix(2) @ pa.rates <= 1e-8 * max(1.0, pa.total))
    np.testing.assert_allclose(nearest_consistent_rates(pa).rates, pa.rates, atol=1e-8)
    assert np.linalg.norm(pa.rates - pb.rates) <= np.linalg.norm(np.subtract(a, b)) + 1e-7
