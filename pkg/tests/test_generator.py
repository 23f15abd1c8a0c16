import numpy as np
import pytest

from relaxcheck import errors
from relaxcheck.generator import (
    GKLSGenerator,
    LindbladOperator,
    Superoperator,
    adjoint_apply,
    apply_generator,
    check_adjoint_unital,
    check_hermiticity_preservation,
    decompose_lindblad,
    generator_trace,
    to_basis_matrix,
    to_superoperator,
)
from relaxcheck.generator import families
from relaxcheck.generator.assemble import superoperator_agreement
from relaxcheck.generator.loaders import parse_generator
from relaxcheck.operators import hs_inner, vectorize

from conftest import SIGMA_Z, random_generator, random_state


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_superoperator_matches_direct_action(d, rng):
    for index in range(100):
        g = random_generator(d, index)
        rho = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        assert superoperator_agreement(g, rho) <= 1e-10


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_generator_trace_is_minus_d_trace_c(d):
    g = random_generator(d)
    expected = -d * g.trace_kossakowski
    assert abs(generator_trace(g) - expected) <= 1e-10 * abs(expected)


def test_dephasing_superoperator():
    g = families.dephasing(2)
    np.testing.assert_allclose(g.kossakowski, np.diag([0, 0, 1]))
    M = to_superoperator(g).matrix
    np.testing.assert_allclose(M, np.diag([0, -1, -1, 0]), atol=1e-15)
    assert generator_trace(g) == pytest.approx(-2.0)


def test_basis_matrix_is_unitarily_equivalent(rng):
    g = random_generator(3)
    U = np.stack([vectorize.vec(F) for F in g.basis.elements], axis=1)
    M = to_superoperator(g).matrix
    np.testing.assert_allclose(to_basis_matrix(g), U.conj().T @ M @ U, atol=1e-12)
    # the row of the identity element vanishes: trace preservation
    np.testing.assert_allclose(to_basis_matrix(g)[-1], 0, atol=1e-12)


def test_hermiticity_preservation():
    assert check_hermiticity_preservation(random_generator(3)).passed
    not_hp = Superoperator(d=2, matrix=1j * np.eye(4))
    report = check_hermiticity_preservation(not_hp, trials=5)
    assert not report.passed
    assert report.max_deviation == pytest.approx(2.0)


def test_adjoint(rng):
    g = random_generator(3)
    A, B = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(2))
    assert hs_inner(adjoint_apply(g, A), B) == pytest.approx(hs_inner(A, apply_generator(g, B)))
    assert check_adjoint_unital(g) <= 1e-12


def test_lindblad_decomposition_reproduces_dissipator(rng):
    g = random_generator(3)
    decomposition = decompose_lindblad(g)
    dissipative = GKLSGenerator.create(3, np.zeros((3, 3)), g.kossakowski)
    rho = random_state(3, rng)
    np.testing.assert_allclose(
        decomposition.dissipator(rho), apply_generator(dissipative, rho), atol=1e-12
    )
    weights = decomposition.weights
    assert np.all(np.diff(weights) <= 0)
    assert weights.sum() == pytest.approx(g.trace_kossakowski)
    for L in decomposition.operators:
        assert np.linalg.norm(L) == pytest.approx(1.0)
        assert abs(np.trace(L)) <= 1e-12


def test_rank_one_sample_has_one_lindblad_term():
    g = random_generator(2, kossakowski_rank=1)
    assert len(decompose_lindblad(g).terms) == 1


def test_from_lindblad_canonical_form():
    g = GKLSGenerator.from_lindblad(
        2, np.zeros((2, 2)), [LindbladOperator(rate=0.5, operator=SIGMA_Z)]
    )
    np.testing.assert_allclose(g.kossakowski, np.diag([0, 0, 1]), atol=1e-15)
    np.testing.assert_allclose(g.hamiltonian, 0, atol=1e-15)


def test_from_lindblad_with_trace_part_matches_direct_dissipator(rng):
    L = np.array([[0.3, 1.0], [0.2j, 1.5]])
    gamma = 0.7
    g = GKLSGenerator.from_lindblad(2, np.zeros((2, 2)), [LindbladOperator(rate=gamma, operator=L)])
    rho = random_state(2, rng)
    LdL = L.conj().T @ L
    direct = gamma * (L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL))
    np.testing.assert_allclose(apply_generator(g, rho), direct, atol=1e-12)


def test_amplitude_damping_kossakowski_trace():
    g = families.amplitude_damping(3, rate=2.0)
    # two unit-norm traceless ladder operators
    assert g.trace_kossakowski == pytest.approx(4.0)


def test_invalid_generators():
    with pytest.raises(errors.NotHermitianError):
        GKLSGenerator.create(2, np.array([[0, 1], [0, 0]]), np.zeros((3, 3)))
    with pytest.raises(errors.NotCompletelyPositiveError):
        GKLSGenerator.create(2, np.zeros((2, 2)), np.diag([0, 0, -0.1]))
    with pytest.raises(errors.NotHermitianError):
        GKLSGenerator.create(2, np.zeros((2, 2)), np.triu(np.ones((3, 3))))
    with pytest.raises(errors.InvalidDimensionError):
        GKLSGenerator.create(2, np.zeros((2, 2)), np.eye(4))
    with pytest.raises(errors.InvalidRateError):
        LindbladOperator(rate=-1.0, operator=SIGMA_Z)


def test_generator_arrays_are_frozen():
    g = families.dephasing(2)
    with pytest.raises(ValueError):
        g.kossakowski[0, 0] = 1.0


def test_parse_generator_forms():
    dephasing = families.dephasing(2)
    from_c = parse_generator(dephasing.to_dict())
    np.testing.assert_array_equal(from_c.kossakowski, dephasing.kossakowski)
    from_ops = parse_generator(
        {
            "d": 2,
            "lindblad_ops": [
                {"rate": 0.5, "L": {"rows": 2, "cols": 2, "re": [[1, 0], [0, -1]]}}
            ],
        }
    )
    np.testing.assert_allclose(from_ops.kossakowski, dephasing.kossakowski, atol=1e-15)
    from_family = parse_generator({"d": 2, "family": "depolarizing", "rate": 2.0})
    np.testing.assert_allclose(from_family.kossakowski, np.eye(3))
    from_ensemble = parse_generator({"d": 3, "ensemble": {"seed": 11, "index": 0}})
    np.testing.assert_array_equal(from_ensemble.kossakowski, random_generator(3).kossakowski)


@pytest.mark.parametrize(
    "data, error",
    [
        ({"family": "dephasing"}, errors.SchemaError),
        ({"d": 2}, errors.SchemaError),
        ({"d": 2, "family": "dephasing", "C": {}}, errors.SchemaError),
        ({"d": 2, "family": "nope"}, errors.SchemaError),
        ({"d": 1, "family": "dephasing"}, errors.InvalidDimensionError),
        ({"d": 2, "C": {"rows": 2, "cols": 2, "re": [[0, 0], [0, 0]]}}, errors.InvalidDimensionError),
        ({"d": 2, "lindblad_ops": [{"rate": 1}]}, errors.SchemaError),
    ],
)
def test_parse_generator_errors(data, error):
    with pytest.raises(error):
        parse_generator(data)
