import os.path as osp

import numpy as np
import pytest

from relaxcheck.ensemble import EnsembleConfig, sample_generator
from relaxcheck.generator import families
from relaxcheck.utils import get_docs_dir

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PLUS = np.full((2, 2), 0.5, dtype=np.complex128)

EXAMPLES_DIR = osp.join(get_docs_dir(), "examples")


def example_path(name: str) -> str:
    return osp.join(EXAMPLES_DIR, name)


def random_generator(d: int, index: int = 0, seed: int = 11, **kwargs):
    return sample_generator(EnsembleConfig(d=d, seed=seed, **kwargs), index)


def random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = X @ X.conj().T
    return rho / np.trace(rho)


@pytest.fixture
def dephasing():
    return families.dephasing(2)


@pytest.fixture
def depolarizing():
    return families.depolarizing(2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
