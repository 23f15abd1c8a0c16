"""Deterministic random GKLS generators.

Sample `index` of a config draws from its own Philox stream keyed by
(seed, index), so any subset of samples can be reproduced in any order and
on any number of workers.
"""

from typing import Tuple

import numpy as np

from relaxcheck.ensemble.datamodel import EnsembleConfig
from relaxcheck.generator import GKLSGenerator
from relaxcheck.generator import families
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances

RNG_NAME = "numpy.random.Philox"


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))


def rng_metadata() -> dict:
    return {"name": RNG_NAME, "numpy": np.__version__, "key": "(seed, index)"}


def crandn(shape, rng: np.random.Generator) -> np.ndarray:
    """Standard complex Gaussian entries, E|z|² = 1."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_hamiltonian(d: int, scale: float, rng: np.random.Generator) -> np.ndarray:
    """GUE matrix times `scale`."""
    X = crandn((d, d), rng)
    return scale * (X + X.conj().T) / 2


def kossakowski_from_factor(G: np.ndarray, scale: float) -> np.ndarray:
    """C = scale G G^dagger / (d²-1), PSD for any factor G with d²-1 rows."""
    C = scale * (G @ G.conj().T) / G.shape[0]
    return (C + C.conj().T) / 2


def sample_parameters(cfg: EnsembleConfig, index: int) -> Tuple[np.ndarray, np.ndarray]:
    """(H, G) for sample `index`; H is drawn before G from the same stream."""
    rng = sample_rng(cfg.seed, index)
    H = random_hamiltonian(cfg.d, cfg.hamiltonian_scale, rng)
    G = crandn((cfg.d * cfg.d - 1, cfg.rank), rng)
    return H, G


def sample_generator(
    cfg: EnsembleConfig, index: int, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> GKLSGenerator:
    H, G = sample_parameters(cfg, index)
    return GKLSGenerator.create(
        cfg.d, H, kossakowski_from_factor(G, cfg.kossakowski_scale), tolerances
    )


def special_generator(cfg: EnsembleConfig, name: str) -> GKLSGenerator:
    return families.get_registered_family(name)(cfg.d, rate=cfg.kossakowski_scale)
