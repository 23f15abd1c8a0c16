"""Named generator families, registered by name for tests, examples and the CLI."""

from typing import Callable, Dict

import numpy as np

from relaxcheck.generator.datamodel import GKLSGenerator, LindbladOperator

FAMILY_REGISTRY: Dict[str, Callable[..., GKLSGenerator]] = {}


def register_family(name: str):
    def wrapper(func: Callable[..., GKLSGenerator]):
        FAMILY_REGISTRY[name] = func
        return func

    return wrapper


def get_registered_family(name: str) -> Callable[..., GKLSGenerator]:
    return FAMILY_REGISTRY[name]


def list_families():
    return sorted(FAMILY_REGISTRY)


@register_family("dephasing")
def dephasing(d: int, rate: float = 1.0, omega: float = 0.0) -> GKLSGenerator:
    """Weight `rate` on the last diagonal traceless basis element.

    For d=2 this is C = diag(0, 0, rate) on sigma_z/sqrt(2); `omega` adds a
    Hamiltonian along the same diagonal direction, H = (omega/2) sigma_z at d=2.
    """
    n = d * d - 1
    C = np.zeros((n, n))
    C[-1, -1] = rate
    diag = np.ones(d)
    diag[-1] = -(d - 1)
    H = 0.5 * omega * np.diag(diag / np.sqrt((d - 1) * d / 2))
    return GKLSGenerator.create(d, H, C)


@register_family("depolarizing")
def depolarizing(d: int, rate: float = 1.0) -> GKLSGenerator:
    """Isotropic C = (rate/2) I over all traceless elements."""
    n = d * d - 1
    return GKLSGenerator.create(d, np.zeros((d, d)), 0.5 * rate * np.eye(n))


@register_family("amplitude_damping")
def amplitude_damping(d: int, rate: float = 1.0) -> GKLSGenerator:
    """Ladder decay |k-1><k| at `rate` for every k."""
    ops = []
    for k in range(1, d):
        L = np.zeros((d, d))
        L[k - 1, k] = 1.0
        ops.append(LindbladOperator(rate=rate, operator=L))
    return GKLSGenerator.from_lindblad(d, np.zeros((d, d)), ops)


@register_family("unitary")
def unitary(d: int, rate: float = 1.0) -> GKLSGenerator:
    """C = 0 with H = (rate/2) diag(1, -1, 0, ...)."""
    H = np.zeros((d, d))
    H[0, 0], H[1, 1] = 0.5 * rate, -0.5 * rate
    return GKLSGenerator.create(d, H, np.zeros((d * d - 1, d * d - 1)))
