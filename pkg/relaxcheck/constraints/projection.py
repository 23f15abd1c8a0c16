import numpy as np
from scipy.optimize import nnls

from relaxcheck.constraints.checks import bound_constant
from relaxcheck.constraints.datamodel import RateSet
from relaxcheck.logger import logger


def constraint_matrix(d: int) -> np.ndarray:
    """Rows g with g . Gamma <= 0 describing the consistent cone.

    The first n rows encode Gamma_alpha >= 0, the next n encode
    (d/sqrt(2)) Gamma_alpha - sum(Gamma) <= 0.
    """
    n = d * d - 1
    eye = np.eye(n)
    return np.vstack([-eye, bound_constant(d) * eye - np.ones((n, n))])


def nearest_consistent_rates(r: RateSet) -> RateSet:
    """Euclidean projection of the rate vector onto the consistent cone.

    Uses the polar decomposition y = P(y) + G^T lam with lam = argmin_{lam >= 0}
    ||G^T lam - y||, solved by the Lawson-Hanson active-set method.
    """
    y = r.rates.astype(np.float64)
    G = constraint_matrix(r.d)
    if np.all(G @ y <= 0):
        return r
    lam, _ = nnls(G.T, y, maxiter=50 * G.shape[0])
    x = y - G.T @ lam
    # round-off can leave entries a few ulps below zero
    x = np.maximum(x, 0.0)
    logger.debug(
        f"Projected rates onto the consistent cone: moved {np.linalg.norm(x - y):.6g}, "
        f"{int(np.sum(lam > 0))} active constraints"
    )
    return RateSet(d=r.d, rates=x, source="projected")
