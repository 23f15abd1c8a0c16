"""Conversion between the Kossakowski matrix and Lindblad jump operators."""

from typing import List, Tuple

import numpy as np

from relaxcheck import errors
from relaxcheck.generator.datamodel import (
    GKLSGenerator,
    LindbladDecomposition,
    LindbladOperator,
    LindbladTerm,
    psd_threshold,
)
from relaxcheck.logger import logger
from relaxcheck.operators.basis import expand
from relaxcheck.operators.datamodel import OperatorBasis
from relaxcheck.tolerances import DEFAULT_TOLERANCES, Tolerances


def decompose_lindblad(
    g: GKLSGenerator, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> LindbladDecomposition:
    """Diagonalizes C = sum_k p_k v_k v_k^dagger and returns L_k = sum_i (v_k)_i F_i.

    Eigenvalues within the PSD threshold of zero are clamped and their terms
    dropped, so only p_k > threshold survive. Each L_k is traceless with unit
    HS norm because the v_k are unit vectors in an orthonormal traceless frame.

    Raises:
        NotCompletelyPositiveError: if C has an eigenvalue below -threshold.
    """
    C = g.kossakowski
    threshold = psd_threshold(C, tolerances)
    p, V = np.linalg.eigh((C + C.conj().T) / 2)
    if p.size and p.min() < -threshold:
        raise errors.NotCompletelyPositiveError(
            f"Kossakowski matrix has eigenvalue {p.min():.3e} below -{threshold:.3e}"
        )
    F = g.basis.traceless
    terms = []
    # eigh sorts ascending; keep the largest weights first
    for k in np.argsort(-p, kind="stable"):
        if p[k] <= threshold:
            continue
        L = np.einsum("i,iab->ab", V[:, k], F)
        terms.append(LindbladTerm(weight=float(p[k]), operator=L))
    return LindbladDecomposition(d=g.d, terms=terms)


def kossakowski_from_lindblad(
    ops: List[LindbladOperator], basis: OperatorBasis
) -> Tuple[np.ndarray, np.ndarray]:
    """Canonical (C, H correction) for sum_k gamma_k (L rho L^dagger - {L^dagger L, rho}/2).

    Each L is split as A + c I with A traceless and c = Tr L / d. The traceless
    parts give C_ij = sum_k gamma_k a_i conj(a_j) with a_i = <F_i, A>; the cross
    terms between A and c I are a commutator, absorbed into the Hamiltonian as
    dH = (i gamma / 2)(conj(c) A - c A^dagger).

    Returns:
        A Tuple of (C of shape (d²-1, d²-1), Hermitian dH of shape (d, d)).
    """
    d = basis.d
    n = d * d - 1
    C = np.zeros((n, n), dtype=np.complex128)
    dH = np.zeros((d, d), dtype=np.complex128)
    for op in ops:
        if op.rate < 0:
            raise errors.InvalidRateError(f"Lindblad rate must be >= 0, got {op.rate}")
        L = np.asarray(op.operator, dtype=np.complex128)
        if L.shape != (d, d):
            raise errors.DimensionMismatchError(
                f"Lindblad operator of shape {L.shape} does not act on d={d}"
            )
        c = np.trace(L) / d
        A = L - c * np.eye(d)
        a = expand(A, basis)[:-1]
        C += op.rate * np.outer(a, a.conj())
        dH += 0.5j * op.rate * (np.conj(c) * A - c * A.conj().T)
    if ops:
        logger.debug(f"Converted {len(ops)} Lindblad operators, Tr C = {np.trace(C).real:.6g}")
    return C, dH
