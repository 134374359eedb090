"""Entanglement and mixedness measures of qubit (x) oscillator states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import BasisError
from .hilbert import COMPOSITE, OSCILLATOR, QUBIT, DensityMatrix

#: eigenvalues of the partial transpose below this magnitude count as zero
EIG_ZERO_TOL = 1e-10


def partial_transpose_matrix(mat: np.ndarray) -> np.ndarray:
    """Transpose on the qubit factor of a composite matrix."""
    n = mat.shape[0] // 2
    return mat.reshape(2, n, 2, n).transpose(2, 1, 0, 3).reshape(2 * n, 2 * n)


def partial_transpose(rho: DensityMatrix) -> np.ndarray:
    if rho.basis != COMPOSITE:
        raise BasisError(f"partial transpose needs a composite state, got {rho.basis!r}")
    return partial_transpose_matrix(rho.matrix)


def negativity_matrix(mat: np.ndarray) -> float:
    """Sum of |negative eigenvalues| of the partial transpose of mat."""
    eigs = np.linalg.eigvalsh(partial_transpose_matrix(mat))
    neg = eigs[eigs < -EIG_ZERO_TOL]
    return float(-neg.sum())


def negativity(rho: DensityMatrix) -> float:
    """Entanglement negativity, (trace norm of the partial transpose - 1)/2.

    Computed as the absolute sum of negative partial-transpose eigenvalues,
    which is the same quantity for a Hermitian unit-trace matrix but far
    better conditioned than forming the literal square root.
    """
    if rho.basis != COMPOSITE:
        raise BasisError(f"negativity needs a composite state, got {rho.basis!r}")
    return negativity_matrix(rho.matrix)


def purity_matrix(mat: np.ndarray) -> float:
    # Tr(rho^2) = squared Frobenius norm for Hermitian rho
    return float(np.sum(np.abs(mat) ** 2).real)


def participation_ratio(rho_reduced: DensityMatrix) -> float:
    """Inverse purity 1/Tr(rho^2) of a reduced state."""
    if rho_reduced.basis not in (QUBIT, OSCILLATOR):
        raise BasisError(
            f"participation ratio is defined on a reduced state, got {rho_reduced.basis!r}"
        )
    return 1.0 / purity_matrix(rho_reduced.matrix)


@dataclass(frozen=True)
class MeasureSet:
    negativity: float
    k_sigma: float
    k_r: float
    purity: float


def measure_all(rho: DensityMatrix) -> MeasureSet:
    """Negativity, both participation ratios, and the composite purity."""
    if rho.basis != COMPOSITE:
        raise BasisError(f"measure_all needs a composite state, got {rho.basis!r}")
    n = rho.dim // 2
    mat4 = rho.matrix.reshape(2, n, 2, n)
    red_q = np.trace(mat4, axis1=1, axis2=3)
    red_r = np.trace(mat4, axis1=0, axis2=2)
    return MeasureSet(
        negativity=negativity_matrix(rho.matrix),
        k_sigma=1.0 / purity_matrix(red_q),
        k_r=1.0 / purity_matrix(red_r),
        purity=purity_matrix(rho.matrix),
    )
