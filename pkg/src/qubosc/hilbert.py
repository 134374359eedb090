"""Truncated qubit (x) oscillator Hilbert space: elementary operators and states.

Basis conventions, shared by every module:
  - qubit basis (|up>, |down>) with sigma_z |up> = +|up>,
  - oscillator Fock states |0> ... |n_max-1>,
  - composite ordering (spin, fock) with spin slowest:
    (up,0), (up,1), ..., (down,0), (down,1), ...
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .exceptions import BasisError, InvalidParameter, InvariantViolation, TruncationError

COMPOSITE = "composite"
QUBIT = "qubit"
OSCILLATOR = "oscillator"

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-8
NORM_TOL = 1e-10
TAIL_TOL = 1e-8


@dataclass(frozen=True)
class FockSpace:
    """Oscillator truncation: Fock levels |0> ... |n_max-1|."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 2:
            raise InvalidParameter(f"n_max must be >= 2, got {self.n_max}")

    @property
    def dim(self) -> int:
        """Dimension of the composite qubit (x) oscillator space."""
        return 2 * self.n_max


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    basis: str = COMPOSITE

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", np.asarray(self.amplitudes, dtype=complex))
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvariantViolation(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.basis)


@dataclass(frozen=True)
class DensityMatrix:
    """Dense density matrix with Hermiticity/trace/positivity checked on build."""

    matrix: np.ndarray
    basis: str = COMPOSITE
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise InvalidParameter(f"density matrix must be square, got {self.matrix.shape}")
        if self.check:
            validate_density(self.matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def validate_density(mat: np.ndarray) -> None:
    """Raise InvariantViolation unless mat is Hermitian, unit-trace, PSD to tolerance."""
    herm = np.max(np.abs(mat - mat.conj().T))
    if herm > HERMITICITY_TOL:
        raise InvariantViolation(f"Hermiticity defect {herm:.3e} > {HERMITICITY_TOL}")
    tr = mat.trace()
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvariantViolation(f"trace deviation {abs(tr - 1.0):.3e} > {TRACE_TOL}")
    min_eig = np.linalg.eigvalsh(mat)[0]
    if min_eig < -POSITIVITY_TOL:
        raise InvariantViolation(f"min eigenvalue {min_eig:.3e} < -{POSITIVITY_TOL}")


def annihilation(space: FockSpace) -> np.ndarray:
    """Oscillator lowering operator a on the truncated Fock space."""
    return np.diag(np.sqrt(np.arange(1, space.n_max, dtype=float)), 1).astype(complex)


def creation(space: FockSpace) -> np.ndarray:
    return annihilation(space).conj().T


def number(space: FockSpace) -> np.ndarray:
    return np.diag(np.arange(space.n_max, dtype=float)).astype(complex)


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
    "minus": np.array([[0, 0], [1, 0]], dtype=complex),
}


def pauli(which: str) -> np.ndarray:
    """Pauli matrix in the (|up>, |down>) basis; 'minus' lowers |up> -> |down>."""
    try:
        return _PAULI[which].copy()
    except KeyError:
        raise InvalidParameter(f"unknown Pauli label {which!r}") from None


def kron(qubit_op: np.ndarray, osc_op: np.ndarray) -> np.ndarray:
    """Tensor product with the qubit as the left (slow) factor."""
    qubit_op = np.asarray(qubit_op)
    osc_op = np.asarray(osc_op)
    if qubit_op.shape != (2, 2):
        raise InvalidParameter(f"qubit factor must be 2x2, got {qubit_op.shape}")
    if osc_op.ndim != 2 or osc_op.shape[0] != osc_op.shape[1]:
        raise InvalidParameter(f"oscillator factor must be square, got {osc_op.shape}")
    return np.kron(qubit_op, osc_op).astype(complex)


def _coherent_weights(alpha: complex, n_max: int) -> np.ndarray:
    """Untruncated Poisson amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!), n < n_max."""
    c = np.empty(n_max, dtype=complex)
    c[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for k in range(1, n_max):
        c[k] = c[k - 1] * alpha / math.sqrt(k)
    return c


def _check_coherent_tail(alpha: complex, space: FockSpace) -> np.ndarray:
    c = _coherent_weights(alpha, space.n_max)
    tail = 1.0 - float(np.sum(np.abs(c) ** 2))
    if tail > TAIL_TOL:
        raise TruncationError(
            f"coherent amplitude |alpha|={abs(alpha):.3f} leaves tail mass "
            f"{tail:.3e} > {TAIL_TOL} beyond n_max={space.n_max}"
        )
    return c


def coherent_state(alpha: complex, space: FockSpace) -> PureState:
    """Coherent state |alpha>, renormalized after truncation."""
    c = _check_coherent_tail(alpha, space)
    return PureState(c / np.linalg.norm(c), basis=OSCILLATOR)


def thermal_density(nbar: float, space: FockSpace) -> DensityMatrix:
    """Thermal oscillator state with mean occupation nbar, renormalized."""
    if nbar < 0:
        raise InvalidParameter(f"nbar must be >= 0, got {nbar}")
    if nbar == 0:
        p = np.zeros(space.n_max)
        p[0] = 1.0
    else:
        ratio = nbar / (nbar + 1.0)
        tail = ratio ** space.n_max  # geometric tail fraction beyond the truncation
        if tail > TAIL_TOL:
            raise TruncationError(
                f"thermal tail {tail:.3e} > {TAIL_TOL} for nbar={nbar}, n_max={space.n_max}"
            )
        p = ratio ** np.arange(space.n_max)
        p /= p.sum()
    return DensityMatrix(np.diag(p).astype(complex), basis=OSCILLATOR)


def displacement(alpha: complex, space: FockSpace) -> np.ndarray:
    """Displacement operator exp(alpha a+ - alpha* a) on the truncated space."""
    _check_coherent_tail(alpha, space)
    a = annihilation(space)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def parity(space: FockSpace) -> np.ndarray:
    """exp(-i pi a+ a): sign (-1)^n on Fock level n."""
    return np.diag((-1.0 + 0j) ** np.arange(space.n_max))


def partial_trace(rho: DensityMatrix, keep: str) -> DensityMatrix:
    """Trace out one factor of a composite state; keep is 'qubit' or 'oscillator'."""
    if rho.basis != COMPOSITE:
        raise BasisError(f"partial_trace needs a composite state, got basis {rho.basis!r}")
    n = rho.dim // 2
    mat4 = rho.matrix.reshape(2, n, 2, n)
    if keep == QUBIT:
        red = np.trace(mat4, axis1=1, axis2=3)
        return DensityMatrix(red, basis=QUBIT, check=rho.check)
    if keep == OSCILLATOR:
        red = np.trace(mat4, axis1=0, axis2=2)
        return DensityMatrix(red, basis=OSCILLATOR, check=rho.check)
    raise BasisError(f"keep must be 'qubit' or 'oscillator', got {keep!r}")
