"""Physical parameters and the interaction-picture generator of the dynamics.

Natural units hbar = 1 throughout; with the default omega0 = 1 the pulse
period is tau0 = pi and rates are naturally quoted per tau0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hilbert
from .exceptions import InvalidParameter
from .hilbert import FockSpace

#: default qubit splitting; epsilon_z * tau0 is then an integer multiple of
#: 2 pi, so the bare -i sigma_x pulse and the phase-dressed pulse coincide
#: at every pulse time.
DEFAULT_EPSILON_Z = 2.0

TRACELESS_TOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    """Constants of the qubit-oscillator-bath model.

    gamma_sigma and gamma_r are the qubit and oscillator dissipation rates;
    temperature_ratio is hbar*omega0/(k_B T), with math.inf meaning T = 0.
    """

    omega0: float = 1.0
    epsilon_z: float = DEFAULT_EPSILON_Z
    lambda0: float = 0.2
    gamma_sigma: float = 0.0
    gamma_r: float = 0.0
    temperature_ratio: float = math.inf

    @property
    def tau0(self) -> float:
        return math.pi / self.omega0

    @property
    def alpha0(self) -> float:
        return self.lambda0 / (2.0 * self.omega0)

    @property
    def nbar_r(self) -> float:
        """Mean bath occupation at the oscillator frequency."""
        if math.isinf(self.temperature_ratio):
            return 0.0
        return 1.0 / math.expm1(self.temperature_ratio)

    @property
    def nbar_sigma(self) -> float:
        """Mean bath occupation at the qubit splitting."""
        if math.isinf(self.temperature_ratio):
            return 0.0
        return 1.0 / math.expm1(self.temperature_ratio * self.epsilon_z / self.omega0)


def derive_params(
    omega0: float = 1.0,
    epsilon_z: float = DEFAULT_EPSILON_Z,
    lambda0: float = 0.2,
    gamma_sigma: float = 0.0,
    gamma_r: float = 0.0,
    temperature_ratio: float = math.inf,
) -> ModelParams:
    """Validate raw inputs and build a ModelParams."""
    if omega0 <= 0:
        raise InvalidParameter(f"omega0 must be positive, got {omega0}")
    if lambda0 < 0:
        raise InvalidParameter(f"lambda0 must be >= 0, got {lambda0}")
    if gamma_sigma < 0 or gamma_r < 0:
        raise InvalidParameter(
            f"dissipation rates must be >= 0, got {gamma_sigma}, {gamma_r}"
        )
    if temperature_ratio <= 0:
        raise InvalidParameter(
            f"temperature_ratio must be positive (or inf), got {temperature_ratio}"
        )
    return ModelParams(omega0, epsilon_z, lambda0, gamma_sigma, gamma_r, temperature_ratio)


class Liouvillian:
    """Generator of the between-pulse master equation on a truncated space.

    The pulse itself is not part of the generator; apply pulse_unitary (or
    the index flip it amounts to) at t = n*tau0.
    """

    def __init__(self, params: ModelParams, space: FockSpace):
        self.params = params
        self.space = space
        n = space.n_max
        a = hilbert.annihilation(space)
        sz = hilbert.pauli("z")
        i2 = np.eye(2, dtype=complex)
        # constant composite blocks (qubit slow factor)
        self.a = hilbert.kron(i2, a)
        self.a_dag = self.a.conj().T
        self.a_sz = hilbert.kron(sz, a)
        self.a_dag_sz = self.a_sz.conj().T
        self.sigma_plus = hilbert.kron(hilbert.pauli("plus"), np.eye(n))
        self.sigma_minus = hilbert.kron(hilbert.pauli("minus"), np.eye(n))
        # index-arithmetic precomputations for the fast apply()
        self._sq = np.sqrt(np.arange(1, n))                  # sqrt(m), m = 1..n-1
        self._sq2 = np.outer(self._sq, self._sq)             # sqrt(m m')
        self._m = np.arange(n, dtype=float)
        # diagonal of the truncated a a+: m+1 below the edge, 0 at the top level
        self._aad = np.arange(1, n + 1, dtype=float)
        self._aad[-1] = 0.0
        self._rate_sp = params.nbar_sigma * params.gamma_sigma
        self._rate_sm = (params.nbar_sigma + 1.0) * params.gamma_sigma
        self._rate_ad = params.nbar_r * params.gamma_r
        self._rate_a = (params.nbar_r + 1.0) * params.gamma_r
        # signed sqrt(m) for the drive commutator: sigma_z flips the sign on
        # the lower spin index (left factor acts on axis 0/1, right on 2/3)
        coef = 1j * params.alpha0 * params.omega0
        self._drive_l = coef * np.array([1.0, -1.0])[:, None] * self._sq[None, :]
        self._drive_r = coef * np.array([1.0, -1.0])[:, None] * self._sq[None, :]
        # off-diagonal dissipator hops and the fused diagonal decay array
        self._hop_a = self._rate_a * self._sq2                # a rho a+
        self._hop_ad = self._rate_ad * self._sq2              # a+ rho a
        osc_diag = -0.5 * (
            self._rate_a * (self._m[:, None] + self._m[None, :])
            + self._rate_ad * (self._aad[:, None] + self._aad[None, :])
        )
        spin_diag = np.zeros((2, 2))
        spin_diag -= 0.5 * self._rate_sm * (
            np.array([1.0, 0.0])[:, None] + np.array([1.0, 0.0])[None, :]
        )
        spin_diag -= 0.5 * self._rate_sp * (
            np.array([0.0, 1.0])[:, None] + np.array([0.0, 1.0])[None, :]
        )
        self._decay_diag = (
            spin_diag[:, None, :, None] + osc_diag[None, :, None, :]
        ).astype(complex)
        self._dissipative = params.gamma_r != 0.0 or params.gamma_sigma != 0.0

    def rhs(self, rho: np.ndarray, t: float) -> np.ndarray:
        """Right-hand side d(rho)/dt of the master equation at time t."""
        rho = np.asarray(rho, dtype=complex)
        d = self.space.dim
        if rho.shape != (d, d):
            raise InvalidParameter(f"expected {(d, d)} matrix, got {rho.shape}")
        n = self.space.n_max
        return self.apply(rho.reshape(2, n, 2, n), t).reshape(d, d)

    def apply(self, rho4: np.ndarray, t: float) -> np.ndarray:
        """rhs on a (2, n, 2, n)-shaped state; hot path of the integrator.

        Every term of the generator is a shift or a diagonal scaling in the
        Fock index, so the cost is O(dim^2) with no matrix products.
        """
        p = self.params
        em = np.exp(-1j * p.omega0 * t)
        ep = np.conj(em)

        # fused diagonal of all four dissipators (anticommutator halves)
        if self._dissipative:
            out = self._decay_diag * rho4
        else:
            out = np.zeros_like(rho4)

        # drive i*alpha0*omega0*[M(t), rho], M = em*(sz x a) + ep*(sz x a+)
        if p.lambda0 != 0.0:
            dl = self._drive_l[:, :, None, None]
            dr = self._drive_r[None, None, :, :]
            out[:, :-1] += (em * dl) * rho4[:, 1:]
            out[:, 1:] += (ep * dl) * rho4[:, :-1]
            out[..., 1:] -= (em * dr) * rho4[..., :-1]
            out[..., :-1] -= (ep * dr) * rho4[..., 1:]

        if p.gamma_r != 0.0:
            # (nbar_r+1) C * a rho a+  and  nbar_r C * a+ rho a
            out[:, :-1, :, :-1] += self._hop_a[None, :, None, :] * rho4[:, 1:, :, 1:]
            out[:, 1:, :, 1:] += self._hop_ad[None, :, None, :] * rho4[:, :-1, :, :-1]

        if p.gamma_sigma != 0.0:
            # (nbar_s+1) Gamma * s- rho s+  and  nbar_s Gamma * s+ rho s-
            out[1, :, 1, :] += self._rate_sm * rho4[0, :, 0, :]
            out[0, :, 0, :] += self._rate_sp * rho4[1, :, 1, :]

        return out


def master_rhs(liouvillian: Liouvillian, rho: np.ndarray, t: float) -> np.ndarray:
    """Module-level alias for Liouvillian.rhs."""
    return liouvillian.rhs(rho, t)


def pulse_unitary(space: FockSpace) -> np.ndarray:
    """The instantaneous pi pulse (-i sigma_x) x I on the composite space."""
    return hilbert.kron(-1j * hilbert.pauli("x"), np.eye(space.n_max))


def interaction_hamiltonian(liouvillian: Liouvillian, t: float) -> np.ndarray:
    """-(lambda0/2)(a e^{-i w0 t} + a+ e^{i w0 t}) sigma_z at time t."""
    p = liouvillian.params
    em = np.exp(-1j * p.omega0 * t)
    return -(p.lambda0 / 2.0) * (em * liouvillian.a_sz + np.conj(em) * liouvillian.a_dag_sz)
