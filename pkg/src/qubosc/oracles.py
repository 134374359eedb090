"""Closed-form reference results used to validate the numerical engine.

Everything here is pure algebra on model parameters: coherent-branch
amplitudes, cat states, stroboscopic propagators, Gaussian quasiprobability
weights and their drift-diffusion propagation, and the participation ratios
that follow from them.  None of it touches the integrator, so agreement
between the two routes is a genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import hilbert
from .exceptions import InvalidParameter
from .hilbert import COMPOSITE, FockSpace, PureState
from .model import ModelParams

Spin = Literal["up", "down"]


def segment_of(t: float, params: ModelParams) -> int:
    """Index n of the pulse segment containing t (n*tau0 <= t < (n+1)*tau0)."""
    return int(math.floor(t / params.tau0 + 1e-12))


def _check_segment(t: float, n: int, params: ModelParams) -> float:
    delta = t - n * params.tau0
    if delta < -1e-9 or delta - params.tau0 > 1e-9:
        raise InvalidParameter(f"t={t} is not inside segment n={n}")
    return delta


def alpha_tilde_nodecoh(t: float, n: int, params: ModelParams) -> complex:
    """Coherent-branch amplitude without dissipation: 2 n a0 + a0 (1 - e^{i w0 (t - n tau0)})."""
    delta = _check_segment(t, n, params)
    a0 = params.alpha0
    return 2.0 * n * a0 + a0 * (1.0 - np.exp(1j * params.omega0 * delta))


def _drive_pole(params: ModelParams) -> complex:
    # steady response q of d(mu)/dt = -C/2 mu + i a0 w0 e^{i w0 t}
    return params.alpha0 * params.omega0 / (params.omega0 - 0.5j * params.gamma_r)


def alpha_tilde_strobe(n: int, params: ModelParams) -> complex:
    """Branch amplitude at the pulse time t = n*tau0 with oscillator damping.

    Obtained by composing the per-segment drift solution with the branch
    swap at each pulse; reduces to 2 n alpha0 when the damping vanishes.
    """
    c = 0.5 * params.gamma_r * params.tau0
    if c == 0.0:
        return 2.0 * n * params.alpha0 + 0.0j
    q = _drive_pole(params)
    return q * (1.0 + math.exp(-c)) * (1.0 - math.exp(-n * c)) / (1.0 - math.exp(-c))


def alpha_tilde_decoh(t: float, n: int, params: ModelParams) -> complex:
    """Branch amplitude with oscillator damping, any t in segment n.

    Within the segment the center obeys d(mu)/dt = -(C/2) mu + drive, so
    alpha_tilde(t) = e^{-C delta/2} (alpha_tilde_n + q) - q e^{i w0 delta}
    with q the steady drive response.  Validated against direct integration
    of the master equation; see the note on the printed closed form in the
    project records.
    """
    delta = _check_segment(t, n, params)
    if params.gamma_r == 0.0:
        return alpha_tilde_nodecoh(t, n, params)
    q = _drive_pole(params)
    at_n = alpha_tilde_strobe(n, params)
    decay = math.exp(-0.5 * params.gamma_r * delta)
    return decay * (at_n + q) - q * np.exp(1j * params.omega0 * delta)


def branch_centers(t: float, n: int, params: ModelParams) -> tuple[complex, complex]:
    """(spin-up, spin-down) coherent-branch centers at time t in segment n."""
    at = alpha_tilde_decoh(t, n, params)
    sign = (-1.0) ** n
    return (-sign * at, sign * at)


def cat_state(t: float, n: int, params: ModelParams, space: FockSpace) -> PureState:
    """Dissipation-free pure state: equal superposition of the two branches."""
    up_c, down_c = branch_centers(t, n, params)
    up = hilbert.coherent_state(up_c, space).amplitudes
    down = hilbert.coherent_state(down_c, space).amplitudes
    vec = np.concatenate([up, down]) / math.sqrt(2.0)
    return PureState(vec / np.linalg.norm(vec), basis=COMPOSITE)


def strobe_cat_state(n: int, params: ModelParams, space: FockSpace) -> PureState:
    """Cat state in the frame of stroboscopic_U at t = n*tau0.

    The composed pulse propagator carries the free oscillator rotation, so
    its branch centers are -+2 n alpha0 for every n; the rotating-frame cat
    of the master equation (cat_state) is its parity image at odd n.
    """
    beta = 2.0 * n * params.alpha0
    up = hilbert.coherent_state(-beta, space).amplitudes
    down = hilbert.coherent_state(+beta, space).amplitudes
    vec = np.concatenate([up, down]) / math.sqrt(2.0)
    return PureState(vec / np.linalg.norm(vec), basis=COMPOSITE)


def K_pure(abs_alpha_tilde: float) -> float:
    """Participation ratio of either reduction of the pure cat state."""
    return 2.0 / (1.0 + math.exp(-4.0 * abs_alpha_tilde**2))


def N_pure(abs_alpha_tilde: float) -> float:
    """Negativity of the pure cat state: sqrt(1 - e^{-4 |a|^2}) / 2."""
    return math.sqrt(-math.expm1(-4.0 * abs_alpha_tilde**2)) / 2.0


def stroboscopic_U(n: int, params: ModelParams, space: FockSpace) -> np.ndarray:
    """Closed-form propagator at t = n*tau0 (dissipation-free, pulses included).

    Equals the step-composed power (-i sigma_x U_1)^n exactly, including the
    global phase (-1)^ceil(n/2) that the branch-form expression picks up.
    """
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    beta = 2.0 * n * params.alpha0
    d_conj_sz = _displacement_sz(-beta, space)  # D+(2 n a0 sigma_z)
    phase = (-1.0) ** ((n + 1) // 2)
    if n % 2 == 0:
        return phase * d_conj_sz
    sx = hilbert.kron(hilbert.pauli("x"), np.eye(space.n_max))
    par = hilbert.kron(np.eye(2), hilbert.parity(space))
    return phase * 1j * (sx @ par @ d_conj_sz)


def single_period_U(params: ModelParams, space: FockSpace) -> np.ndarray:
    """U_1 = D(a0 sigma_z) e^{-i pi a+ a} D+(a0 sigma_z), the between-pulse step."""
    d = _displacement_sz(params.alpha0, space)
    par = hilbert.kron(np.eye(2), hilbert.parity(space))
    return d @ par @ d.conj().T


def _displacement_sz(beta: float, space: FockSpace) -> np.ndarray:
    """Spin-conditioned displacement D(beta sigma_z) = diag(D(beta), D(-beta))."""
    d = hilbert.displacement(beta, space)
    out = np.zeros((space.dim, space.dim), dtype=complex)
    nm = space.n_max
    out[:nm, :nm] = d
    out[nm:, nm:] = d.conj().T  # D(-beta) = D(beta)^+
    return out


# ---------------------------------------------------------------------------
# Gaussian quasiprobability machinery


@dataclass(frozen=True)
class GaussianP:
    """One Gaussian term of a P-function mixture.

    weight/(pi*width) * exp(-(alpha - center)(alpha* - center_bra)/width);
    center_bra defaults to conj(center).  A bra-center different from the
    conjugate encodes the analytic continuation carried by spin-coherence
    blocks; the weight may then be complex as well.
    """

    weight: complex
    center: complex
    width: float
    center_bra: complex | None = None

    def __post_init__(self):
        if self.width < 0:
            raise InvalidParameter(f"width must be >= 0, got {self.width}")

    @property
    def bra(self) -> complex:
        return np.conj(self.center) if self.center_bra is None else self.center_bra

    def value(self, alpha: complex) -> complex:
        if self.width == 0.0:
            raise InvalidParameter("pointwise value undefined for a delta (width 0)")
        arg = -(alpha - self.center) * (np.conj(alpha) - self.bra) / self.width
        return self.weight / (math.pi * self.width) * np.exp(arg)


def thermal_P_blocks(n: int, params: ModelParams) -> dict[str, GaussianP]:
    """The four spin-block P-functions at t = n*tau0, thermal start, no damping.

    Keys 'uu', 'ud', 'du', 'dd'.  The 'du' block is the Hermitian conjugate
    of 'ud' (the printed form of the du block has a garbled exponent; the
    conjugate is forced by Hermiticity of the density matrix).
    """
    nbar = params.nbar_r
    if nbar <= 0:
        raise InvalidParameter("thermal blocks need nbar_r > 0")
    a0 = params.alpha0
    sign = (-1.0) ** n
    shift = 2.0 * n * a0
    uu = GaussianP(0.5, -sign * shift, nbar)
    dd = GaussianP(0.5, +sign * shift, nbar)
    # coherence block: complete the square of the linear exponent
    # exp[(1/nbar + 2) 4 n^2 a0^2] * exp(-|a|^2/nbar) * exp(b (a - a*)),
    # b = 2 (-1)^n (1/nbar + 2) n a0
    u = 1.0 / nbar + 2.0
    b = 2.0 * sign * u * n * a0
    w = 0.5 * math.exp(4.0 * n**2 * a0**2 * u - nbar * b**2)
    ud = GaussianP(w, -nbar * b, nbar, center_bra=+nbar * b)
    du = GaussianP(np.conj(w), nbar * b, nbar, center_bra=-nbar * b)
    return {"uu": uu, "ud": ud, "du": du, "dd": dd}


def thermal_P_diagonal(t: float, n: int, params: ModelParams) -> dict[str, GaussianP]:
    """Diagonal-block P-functions at any t (thermal start, no damping)."""
    up_c, down_c = branch_centers(t, n, params)
    nbar = params.nbar_r
    return {"uu": GaussianP(0.5, up_c, nbar), "dd": GaussianP(0.5, down_c, nbar)}


def decohered_P_diagonal(
    t: float, n: int, params: ModelParams, initial: Literal["ground", "thermal"]
) -> dict[str, GaussianP]:
    """Diagonal-block P-functions under oscillator damping."""
    up_c, down_c = branch_centers(t, n, params)
    width = _mixture_width(t, params, initial)
    return {"uu": GaussianP(0.5, up_c, width), "dd": GaussianP(0.5, down_c, width)}


def _mixture_width(t: float, params: ModelParams, initial: str) -> float:
    nbar = params.nbar_r
    if initial == "thermal":
        return nbar
    if initial == "ground":
        return nbar * -math.expm1(-params.gamma_r * t)
    raise InvalidParameter(f"initial must be 'ground' or 'thermal', got {initial!r}")


def gaussian_to_operator(g: GaussianP, space: FockSpace) -> np.ndarray:
    """Fock-basis operator weight * integral P(alpha) |alpha><alpha| d^2 alpha.

    Closed form for the ordinary case center_bra == conj(center): a displaced
    thermal state.  Coherence blocks (independent bra center) are left to
    numerical quadrature in the validation tests.
    """
    if g.center_bra is not None and abs(g.center_bra - np.conj(g.center)) > 1e-12:
        raise InvalidParameter("closed form requires center_bra == conj(center)")
    if g.width == 0.0:
        base = hilbert.coherent_state(g.center, space).density().matrix
        return g.weight * base
    thermal = hilbert.thermal_density(g.width, space).matrix
    d = hilbert.displacement(g.center, space)
    return g.weight * (d @ thermal @ d.conj().T)


# ---------------------------------------------------------------------------
# drift-diffusion (Fokker-Planck) propagation between pulses


def drive_w(t: float, n: int, params: ModelParams, spin: Spin = "up") -> complex:
    """Accumulated drive displacement entering the Green's-function center.

    The kernel center is alpha_src * e^{-C delta / 2} - w(t, n tau0); here
    w = e^{-C delta/2} p(n tau0) - p(t) with p the steady drive response,
    so w(t, n tau0) = (-1)^n w(t - n tau0, 0).
    """
    delta = _check_segment(t, n, params)
    q = _drive_pole(params)
    p_now = q * np.exp(1j * params.omega0 * t)
    p_src = q * np.exp(1j * params.omega0 * n * params.tau0)
    w_up = math.exp(-0.5 * params.gamma_r * delta) * p_src - p_now
    return w_up if spin == "up" else -w_up


def fp_green(
    alpha: complex,
    alpha_src: complex,
    t: float,
    n: int,
    params: ModelParams,
    spin: Spin = "up",
) -> float:
    """Green's function of the damped driven oscillator P-function.

    Normalized Gaussian in alpha with drifted center and diffusion width
    nbar_r (1 - e^{-C (t - n tau0)}).
    """
    delta = _check_segment(t, n, params)
    if params.gamma_r <= 0 or delta <= 0:
        raise InvalidParameter("fp_green needs gamma_r > 0 and t > n*tau0")
    width = params.nbar_r * -math.expm1(-params.gamma_r * delta)
    center = alpha_src * math.exp(-0.5 * params.gamma_r * delta) - drive_w(t, n, params, spin)
    return float(
        np.exp(-abs(alpha - center) ** 2 / width).real / (math.pi * width)
    )


def fp_propagate(g: GaussianP, t: float, n: int, params: ModelParams, spin: Spin) -> GaussianP:
    """Propagate a Gaussian P term from n*tau0 to t by convolving with the kernel.

    Gaussian convolution in closed form: the center drifts, the width relaxes
    toward nbar_r, the weight is unchanged.
    """
    delta = _check_segment(t, n, params)
    decay = math.exp(-0.5 * params.gamma_r * delta)
    width = g.width * decay**2 + params.nbar_r * -math.expm1(-params.gamma_r * delta)
    center = g.center * decay - drive_w(t, n, params, spin)
    return GaussianP(g.weight, center, width)


# ---------------------------------------------------------------------------
# participation ratios from Gaussian mixtures


def K_from_P(terms: Sequence[GaussianP]) -> float:
    """Participation ratio of the state represented by a Gaussian P mixture.

    Uses the pairwise closed form Tr(rho_i rho_j) =
    w_i w_j exp(-|c_i - c_j|^2 / (s_i + s_j + 1)) / (s_i + s_j + 1).
    """
    inv_k = 0.0
    for gi in terms:
        if gi.center_bra is not None:
            raise InvalidParameter("K_from_P handles ordinary (real-width) terms only")
        for gj in terms:
            s = gi.width + gj.width + 1.0
            inv_k += (
                (gi.weight * gj.weight).real
                * math.exp(-abs(gi.center - gj.center) ** 2 / s)
                / s
            )
    return 1.0 / inv_k


def K_two_gaussian(abs_alpha_tilde: float, width: float) -> float:
    """K of an equal mixture of two Gaussians at +-alpha_tilde, common width."""
    s = 2.0 * width + 1.0
    return 2.0 * s / (1.0 + math.exp(-4.0 * abs_alpha_tilde**2 / s))


def K_sigma_thermal(n: int, params: ModelParams) -> float:
    """Qubit-side participation ratio at t = n*tau0, thermal start, no damping."""
    x = 16.0 * n**2 * params.alpha0**2 * (1.0 + 2.0 * params.nbar_r)
    return 2.0 / (1.0 + math.exp(-x))


def K_r_thermal_strobe(n: int, params: ModelParams) -> float:
    """Oscillator-side participation ratio at t = n*tau0, thermal start."""
    s = 1.0 + 2.0 * params.nbar_r
    return 2.0 * s / (1.0 + math.exp(-16.0 * n**2 * params.alpha0**2 / s))


def K_r_thermal(t: float, n: int, params: ModelParams) -> float:
    """Oscillator-side participation ratio at any t, thermal start, no damping.

    Two-Gaussian closed form with width nbar_r; carries the mixedness factor
    (1 + 2 nbar_r) so that t = n*tau0 recovers the stroboscopic expression
    and nbar_r = 0 recovers the pure-state ratio.
    """
    return K_two_gaussian(abs(alpha_tilde_nodecoh(t, n, params)), params.nbar_r)


def K_r_decoh(
    t: float, n: int, params: ModelParams, initial: Literal["ground", "thermal"]
) -> float:
    """Oscillator-side participation ratio with damping, ground or thermal start."""
    width = _mixture_width(t, params, initial)
    return K_two_gaussian(abs(alpha_tilde_decoh(t, n, params)), width)
