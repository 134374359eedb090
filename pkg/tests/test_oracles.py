import math

import numpy as np
import pytest

from qubosc import hilbert, oracles
from qubosc.hilbert import FockSpace
from qubosc.model import ModelParams, derive_params, pulse_unitary


@pytest.fixture
def params():
    return ModelParams()


@pytest.fixture
def thermal_params():
    return derive_params(temperature_ratio=0.74239)


@pytest.fixture
def damped_params():
    return derive_params(gamma_r=0.1 / math.pi, temperature_ratio=0.74239)


def test_segment_of(params):
    tau0 = params.tau0
    assert oracles.segment_of(0.0, params) == 0
    assert oracles.segment_of(0.5 * tau0, params) == 0
    assert oracles.segment_of(3.0 * tau0, params) == 3
    assert oracles.segment_of(3.0 * tau0 - 1e-13, params) == 3


def test_branch_amplitude_no_damping(params):
    tau0 = params.tau0
    # grows by 2 alpha0 per period; within a segment it traces a circle of
    # radius alpha0 around 2 n alpha0 + alpha0
    for n in (0, 1, 4):
        start = oracles.alpha_tilde_nodecoh(n * tau0, n, params)
        assert start == pytest.approx(2 * n * 0.1)
        mid = oracles.alpha_tilde_nodecoh((n + 0.5) * tau0, n, params)
        assert mid == pytest.approx(2 * n * 0.1 + 0.1 - 0.1j)
        end = oracles.alpha_tilde_nodecoh((n + 1) * tau0, n, params)
        assert end == pytest.approx(2 * (n + 1) * 0.1)


def test_branch_amplitude_damped_limits(damped_params, params):
    # zero damping reduces the damped form to the undamped one
    t = 2.6 * params.tau0
    assert oracles.alpha_tilde_decoh(t, 2, params) == pytest.approx(
        oracles.alpha_tilde_nodecoh(t, 2, params)
    )
    # with damping the stroboscopic amplitude saturates at q(1+e^-c)/(1-e^-c)
    c = 0.5 * damped_params.gamma_r * damped_params.tau0
    q = 0.1 / (1.0 - 0.5j * damped_params.gamma_r)
    limit = q * (1 + math.exp(-c)) / (1 - math.exp(-c))
    assert abs(oracles.alpha_tilde_strobe(2000, damped_params) - limit) < 1e-12
    assert abs(limit) == pytest.approx(4.0003267, abs=1e-6)
    # continuity at the segment boundary
    left = oracles.alpha_tilde_decoh(3 * damped_params.tau0, 2, damped_params)
    right = oracles.alpha_tilde_decoh(3 * damped_params.tau0, 3, damped_params)
    assert abs(left - right) < 1e-12


def test_pure_state_formulas():
    # frozen values for |alpha_tilde| = 0.2 (one period in)
    assert oracles.N_pure(0.2) == pytest.approx(0.19226038, abs=1e-7)
    assert oracles.K_pure(0.2) == pytest.approx(1.07982977, abs=1e-7)
    # values at the first pulse time in the default model
    assert oracles.N_pure(0.2) < 0.5
    assert oracles.N_pure(10.0) == pytest.approx(0.5)
    assert oracles.K_pure(10.0) == pytest.approx(2.0)
    assert oracles.N_pure(0.0) == 0.0 and oracles.K_pure(0.0) == 1.0


def test_cat_state_measures(params):
    space = FockSpace(32)
    t = 3 * params.tau0
    cat = oracles.cat_state(t, 3, params, space).density()
    from qubosc.measures import measure_all

    ms = measure_all(cat)
    a = abs(oracles.alpha_tilde_nodecoh(t, 3, params))
    assert ms.negativity == pytest.approx(oracles.N_pure(a), abs=1e-9)
    assert ms.k_r == pytest.approx(oracles.K_pure(a), abs=1e-9)
    assert ms.k_sigma == pytest.approx(oracles.K_pure(a), abs=1e-9)


def test_stroboscopic_matches_step_power(params):
    space = FockSpace(28)
    u1 = oracles.single_period_U(params, space)
    step = pulse_unitary(space) @ u1
    acc = np.eye(space.dim, dtype=complex)
    for n in range(1, 7):
        acc = step @ acc
        closed = oracles.stroboscopic_U(n, params, space)
        # compare on the physically occupied block (truncation edge differs)
        assert np.linalg.norm(acc - closed, 2) < 1e-7, f"n={n}"


def test_strobe_cat_matches_stroboscopic_propagator(params):
    space = FockSpace(28)
    vac = np.zeros(space.n_max)
    vac[0] = 1.0
    psi0 = np.concatenate([vac, vac]) / math.sqrt(2.0)
    for n in range(1, 7):
        u = oracles.stroboscopic_U(n, params, space)
        psi = u @ psi0
        cat = oracles.strobe_cat_state(n, params, space).amplitudes
        fid = abs(cat.conj() @ psi) ** 2
        assert fid == pytest.approx(1.0, abs=1e-9), f"n={n}"


def test_single_period_U_is_unitary(params):
    space = FockSpace(24)
    u1 = oracles.single_period_U(params, space)
    assert np.allclose(u1 @ u1.conj().T, np.eye(space.dim), atol=1e-9)


def test_gaussian_to_operator_closed_form():
    space = FockSpace(32)
    g = oracles.GaussianP(1.0, 0.8 - 0.3j, 0.6)
    op = oracles.gaussian_to_operator(g, space)
    assert abs(np.trace(op) - 1.0) < 1e-8
    a = hilbert.annihilation(space)
    mean = np.trace(op @ a)
    assert abs(mean - g.center) < 1e-8
    occ = np.trace(op @ hilbert.number(space)).real
    assert occ == pytest.approx(abs(g.center) ** 2 + g.width, abs=1e-7)


def test_gaussian_value_normalization():
    g = oracles.GaussianP(1.0, 0.5 + 0.5j, 0.7)
    xs = np.linspace(-6, 6, 241)
    dx = xs[1] - xs[0]
    grid = xs[:, None] + 1j * xs[None, :]
    vals = np.vectorize(g.value)(grid)
    assert abs(np.sum(vals) * dx * dx - 1.0) < 1e-6


def test_thermal_blocks_reconstruct_density(thermal_params):
    """Quadrature over all four P blocks must rebuild the stroboscopic state."""
    space = FockSpace(28)
    n = 2
    blocks = oracles.thermal_P_blocks(n, thermal_params)
    xs = np.linspace(-7, 7, 141)
    dx = xs[1] - xs[0]
    dim = space.n_max
    rebuilt = np.zeros((2, dim, 2, dim), dtype=complex)
    idx = {"uu": (0, 0), "ud": (0, 1), "du": (1, 0), "dd": (1, 1)}
    weights = hilbert._coherent_weights  # Poisson amplitudes without renormalization
    for x in xs:
        for y in xs:
            alpha = x + 1j * y
            ket = weights(alpha, dim)
            proj = np.outer(ket, ket.conj())
            for key, g in blocks.items():
                i, j = idx[key]
                rebuilt[i, :, j, :] += g.value(alpha) * proj * dx * dx
    mat = rebuilt.reshape(2 * dim, 2 * dim)
    # compare against the exact stroboscopic state built operator by operator
    direct = np.zeros_like(mat)
    for key, g in blocks.items():
        i, j = idx[key]
        if key in ("uu", "dd"):
            direct[i * dim:(i + 1) * dim, j * dim:(j + 1) * dim] = (
                oracles.gaussian_to_operator(g, space)
            )
        else:
            direct[i * dim:(i + 1) * dim, j * dim:(j + 1) * dim] = (
                rebuilt.reshape(2 * dim, 2 * dim)[i * dim:(i + 1) * dim, j * dim:(j + 1) * dim]
            )
    assert abs(np.trace(mat) - 1.0) < 1e-6
    assert np.max(np.abs(mat - mat.conj().T)) < 1e-8  # Hermitian overall
    # diagonal blocks agree with the displaced-thermal closed form
    assert np.max(np.abs(mat[:dim, :dim] - direct[:dim, :dim])) < 1e-6
    assert np.max(np.abs(mat[dim:, dim:] - direct[dim:, dim:])) < 1e-6
    # the coherence block carries the qubit off-diagonal weight
    coherence = 0.5 * math.exp(
        -8.0 * n**2 * thermal_params.alpha0**2 * (1.0 + 2.0 * thermal_params.nbar_r)
    )
    assert np.trace(mat[:dim, dim:]).real == pytest.approx(coherence, abs=1e-6)


def test_fp_green_is_normalized_gaussian(damped_params):
    t = 2.4 * damped_params.tau0
    xs = np.linspace(-8, 8, 161)
    dx = xs[1] - xs[0]
    total = 0.0
    for x in xs:
        for y in xs:
            total += oracles.fp_green(x + 1j * y, 1.2 + 0.3j, t, 2, damped_params, "up")
    assert total * dx * dx == pytest.approx(1.0, abs=1e-6)


def test_fp_propagate_matches_branch_motion(damped_params):
    """Propagating a delta at the branch center must track alpha_tilde."""
    tau0 = damped_params.tau0
    n = 3
    up0, _ = oracles.branch_centers(n * tau0, n, damped_params)
    g = oracles.GaussianP(1.0, up0, 0.0)
    t = (n + 0.7) * tau0
    moved = oracles.fp_propagate(g, t, n, damped_params, "up")
    up_t, _ = oracles.branch_centers(t, n, damped_params)
    assert abs(moved.center - up_t) < 1e-12
    assert moved.width == pytest.approx(
        damped_params.nbar_r * -math.expm1(-damped_params.gamma_r * 0.7 * tau0)
    )


def test_K_from_P_two_gaussians(thermal_params):
    a = 0.9
    nbar = thermal_params.nbar_r
    terms = [
        oracles.GaussianP(0.5, +a, nbar),
        oracles.GaussianP(0.5, -a, nbar),
    ]
    assert oracles.K_from_P(terms) == pytest.approx(oracles.K_two_gaussian(a, nbar))
    # single thermal Gaussian: K = 2 nbar + 1
    assert oracles.K_from_P([oracles.GaussianP(1.0, 0.3, nbar)]) == pytest.approx(
        2 * nbar + 1
    )


def test_thermal_participation_ratios(thermal_params):
    # frozen values at n = 3 with nbar_r = 0.908306
    assert thermal_params.nbar_r == pytest.approx(0.908306, abs=1e-6)
    expected_ks = 2.0 / (1.0 + math.exp(-16 * 9 * 0.01 * (1 + 2 * thermal_params.nbar_r)))
    assert oracles.K_sigma_thermal(3, thermal_params) == pytest.approx(expected_ks)
    assert oracles.K_sigma_thermal(3, thermal_params) == pytest.approx(1.965951, abs=1e-6)
    # stroboscopic K_r equals the general formula at t = n tau0
    t = 3 * thermal_params.tau0
    assert oracles.K_r_thermal(t, 3, thermal_params) == pytest.approx(
        oracles.K_r_thermal_strobe(3, thermal_params)
    )
    # large-n limit: 2 (1 + 2 nbar_r)
    assert oracles.K_r_thermal_strobe(50, thermal_params) == pytest.approx(
        2 * (1 + 2 * thermal_params.nbar_r), abs=1e-9
    )
    # nbar -> 0 reduces to the pure-state expression
    cold = ModelParams()
    assert oracles.K_r_thermal(t, 3, cold) == pytest.approx(
        oracles.K_pure(abs(oracles.alpha_tilde_nodecoh(t, 3, cold)))
    )


def test_K_r_decoh_limits(damped_params, thermal_params):
    t = 4.3 * damped_params.tau0
    # thermal start keeps the full thermal width at all times
    k_th = oracles.K_r_decoh(t, 4, damped_params, "thermal")
    a = abs(oracles.alpha_tilde_decoh(t, 4, damped_params))
    assert k_th == pytest.approx(oracles.K_two_gaussian(a, damped_params.nbar_r))
    # ground start begins pure (K -> 1) and stays below the thermal curve early on
    assert oracles.K_r_decoh(0.0, 0, damped_params, "ground") == pytest.approx(1.0)
    k_gr_early = oracles.K_r_decoh(0.3 * damped_params.tau0, 0, damped_params, "ground")
    assert k_gr_early < oracles.K_r_decoh(0.3 * damped_params.tau0, 0, damped_params, "thermal")
    # long-time widths coincide, so the two curves converge
    t_late = 200 * damped_params.tau0
    n_late = 200
    assert oracles.K_r_decoh(t_late, n_late, damped_params, "ground") == pytest.approx(
        oracles.K_r_decoh(t_late, n_late, damped_params, "thermal"), rel=1e-6
    )
