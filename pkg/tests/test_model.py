import math

import numpy as np
import pytest

from qubosc import hilbert
from qubosc.exceptions import InvalidParameter
from qubosc.hilbert import FockSpace
from qubosc.model import (
    Liouvillian,
    ModelParams,
    derive_params,
    interaction_hamiltonian,
    master_rhs,
    pulse_unitary,
)


@pytest.fixture
def params():
    return derive_params(gamma_sigma=0.3 / math.pi, gamma_r=0.2 / math.pi,
                         temperature_ratio=0.74239)


@pytest.fixture
def space():
    return FockSpace(12)


def random_density(dim, rng):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def test_derived_quantities():
    p = ModelParams()
    assert p.tau0 == math.pi
    assert p.alpha0 == pytest.approx(0.1)
    assert p.nbar_r == 0.0
    p = derive_params(temperature_ratio=0.74239)
    assert p.nbar_r == pytest.approx(0.908306, abs=1e-6)
    # qubit splitting is 2 omega0 by default, so its bath occupation is colder
    assert p.nbar_sigma == pytest.approx(1.0 / math.expm1(2 * 0.74239))


def test_derive_params_validation():
    with pytest.raises(InvalidParameter):
        derive_params(omega0=0.0)
    with pytest.raises(InvalidParameter):
        derive_params(gamma_r=-1.0)
    with pytest.raises(InvalidParameter):
        derive_params(temperature_ratio=0.0)


def reference_rhs(liou, rho, t):
    """Direct matrix-product form of the generator, for cross-checking apply()."""
    p = liou.params
    em = np.exp(-1j * p.omega0 * t)
    drive = em * liou.a_sz + np.conj(em) * liou.a_dag_sz
    out = 1j * p.alpha0 * p.omega0 * (drive @ rho - rho @ drive)

    def dissipator(op, rate):
        return rate * 0.5 * (
            2.0 * op @ rho @ op.conj().T
            - op.conj().T @ op @ rho
            - rho @ op.conj().T @ op
        )

    out += dissipator(liou.sigma_minus, (p.nbar_sigma + 1.0) * p.gamma_sigma)
    out += dissipator(liou.sigma_plus, p.nbar_sigma * p.gamma_sigma)
    out += dissipator(liou.a, (p.nbar_r + 1.0) * p.gamma_r)
    out += dissipator(liou.a_dag, p.nbar_r * p.gamma_r)
    return out


def test_fast_apply_matches_matrix_form(params, space):
    liou = Liouvillian(params, space)
    rng = np.random.default_rng(7)
    for t in (0.0, 0.37, 2.9):
        rho = random_density(space.dim, rng)
        fast = liou.rhs(rho, t)
        assert np.allclose(fast, reference_rhs(liou, rho, t), atol=1e-12)
        assert np.allclose(fast, master_rhs(liou, rho, t))


def test_drive_term_is_commutator(space):
    # with no dissipation the rhs must be -i [H(t), rho]
    liou = Liouvillian(ModelParams(), space)
    rng = np.random.default_rng(11)
    rho = random_density(space.dim, rng)
    for t in (0.1, 1.7):
        h = interaction_hamiltonian(liou, t)
        assert np.allclose(h, h.conj().T)
        assert np.allclose(liou.rhs(rho, t), -1j * (h @ rho - rho @ h), atol=1e-12)


def test_trace_preserved_for_many_random_states(params):
    space = FockSpace(6)
    liou = Liouvillian(params, space)
    rng = np.random.default_rng(3)
    worst = 0.0
    for k in range(10000):
        rho = random_density(space.dim, rng)
        worst = max(worst, abs(np.trace(liou.rhs(rho, 0.1 * k)).real))
    assert worst < 1e-12


def test_rhs_preserves_hermiticity(params, space):
    liou = Liouvillian(params, space)
    rho = random_density(space.dim, np.random.default_rng(5))
    out = liou.rhs(rho, 0.42)
    assert np.allclose(out, out.conj().T, atol=1e-12)


def test_pulse_unitary(space):
    u = pulse_unitary(space)
    assert np.allclose(u @ u.conj().T, np.eye(space.dim))
    # conjugation equals the spin-index swap used in the integrator
    rng = np.random.default_rng(9)
    rho = random_density(space.dim, rng)
    direct = u @ rho @ u.conj().T
    n = space.n_max
    swapped = rho.reshape(2, n, 2, n)[::-1, :, ::-1, :].reshape(space.dim, space.dim)
    assert np.allclose(direct, swapped, atol=1e-14)


def test_rhs_rejects_wrong_shape(params, space):
    liou = Liouvillian(params, space)
    with pytest.raises(InvalidParameter):
        liou.rhs(np.eye(5), 0.0)
