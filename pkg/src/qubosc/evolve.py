"""Fixed-step integration of the master equation with instantaneous pulses.

The step size divides the pulse period exactly, so every pulse lands on a
step boundary; the pulse is applied after the step that ends at n*tau0 and
samples taken there report the post-pulse state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import BasisError, InvalidParameter, InvariantViolation, TruncationError
from .hilbert import (
    COMPOSITE,
    HERMITICITY_TOL,
    POSITIVITY_TOL,
    DensityMatrix,
    FockSpace,
)
from .model import Liouvillian

TRACE_SAMPLE_TOL = 1e-6
TOP_LEVEL_TOL = 1e-6
NEGATIVITY_BOUND_TOL = 1e-9

#: everything a sample can record; CSV columns use the same names
ALL_MEASURES = (
    "negativity",
    "K_r",
    "K_sigma",
    "purity",
    "trace_error",
    "min_eig",
    "re_a",
    "im_a",
    "sz",
)


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step schedule; dt and sample_interval must divide tau0."""

    dt: float
    sample_interval: float
    t_end: float
    pulses_enabled: bool = True

    def __post_init__(self):
        if self.dt <= 0 or self.t_end <= 0:
            raise InvalidParameter("dt and t_end must be positive")
        if self.sample_interval < self.dt - 1e-12:
            raise InvalidParameter("sample_interval must be >= dt")

    @classmethod
    def from_periods(
        cls,
        tau0: float,
        periods: float,
        steps_per_period: int = 200,
        samples_per_period: int = 100,
        pulses_enabled: bool = True,
    ) -> "IntegratorConfig":
        if steps_per_period % samples_per_period != 0:
            raise InvalidParameter("samples_per_period must divide steps_per_period")
        return cls(
            dt=tau0 / steps_per_period,
            sample_interval=tau0 / samples_per_period,
            t_end=periods * tau0,
            pulses_enabled=pulses_enabled,
        )

    def grid(self, tau0: float) -> tuple[int, int, int]:
        """(steps per period, steps per sample, total steps); validates divisibility."""
        per_period = round(tau0 / self.dt)
        if abs(per_period * self.dt - tau0) > 1e-9 * tau0:
            raise InvalidParameter("dt must divide tau0 exactly")
        stride = round(self.sample_interval / self.dt)
        if abs(stride * self.dt - self.sample_interval) > 1e-9 * self.sample_interval:
            raise InvalidParameter("sample_interval must be a multiple of dt")
        total = round(self.t_end / self.dt)
        return per_period, stride, total


@dataclass
class Trajectory:
    """Sampled measures along one evolution, plus the final state."""

    times: np.ndarray
    columns: dict[str, np.ndarray]
    final_state: DensityMatrix
    measures: tuple[str, ...] = field(default_factory=tuple)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]


def _sample(rho4: np.ndarray, t: float, n: int, wanted: set) -> dict[str, float]:
    dim = 2 * n
    mat = rho4.reshape(dim, dim)
    out: dict[str, float] = {}

    trace_error = abs(mat.trace().real - 1.0) + abs(mat.trace().imag)
    if trace_error > TRACE_SAMPLE_TOL:
        raise InvariantViolation(f"trace error {trace_error:.3e} at t={t:.4f}")
    herm = np.max(np.abs(mat - mat.conj().T))
    if herm > HERMITICITY_TOL:
        raise InvariantViolation(f"Hermiticity defect {herm:.3e} at t={t:.4f}")
    min_eig = float(np.linalg.eigvalsh(mat)[0])
    if min_eig < -POSITIVITY_TOL:
        raise InvariantViolation(
            f"min eigenvalue {min_eig:.3e} at t={t:.4f}; "
            "reduce dt or raise n_max instead of projecting"
        )
    # occupation creeping into the top two Fock levels means the box is too small
    pops = np.einsum("smsm->m", rho4).real
    top = float(pops[-2:].sum())
    if top > TOP_LEVEL_TOL:
        raise TruncationError(f"top-two Fock population {top:.3e} at t={t:.4f}")
    out["trace_error"] = trace_error
    out["min_eig"] = min_eig

    if "negativity" in wanted:
        pt = rho4.transpose(2, 1, 0, 3).reshape(dim, dim)
        eigs = np.linalg.eigvalsh(pt)
        neg = float(-eigs[eigs < -1e-10].sum())
        if neg < -NEGATIVITY_BOUND_TOL or neg > 0.5 + NEGATIVITY_BOUND_TOL:
            raise InvariantViolation(f"negativity {neg} outside [0, 1/2] at t={t:.4f}")
        out["negativity"] = neg
    if "K_r" in wanted:
        red = np.trace(rho4, axis1=0, axis2=2)
        out["K_r"] = 1.0 / float(np.sum(np.abs(red) ** 2))
    if "K_sigma" in wanted:
        red = np.trace(rho4, axis1=1, axis2=3)
        out["K_sigma"] = 1.0 / float(np.sum(np.abs(red) ** 2))
    if "purity" in wanted:
        out["purity"] = float(np.sum(np.abs(mat) ** 2))
    if "re_a" in wanted or "im_a" in wanted:
        mean_a = _mean_a(rho4, n)
        out["re_a"], out["im_a"] = mean_a.real, mean_a.imag
    if "sz" in wanted:
        red = np.trace(rho4, axis1=1, axis2=3)
        out["sz"] = float((red[0, 0] - red[1, 1]).real)
    return out


def _mean_a(rho4: np.ndarray, n: int) -> complex:
    osc = np.einsum("smsn->mn", rho4)
    sq = np.sqrt(np.arange(1, n))
    return complex(np.sum(sq * osc.diagonal(offset=-1)))


def evolve(
    rho0: DensityMatrix,
    liouvillian: Liouvillian,
    cfg: IntegratorConfig,
    measures: tuple[str, ...] = ("negativity", "K_r", "K_sigma", "purity"),
) -> Trajectory:
    """Integrate the master equation, pulsing at every multiple of tau0.

    Classic fourth-order fixed steps between pulses; the requested measures
    plus the invariant diagnostics are evaluated on the sample grid.
    """
    if rho0.basis != COMPOSITE:
        raise BasisError(f"evolve needs a composite state, got {rho0.basis!r}")
    space = liouvillian.space
    if rho0.dim != space.dim:
        raise InvalidParameter(f"state dim {rho0.dim} != space dim {space.dim}")
    unknown = set(measures) - set(ALL_MEASURES)
    if unknown:
        raise InvalidParameter(f"unknown measures {sorted(unknown)}")
    tau0 = liouvillian.params.tau0
    per_period, stride, total = cfg.grid(tau0)
    wanted = set(measures) | {"trace_error", "min_eig"}

    n = space.n_max
    rho = rho0.matrix.reshape(2, n, 2, n).astype(complex)
    dt = cfg.dt
    rhs = liouvillian.apply

    times = [0.0]
    records = [_sample(rho, 0.0, n, wanted)]
    stage = np.empty_like(rho)  # reused scratch for the RK4 stage states
    for step in range(1, total + 1):
        t = (step - 1) * dt
        k1 = rhs(rho, t)
        np.multiply(k1, 0.5 * dt, out=stage)
        stage += rho
        k2 = rhs(stage, t + 0.5 * dt)
        np.multiply(k2, 0.5 * dt, out=stage)
        stage += rho
        k3 = rhs(stage, t + 0.5 * dt)
        np.multiply(k3, dt, out=stage)
        stage += rho
        k4 = rhs(stage, t + dt)
        k2 += k3
        k2 *= 2.0
        k1 += k2
        k1 += k4
        k1 *= dt / 6.0
        rho = rho + k1
        t_now = step * dt
        if cfg.pulses_enabled and step % per_period == 0:
            # conjugation by sigma_x (x) I; the -i phases cancel on a density matrix
            rho = np.ascontiguousarray(rho[::-1, :, ::-1, :])
        if step % stride == 0:
            times.append(t_now)
            records.append(_sample(rho, t_now, n, wanted))

    columns = {
        name: np.array([r[name] for r in records])
        for name in ALL_MEASURES
        if name in records[0]
    }
    final = DensityMatrix(rho.reshape(space.dim, space.dim), COMPOSITE)
    return Trajectory(np.array(times), columns, final, tuple(measures))


@dataclass(frozen=True)
class ConvergenceReport:
    max_deviation: float
    tolerance: float
    measure: str

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


def embed_state(rho0: DensityMatrix, space: FockSpace) -> DensityMatrix:
    """Zero-pad a composite state into a larger Fock truncation."""
    n_old = rho0.dim // 2
    n_new = space.n_max
    if n_new < n_old:
        raise InvalidParameter("target space is smaller than the state")
    old4 = rho0.matrix.reshape(2, n_old, 2, n_old)
    new4 = np.zeros((2, n_new, 2, n_new), dtype=complex)
    new4[:, :n_old, :, :n_old] = old4
    return DensityMatrix(new4.reshape(2 * n_new, 2 * n_new), COMPOSITE)


def convergence_check(
    rho0: DensityMatrix,
    liouvillian: Liouvillian,
    cfg: IntegratorConfig,
    measure: str = "negativity",
    tolerance: float = 1e-5,
) -> ConvergenceReport:
    """Rerun at half dt and n_max + 16; report the worst sample-grid deviation."""
    coarse = evolve(rho0, liouvillian, cfg, measures=(measure,))
    fine_space = FockSpace(liouvillian.space.n_max + 16)
    fine_liou = Liouvillian(liouvillian.params, fine_space)
    fine_cfg = IntegratorConfig(
        dt=cfg.dt / 2.0,
        sample_interval=cfg.sample_interval,
        t_end=cfg.t_end,
        pulses_enabled=cfg.pulses_enabled,
    )
    fine = evolve(embed_state(rho0, fine_space), fine_liou, fine_cfg, measures=(measure,))
    dev = float(np.max(np.abs(coarse[measure] - fine[measure])))
    return ConvergenceReport(dev, tolerance, measure)
