"""Scenario layer: config parsing, trajectory CSVs, decoherence sweeps, reports.

Rates in config files and sweep interfaces are quoted in units of 1/tau0,
matching the way the figure-level scenarios are usually stated; ModelParams
holds the absolute rates.
"""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from configparser import ConfigParser
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import hilbert, oracles
from .evolve import ALL_MEASURES, IntegratorConfig, Trajectory, evolve
from .exceptions import InvalidParameter
from .hilbert import COMPOSITE, DensityMatrix, FockSpace
from .model import Liouvillian, ModelParams, derive_params

WORKERS_ENV = "QUBOSC_WORKERS"

DEFAULT_MEASURES = ALL_MEASURES

_FLOAT_FMT = "%.12g"


@dataclass(frozen=True)
class Scenario:
    name: str = "scenario"
    initial: str = "ground"  # ground | thermal | coherent
    alpha: complex = 0.0
    n_max: int = 64
    params: ModelParams = field(default_factory=ModelParams)
    steps_per_period: int = 200
    samples_per_period: int = 100
    periods: float = 10.0
    pulses: bool = True
    measures: tuple[str, ...] = DEFAULT_MEASURES

    def space(self) -> FockSpace:
        return FockSpace(self.n_max)

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig.from_periods(
            self.params.tau0,
            self.periods,
            self.steps_per_period,
            self.samples_per_period,
            self.pulses,
        )


def build_initial(scenario: Scenario) -> DensityMatrix:
    """Qubit |+><+| tensored with the configured oscillator state."""
    space = scenario.space()
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    qubit = np.outer(plus, plus)
    if scenario.initial == "ground":
        osc = hilbert.coherent_state(0.0, space).density().matrix
    elif scenario.initial == "coherent":
        osc = hilbert.coherent_state(scenario.alpha, space).density().matrix
    elif scenario.initial == "thermal":
        osc = hilbert.thermal_density(scenario.params.nbar_r, space).matrix
    else:
        raise InvalidParameter(f"unknown initial state {scenario.initial!r}")
    return DensityMatrix(np.kron(qubit, osc), COMPOSITE)


def run_scenario(scenario: Scenario) -> Trajectory:
    liou = Liouvillian(scenario.params, scenario.space())
    return evolve(build_initial(scenario), liou, scenario.integrator(), scenario.measures)


def trajectory_csv(traj: Trajectory, tau0: float) -> str:
    """Deterministic CSV; times in units of tau0, 12 significant digits."""
    order = [m for m in ALL_MEASURES if m in traj.measures]
    buf = io.StringIO()
    buf.write(",".join(["t"] + order) + "\n")
    for i, t in enumerate(traj.times):
        row = [_FLOAT_FMT % (t / tau0 + 0.0)]
        row += [_FLOAT_FMT % (traj[name][i] + 0.0) for name in order]  # +0.0 kills -0
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def write_trajectory(traj: Trajectory, tau0: float, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(trajectory_csv(traj, tau0))


# ---------------------------------------------------------------------------
# decoherence sweeps


@dataclass(frozen=True)
class SweepRow:
    gamma_tau: float  # Gamma = C, in units of 1/tau0
    n_max_used: int
    negativity_max: float
    t_max: float  # in units of tau0, earliest grid time attaining the max
    converged: bool
    error: str = ""


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]


def _forecast_n_max(gamma_tau: float, scenario: Scenario) -> int:
    """Size the Fock box from the closed-form branch amplitude forecast."""
    params = _sweep_params(gamma_tau, scenario)
    peak = abs(scenario.alpha)
    for k in range(int(scenario.periods) + 1):
        t = min((k + 0.5) * params.tau0, scenario.periods * params.tau0)
        nseg = oracles.segment_of(t, params)
        peak = max(peak, abs(oracles.alpha_tilde_decoh(t, nseg, params)))
        peak = max(peak, abs(oracles.alpha_tilde_strobe(k, params)))
    peak += 2.0 * math.sqrt(max(params.nbar_r, 0.25))  # diffusion margin
    need = int(math.ceil(peak**2 + 6.0 * peak + 9.0))
    return max(scenario.n_max, ((need + 15) // 16) * 16)


def _sweep_params(gamma_tau: float, scenario: Scenario) -> ModelParams:
    rate = gamma_tau / scenario.params.tau0
    return replace(scenario.params, gamma_sigma=rate, gamma_r=rate)


def _run_sweep_row(args: tuple[float, Scenario]) -> SweepRow:
    gamma_tau, base = args
    n_max = _forecast_n_max(gamma_tau, base)
    scenario = replace(
        base,
        params=_sweep_params(gamma_tau, base),
        n_max=n_max,
        measures=("negativity",),
    )
    try:
        traj = run_scenario(scenario)
    except Exception as exc:  # per-row failure keeps the sweep going
        return SweepRow(gamma_tau, n_max, math.nan, math.nan, False, f"{type(exc).__name__}: {exc}")
    neg = traj["negativity"]
    idx = int(np.argmax(neg))  # argmax returns the earliest tie
    n_max_val = float(neg[idx])
    t_max = float(traj.times[idx] / scenario.params.tau0)
    converged = gamma_tau == 0.0 or float(neg[-1]) <= 0.99 * n_max_val
    return SweepRow(gamma_tau, n_max, n_max_val, t_max, converged)


def sweep_decoherence(
    base: Scenario,
    gamma_values: Sequence[float],
    workers: int | None = None,
) -> SweepTable:
    """Run the base scenario for each Gamma = C (units 1/tau0); ordered rows."""
    gammas = list(gamma_values)
    if any(g < 0 for g in gammas):
        raise InvalidParameter("gamma values must be >= 0")
    if sorted(gammas) != gammas:
        raise InvalidParameter("gamma values must be sorted ascending")
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    jobs = [(g, base) for g in gammas]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_sweep_row, jobs))
    else:
        rows = [_run_sweep_row(j) for j in jobs]
    return SweepTable(tuple(rows))


def sweep_csv(table: SweepTable) -> str:
    buf = io.StringIO()
    buf.write("gamma_tau,n_max,negativity_max,t_max,converged,error\n")
    for r in table.rows:
        buf.write(
            ",".join(
                [
                    _FLOAT_FMT % r.gamma_tau,
                    str(r.n_max_used),
                    _FLOAT_FMT % r.negativity_max,
                    _FLOAT_FMT % r.t_max,
                    "1" if r.converged else "0",
                    r.error.replace(",", ";"),
                ]
            )
            + "\n"
        )
    return buf.getvalue()


def read_sweep_csv(path: str) -> SweepTable:
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if header[:5] != ["gamma_tau", "n_max", "negativity_max", "t_max", "converged"]:
            raise InvalidParameter(f"not a sweep CSV: {path}")
        for line in fh:
            parts = line.rstrip("\n").split(",")
            rows.append(
                SweepRow(
                    float(parts[0]),
                    int(parts[1]),
                    float(parts[2]),
                    float(parts[3]),
                    parts[4] == "1",
                    parts[5] if len(parts) > 5 else "",
                )
            )
    return SweepTable(tuple(rows))


@dataclass(frozen=True)
class Jump:
    gamma_left: float
    gamma_right: float
    delta_t: float  # t_max change in units of tau0


def detect_jumps(table: SweepTable, threshold: float = 1.0) -> list[Jump]:
    """Adjacent converged rows whose t_max differs by more than threshold (tau0)."""
    rows = [r for r in table.rows if r.converged and not math.isnan(r.t_max)]
    out = []
    for left, right in zip(rows, rows[1:]):
        delta = right.t_max - left.t_max
        if abs(delta) > threshold:
            out.append(Jump(left.gamma_tau, right.gamma_tau, delta))
    return out


# ---------------------------------------------------------------------------
# oracle-vs-numerics report


@dataclass(frozen=True)
class OracleCheck:
    name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


def oracle_report(scenario: Scenario) -> list[OracleCheck]:
    """Compare every applicable closed form against the numerical pipeline."""
    params = scenario.params
    checks: list[OracleCheck] = []
    wanted = ("negativity", "K_r", "K_sigma")
    traj = run_scenario(replace(scenario, measures=wanted))
    tau0 = params.tau0
    segs = np.array([oracles.segment_of(t, params) for t in traj.times])
    dissipative = params.gamma_sigma > 0 or params.gamma_r > 0

    if not dissipative:
        abs_at = np.array(
            [abs(oracles.alpha_tilde_nodecoh(t, s, params)) for t, s in zip(traj.times, segs)]
        )
        if scenario.initial in ("ground", "coherent") and abs(scenario.alpha) == 0:
            neg_ref = np.array([oracles.N_pure(a) for a in abs_at])
            k_ref = np.array([oracles.K_pure(a) for a in abs_at])
            checks.append(
                OracleCheck("negativity vs pure closed form",
                            float(np.max(np.abs(traj["negativity"] - neg_ref))), 1e-5)
            )
            checks.append(
                OracleCheck("K_r vs pure closed form",
                            float(np.max(np.abs(traj["K_r"] - k_ref))), 1e-5)
            )
            space = scenario.space()
            liou = Liouvillian(params, space)
            u_err = 0.0
            fid_err = 0.0
            u1 = oracles.single_period_U(params, space)
            minus_isx = -1j * hilbert.kron(hilbert.pauli("x"), np.eye(space.n_max))
            acc = np.eye(space.dim, dtype=complex)
            psi0 = build_initial(replace(scenario, initial="ground")).matrix
            for k in range(1, 6):
                acc = minus_isx @ u1 @ acc
                u_closed = oracles.stroboscopic_U(k, params, space)
                u_err = max(u_err, float(np.linalg.norm(acc - u_closed, 2)))
                cat = oracles.strobe_cat_state(k, params, space).amplitudes
                rho_k = u_closed @ psi0 @ u_closed.conj().T
                fid_err = max(fid_err, abs(1.0 - (cat.conj() @ rho_k @ cat).real))
            checks.append(OracleCheck("stroboscopic propagator vs step power", u_err, 1e-7))
            checks.append(OracleCheck("stroboscopic cat-state fidelity defect", fid_err, 1e-7))
        if scenario.initial == "thermal":
            k_ref = np.array(
                [oracles.K_r_thermal(t, s, params) for t, s in zip(traj.times, segs)]
            )
            checks.append(
                OracleCheck("K_r vs thermal closed form",
                            float(np.max(np.abs(traj["K_r"] - k_ref))), 1e-4)
            )
            ks_dev = 0.0
            for k in range(int(scenario.periods) + 1):
                i = np.argmin(np.abs(traj.times - k * tau0))
                if abs(traj.times[i] - k * tau0) < 1e-9:
                    ks_dev = max(ks_dev, abs(traj["K_sigma"][i] - oracles.K_sigma_thermal(k, params)))
            checks.append(OracleCheck("K_sigma at pulse times vs closed form", ks_dev, 1e-4))
    elif params.gamma_sigma == 0 and params.gamma_r > 0 and scenario.initial in ("ground", "thermal"):
        k_ref = np.array(
            [
                oracles.K_r_decoh(t, s, params, scenario.initial)
                for t, s in zip(traj.times, segs)
            ]
        )
        checks.append(
            OracleCheck(f"K_r vs damped {scenario.initial} closed form",
                        float(np.max(np.abs(traj["K_r"] - k_ref))), 1e-3)
        )
    return checks


def report_text(checks: Iterable[OracleCheck]) -> str:
    lines = []
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{status}  {c.name}: max deviation {c.max_deviation:.3e} (tol {c.tolerance:g})")
    if not lines:
        lines.append("no applicable oracle comparisons for this scenario")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# config files


_SCENARIO_KEYS = {"name", "initial", "alpha", "n_max", "measures"}
_PARAM_KEYS = {"omega0", "epsilon_z", "lambda0", "gamma", "c", "temperature_ratio"}
_INTEGRATOR_KEYS = {"steps_per_period", "samples_per_period", "periods", "pulses"}


def parse_config(path: str) -> Scenario:
    """Read a key = value scenario file; unknown keys and sections are errors."""
    cp = ConfigParser(inline_comment_prefixes=("#", ";"))
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh, source=path)
    allowed = {"scenario": _SCENARIO_KEYS, "params": _PARAM_KEYS, "integrator": _INTEGRATOR_KEYS}
    for section in cp.sections():
        if section not in allowed:
            raise InvalidParameter(f"unknown config section [{section}] in {path}")
        extra = set(cp[section]) - allowed[section]
        if extra:
            raise InvalidParameter(f"unknown keys {sorted(extra)} in [{section}] of {path}")

    sc = cp["scenario"] if cp.has_section("scenario") else {}
    pa = cp["params"] if cp.has_section("params") else {}
    it = cp["integrator"] if cp.has_section("integrator") else {}

    omega0 = float(pa.get("omega0", 1.0))
    tau0 = math.pi / omega0
    tr_raw = pa.get("temperature_ratio", "inf")
    params = derive_params(
        omega0=omega0,
        epsilon_z=float(pa.get("epsilon_z", 2.0 * omega0)),
        lambda0=float(pa.get("lambda0", 0.2 * omega0)),
        gamma_sigma=float(pa.get("gamma", 0.0)) / tau0,
        gamma_r=float(pa.get("c", 0.0)) / tau0,
        temperature_ratio=float(tr_raw),
    )
    measures_raw = sc.get("measures", ",".join(DEFAULT_MEASURES)).strip()
    measures = tuple(m.strip() for m in measures_raw.split(",") if m.strip()) if measures_raw else ()
    unknown = set(measures) - set(ALL_MEASURES)
    if unknown:
        raise InvalidParameter(f"unknown measures {sorted(unknown)} in {path}")
    pulses_raw = str(it.get("pulses", "on")).lower()
    if pulses_raw not in ("on", "off", "true", "false", "1", "0"):
        raise InvalidParameter(f"pulses must be on/off, got {pulses_raw!r}")
    return Scenario(
        name=sc.get("name", "scenario"),
        initial=sc.get("initial", "ground"),
        alpha=complex(sc.get("alpha", "0")),
        n_max=int(sc.get("n_max", 64)),
        params=params,
        steps_per_period=int(it.get("steps_per_period", 200)),
        samples_per_period=int(it.get("samples_per_period", 100)),
        periods=float(it.get("periods", 10.0)),
        pulses=pulses_raw in ("on", "true", "1"),
        measures=measures,
    )
