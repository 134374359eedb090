"""Entanglement dynamics of a pulsed qubit coupled to a damped oscillator.

Numerical evolution of the joint density matrix alongside closed-form
references for the maximally entangled cat ladder, participation ratios of
the reduced states, and the damped branch amplitudes.
"""

from .evolve import (
    ALL_MEASURES,
    ConvergenceReport,
    IntegratorConfig,
    Trajectory,
    convergence_check,
    evolve,
)
from .exceptions import BasisError, InvalidParameter, InvariantViolation, TruncationError
from .hilbert import DensityMatrix, FockSpace, PureState, coherent_state, thermal_density
from .measures import MeasureSet, measure_all, negativity, participation_ratio
from .model import Liouvillian, ModelParams, derive_params, pulse_unitary
from .runner import (
    Scenario,
    SweepRow,
    SweepTable,
    build_initial,
    detect_jumps,
    oracle_report,
    parse_config,
    read_sweep_csv,
    run_scenario,
    sweep_csv,
    sweep_decoherence,
    trajectory_csv,
)

__all__ = [
    "ALL_MEASURES",
    "BasisError",
    "ConvergenceReport",
    "DensityMatrix",
    "FockSpace",
    "IntegratorConfig",
    "InvalidParameter",
    "InvariantViolation",
    "Liouvillian",
    "MeasureSet",
    "ModelParams",
    "PureState",
    "Scenario",
    "SweepRow",
    "SweepTable",
    "Trajectory",
    "TruncationError",
    "build_initial",
    "coherent_state",
    "convergence_check",
    "derive_params",
    "detect_jumps",
    "evolve",
    "measure_all",
    "negativity",
    "oracle_report",
    "parse_config",
    "participation_ratio",
    "pulse_unitary",
    "read_sweep_csv",
    "run_scenario",
    "sweep_csv",
    "sweep_decoherence",
    "thermal_density",
    "trajectory_csv",
]

__version__ = "0.1.0"
