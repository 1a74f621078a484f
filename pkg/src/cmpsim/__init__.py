"""Driven Kerr-nonlinear cavity-magnon polariton blockade simulator."""

__version__ = "0.1.0"

from .errors import ConfigError, SolverError, SpaceMismatchError, TruncationError
from .fock import (
    DEFAULT_SINGLE_MODE_DIM,
    FockOperator,
    QuantumState,
    SingleModeSpace,
    TwoModeSpace,
    basis_state,
    dag,
    density_state,
    destroy,
    expectation,
    identity_op,
    number_op,
    projector,
    pure_state,
    vacuum_state,
)
from .model import (
    Liouvillian,
    SystemParams,
    blockade_detuning,
    build_effective_h,
    build_full_drive,
    build_full_h0,
    build_liouvillian,
    drive_frequency_for_blockade,
    polariton_number_op,
    polariton_projector,
    polariton_unitary,
)
from .observables import (
    BlockadeReport,
    blockade_report,
    fidelity_fp,
    mean_excitation,
    populations,
    trace_distance,
)
from .solvers import (
    EvolveConfig,
    Trajectory,
    eigenspectrum,
    evolve_density,
    evolve_pure,
    evolve_pure_converged,
    steady_state,
    truncation_check,
)
from .sweep import SweepSpec, SweepTable, linear_grid, run_sweep
from .figures import FIGURE_IDS, reproduce_all, reproduce_figure
from .validate import EffectiveModelReport, validate_effective_model

__all__ = [
    "__version__",
    "ConfigError",
    "SolverError",
    "SpaceMismatchError",
    "TruncationError",
    "DEFAULT_SINGLE_MODE_DIM",
    "FockOperator",
    "QuantumState",
    "SingleModeSpace",
    "TwoModeSpace",
    "basis_state",
    "dag",
    "density_state",
    "destroy",
    "expectation",
    "identity_op",
    "number_op",
    "projector",
    "pure_state",
    "vacuum_state",
    "Liouvillian",
    "SystemParams",
    "blockade_detuning",
    "build_effective_h",
    "build_full_drive",
    "build_full_h0",
    "build_liouvillian",
    "drive_frequency_for_blockade",
    "polariton_number_op",
    "polariton_projector",
    "polariton_unitary",
    "BlockadeReport",
    "blockade_report",
    "fidelity_fp",
    "mean_excitation",
    "populations",
    "trace_distance",
    "EvolveConfig",
    "Trajectory",
    "eigenspectrum",
    "evolve_density",
    "evolve_pure",
    "evolve_pure_converged",
    "steady_state",
    "truncation_check",
    "SweepSpec",
    "SweepTable",
    "linear_grid",
    "run_sweep",
    "FIGURE_IDS",
    "reproduce_all",
    "reproduce_figure",
    "EffectiveModelReport",
    "validate_effective_model",
]
