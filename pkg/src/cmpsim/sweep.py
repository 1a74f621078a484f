"""Parameter sweeps over steady states or closed-evolution peaks.

Each grid point is computed independently from a fully resolved parameter
set, so results do not depend on execution order. Steady-state points solve
the Liouvillian kernel directly; closed-peak points run a window-converged
vacuum evolution and report peak populations plus snapshot fidelities at
the instant the target level peaks. Truncation adequacy is enforced by the
tail rule with automatic dim -> dim + 8 retries (at most 3).
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from .errors import ConfigError, TruncationError
from .fock import DEFAULT_SINGLE_MODE_DIM, SingleModeSpace, destroy, vacuum_state
from .model import SystemParams, build_effective_h, build_liouvillian
from .observables import blockade_report, mean_excitation, populations
from .solvers import (
    DEFAULT_PEAK_SAMPLES,
    DEFAULT_PEAK_WINDOW,
    DIM_RETRY_STEP,
    MAX_DIM_RETRIES,
    EvolveConfig,
    evolve_pure_converged,
    steady_state,
    truncation_check,
)

SWEEP_AXES = ("delta_plus", "omega", "g2", "kappa", "kerr")
SWEEP_MODES = ("steady-state", "closed-peak")


def linear_grid(start: float, stop: float, count: int) -> tuple:
    if count < 1:
        raise ConfigError(f"grid count must be >= 1, got {count}")
    if count == 1:
        return (float(start),)
    return tuple(np.linspace(start, stop, count))


def default_peak_config() -> EvolveConfig:
    return EvolveConfig(0.0, DEFAULT_PEAK_WINDOW, DEFAULT_PEAK_SAMPLES)


@dataclass
class SweepSpec:
    """One sweep: base parameters, swept axis, grid, solver mode, observables."""

    base: SystemParams
    axis: str
    grid: tuple
    mode: str = "steady-state"
    j_max: int | None = 5
    include_nbar: bool = True
    n_fid: int | None = None
    dim: int = DEFAULT_SINGLE_MODE_DIM
    evolve: EvolveConfig | None = None
    tail_levels: int = 3
    tail_threshold: float = 1e-8
    out_path: str | None = None

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if self.mode not in SWEEP_MODES:
            raise ConfigError(f"mode must be one of {SWEEP_MODES}, got {self.mode!r}")
        self.grid = tuple(float(v) for v in self.grid)
        if len(self.grid) == 0:
            raise ConfigError("grid must be nonempty")
        diffs = np.diff(self.grid)
        if len(diffs) and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ConfigError("grid must be strictly monotone")
        if self.j_max is None and not self.include_nbar and self.n_fid is None:
            raise ConfigError("no observables requested")
        if self.dim < 2:
            raise ConfigError(f"dim must be >= 2, got {self.dim}")

    def columns(self) -> list:
        cols = [self.axis]
        if self.j_max is not None:
            cols += [f"P{j}" for j in range(self.j_max + 1)]
        if self.include_nbar:
            cols.append("nbar")
        if self.n_fid is not None:
            cols += [f"Fp{j}" for j in range(1, self.n_fid + 1)]
        return cols


@dataclass
class SweepTable:
    """Rectangular sweep output with a provenance block."""

    columns: list
    rows: np.ndarray
    provenance: dict = field(default_factory=dict)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([f"{v:.12g}" for v in row])

    def write_json(self, path):
        payload = {
            "columns": self.columns,
            "rows": [[float(f"{v:.12g}") for v in row] for row in self.rows],
            "provenance": self.provenance,
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    def write_provenance(self, path):
        with open(path, "w") as fh:
            json.dump(self.provenance, fh, indent=2, sort_keys=True)
            fh.write("\n")


def solve_steady_point(params: SystemParams, dim: int, tail_levels: int = 3,
                       tail_threshold: float = 1e-8):
    """Steady state of the effective model with the truncation retry rule.

    Returns (state, dim_used).
    """
    for attempt in range(MAX_DIM_RETRIES + 1):
        space = SingleModeSpace(dim)
        h = build_effective_h(params, space)
        liouv = build_liouvillian(h, [(destroy(space), params.kappa)])
        try:
            state = steady_state(liouv)
        except TruncationError:
            dim += DIM_RETRY_STEP
            continue
        check = truncation_check(state, tail_levels, tail_threshold)
        if check.passed:
            return state, dim
        dim += DIM_RETRY_STEP
    raise TruncationError(
        f"tail mass above {tail_threshold:.0e} after {MAX_DIM_RETRIES} retries "
        f"(last dim {dim - DIM_RETRY_STEP})"
    )


def solve_closed_peak_point(params: SystemParams, dim: int, cfg: EvolveConfig,
                            n_target: int, tail_levels: int = 3,
                            tail_threshold: float = 1e-8):
    """Window-converged vacuum evolution with the truncation retry rule.

    Returns (trajectory, window_info, dim_used).
    """
    for attempt in range(MAX_DIM_RETRIES + 1):
        space = SingleModeSpace(dim)
        h = build_effective_h(params, space)
        traj, info = evolve_pure_converged(h, vacuum_state(space), cfg, n_target=n_target)
        check = truncation_check(traj, tail_levels, tail_threshold)
        if check.passed:
            return traj, info, dim
        dim += DIM_RETRY_STEP
    raise TruncationError(
        f"tail mass above {tail_threshold:.0e} after {MAX_DIM_RETRIES} retries "
        f"(last dim {dim - DIM_RETRY_STEP})"
    )


def _point_row(spec: SweepSpec, params: SystemParams, value: float):
    if spec.mode == "steady-state":
        state, dim_used = solve_steady_point(
            params, spec.dim, spec.tail_levels, spec.tail_threshold
        )
        probs = populations(state)
        nbar = mean_excitation(state)
        fid = np.cumsum(probs)
        extra = {"dim": dim_used}
    else:
        n_target = params.n_target
        if n_target is None:
            n_target = spec.n_fid
        if n_target is None:
            raise ConfigError("closed-peak mode needs n_target (or n_fid) set")
        cfg = spec.evolve if spec.evolve is not None else default_peak_config()
        traj, info, dim_used = solve_closed_peak_point(
            params, spec.dim, cfg, n_target, spec.tail_levels, spec.tail_threshold
        )
        peak_idx = int(traj.populations[:, n_target].argmax())
        probs = traj.populations.max(axis=0)
        nbar = float(traj.mean_excitation[peak_idx])
        fid = np.cumsum(traj.populations[peak_idx])
        extra = {"dim": dim_used, "window": info["window"]}

    row = [value]
    if spec.j_max is not None:
        padded = np.zeros(spec.j_max + 1)
        upto = min(spec.j_max + 1, probs.size)
        padded[:upto] = probs[:upto]
        row += list(padded)
    if spec.include_nbar:
        row.append(nbar)
    if spec.n_fid is not None:
        row += [float(fid[j]) for j in range(1, spec.n_fid + 1)]
    return row, extra


def run_sweep(spec: SweepSpec) -> SweepTable:
    """Execute the sweep point by point; abort identifying any failing point."""
    rows = []
    dims_used = []
    windows = []
    for value in spec.grid:
        params = replace(spec.base, **{spec.axis: float(value)})
        try:
            row, extra = _point_row(spec, params, float(value))
        except TruncationError as exc:
            raise TruncationError(f"{spec.axis}={value:.12g}: {exc}") from exc
        rows.append(row)
        dims_used.append(extra["dim"])
        if "window" in extra:
            windows.append(extra["window"])

    cfg = spec.evolve if spec.evolve is not None else (
        default_peak_config() if spec.mode == "closed-peak" else None
    )
    provenance = {
        "artifact": "cmpsim",
        "version": __version__,
        "units": "all rates in units of g; time in units of 1/g",
        "params": asdict(spec.base),
        "axis": spec.axis,
        "grid": list(spec.grid),
        "mode": spec.mode,
        "columns": spec.columns(),
        "dim_requested": spec.dim,
        "dim_used": dims_used,
        "tail_levels": spec.tail_levels,
        "tail_threshold": spec.tail_threshold,
    }
    if cfg is not None:
        provenance["evolve"] = asdict(cfg)
        provenance["windows_used"] = windows
        provenance["conventions"] = {
            "populations": "per-level maxima over the converged window",
            "nbar_and_fidelities": "snapshot at the time the target level peaks",
        }
    table = SweepTable(spec.columns(), np.asarray(rows, dtype=float), provenance)
    if spec.out_path is not None:
        table.write_csv(spec.out_path)
    return table
