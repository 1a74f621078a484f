"""Numerical cross-check of the single-mode effective model.

The full two-mode model and the effective model are evolved from vacuum
with identical drive settings, and their upper-polariton population
histories are compared level by level. The report quantifies how well the
rotating-wave reduction works for the given parameters; there is no
hard-coded pass/fail. The discrepancy shrinks as the coupling g grows
relative to K, omega and g2, and vanishes identically at K = 0 where the
two polariton modes decouple exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError
from .fock import SingleModeSpace, TwoModeSpace, expectation, vacuum_state
from .model import (
    SystemParams,
    build_effective_h,
    build_full_drive,
    build_full_h0,
    polariton_projector,
)
from .solvers import EvolveConfig, evolve_pure


@dataclass
class EffectiveModelReport:
    """Max-over-time polariton-population discrepancies, per level and overall."""

    times: np.ndarray
    effective_populations: np.ndarray
    full_populations: np.ndarray
    per_level_max_discrepancy: np.ndarray
    max_discrepancy: float
    n_total_max: int
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_total_max": self.n_total_max,
            "params": self.params,
            "max_discrepancy": self.max_discrepancy,
            "per_level_max_discrepancy": list(self.per_level_max_discrepancy),
            "t_start": float(self.times[0]),
            "t_end": float(self.times[-1]),
            "n_samples": int(len(self.times)),
        }


def validate_effective_model(
    params: SystemParams,
    n_total_max: int = 8,
    t_end: float = 1500.0,
    n_samples: int = 1501,
) -> EffectiveModelReport:
    """Evolve both models from vacuum and report the population discrepancy."""
    if n_total_max < 1:
        raise ConfigError(f"n_total_max must be >= 1, got {n_total_max}")
    if params.kerr > 0.2 * params.coupling:
        warnings.warn(
            "strong-coupling reduction assumes g >> K; "
            f"K/g = {params.kerr / params.coupling:.3g} is not small",
            stacklevel=2,
        )
    cfg = EvolveConfig(0.0, t_end, n_samples)
    levels = n_total_max + 1

    eff_space = SingleModeSpace(levels)
    eff_traj = evolve_pure(build_effective_h(params, eff_space), vacuum_state(eff_space), cfg)
    eff_pops = eff_traj.populations

    full_space = TwoModeSpace(n_total_max)
    h_full = build_full_h0(params, full_space) + build_full_drive(params, full_space)
    full_traj = evolve_pure(h_full, vacuum_state(full_space), cfg, keep_states=True)
    projectors = [polariton_projector(full_space, j) for j in range(levels)]
    full_pops = np.array(
        [[expectation(state, proj).real for proj in projectors] for state in full_traj.states]
    )

    per_level = np.abs(full_pops - eff_pops).max(axis=0)
    return EffectiveModelReport(
        times=eff_traj.times,
        effective_populations=eff_pops,
        full_populations=full_pops,
        per_level_max_discrepancy=per_level,
        max_discrepancy=float(per_level.max()),
        n_total_max=n_total_max,
        params=asdict(params),
    )
