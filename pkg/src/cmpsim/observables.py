"""Scalar diagnostics: Fock populations, mean excitation, blockade fidelity.

For two-mode states the physically interesting distribution is over the
upper-polariton quanta ("polariton" basis); the cumulative population
through level n,

    F_p(n) = sum_{j<=n} P_j,

is the blockade fidelity. For density matrices P_j = Tr(|j><j| rho), the
unique linear extension of the pure-state definition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import (
    QuantumState,
    SingleModeSpace,
    TwoModeSpace,
    expectation,
    number_op,
    projector,
)
from .model import polariton_number_op
from .solvers import Trajectory

DEFAULT_FP_TARGET_MIN = 0.9
DEFAULT_FP_BELOW_MAX = 0.5


def _state_probs(state: QuantumState) -> np.ndarray:
    if state.is_pure:
        return np.abs(state.data) ** 2
    return np.diag(state.data).real


def populations(state: QuantumState, basis: str = "fock", mode=None) -> np.ndarray:
    """Occupation distribution P_j of the selected number operator.

    Single-mode states use basis="fock" (the state's own ladder). Two-mode
    states accept basis="fock" with mode "a" or "m" (marginal occupation of
    that bare mode) or basis="polariton" for the upper-polariton quanta.
    """
    space = state.space
    if isinstance(space, SingleModeSpace):
        if basis == "polariton":
            raise ValueError("polariton basis requires a two-mode state")
        return _state_probs(state)
    if basis == "polariton":
        return np.array(
            [
                expectation(state, projector(space, j, mode="p+")).real
                for j in range(space.n_total_max + 1)
            ]
        )
    if basis != "fock":
        raise ValueError(f"unknown basis {basis!r}")
    if mode not in ("a", "m"):
        raise ValueError("two-mode fock populations need mode 'a' or 'm'")
    probs = _state_probs(state)
    sel = 0 if mode == "a" else 1
    out = np.zeros(space.n_total_max + 1)
    for i, occ in enumerate(space.basis_states):
        out[occ[sel]] += probs[i]
    return out


def mean_excitation(state: QuantumState, mode=None) -> float:
    """Expectation of the selected number operator (mode 'p+' for polaritons)."""
    space = state.space
    if isinstance(space, SingleModeSpace):
        op = number_op(space)
    elif mode in (None, "p+"):
        op = polariton_number_op(space)
    else:
        op = number_op(space, mode)
    return expectation(state, op).real


def fidelity_fp(state: QuantumState, n: int) -> float:
    """Cumulative population through level n of the state's natural ladder.

    Single-mode states sum their Fock populations; two-mode states sum
    upper-polariton populations.
    """
    space = state.space
    if not 0 <= n <= space.max_occupancy:
        raise ValueError(f"n={n} outside 0..{space.max_occupancy}")
    if isinstance(space, SingleModeSpace):
        return float(_state_probs(state)[: n + 1].sum())
    return float(populations(state, basis="polariton")[: n + 1].sum())


def trace_distance(a: QuantumState, b: QuantumState) -> float:
    """(1/2) ||rho_a - rho_b||_1."""
    if a.space != b.space:
        raise ValueError(f"{a.space} vs {b.space}")
    diff = a.density_matrix() - b.density_matrix()
    return 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum())


@dataclass
class BlockadeReport:
    """Aggregated blockade diagnostics for one state or one time window.

    For trajectories, ``populations`` holds the per-level maxima over the
    window (the "peaks"), while ``fidelities`` and ``mean_excitation`` are
    snapshots at the instant the target level peaks; ``final_populations``
    records the last sample. The success flag applies artifact-default
    thresholds F_p(n) >= 0.9 and F_p(n-1) <= 0.5 (overridable).
    """

    n_target: int
    fidelities: np.ndarray
    populations: np.ndarray
    mean_excitation: float
    source: str
    success: bool
    final_populations: np.ndarray | None = None
    peak_time: float | None = None


def _success(fidelities: np.ndarray, n: int, target_min: float, below_max: float) -> bool:
    ok_target = fidelities[n] >= target_min
    ok_below = fidelities[n - 1] <= below_max if n >= 1 else True
    return bool(ok_target and ok_below)


def blockade_report(
    obj,
    n_target: int,
    fp_target_min: float = DEFAULT_FP_TARGET_MIN,
    fp_below_max: float = DEFAULT_FP_BELOW_MAX,
) -> BlockadeReport:
    """Build a BlockadeReport from a QuantumState or a closed-evolution Trajectory."""
    if n_target < 0:
        raise ValueError(f"n_target must be >= 0, got {n_target}")
    if isinstance(obj, Trajectory):
        pops = obj.populations
        if n_target >= pops.shape[1]:
            raise ValueError(f"n_target {n_target} outside the recorded levels")
        peak_idx = int(pops[:, n_target].argmax())
        snapshot = pops[peak_idx]
        fidelities = np.cumsum(snapshot)[: n_target + 1]
        return BlockadeReport(
            n_target=n_target,
            fidelities=fidelities,
            populations=pops.max(axis=0),
            mean_excitation=float(obj.mean_excitation[peak_idx]),
            source="time-peak",
            success=_success(fidelities, n_target, fp_target_min, fp_below_max),
            final_populations=pops[-1],
            peak_time=float(obj.times[peak_idx]),
        )
    if isinstance(obj, QuantumState):
        if isinstance(obj.space, TwoModeSpace):
            probs = populations(obj, basis="polariton")
        else:
            probs = _state_probs(obj)
        if n_target >= probs.size:
            raise ValueError(f"n_target {n_target} outside the available levels")
        fidelities = np.cumsum(probs)[: n_target + 1]
        source = "steady-state" if not obj.is_pure else "time-peak"
        return BlockadeReport(
            n_target=n_target,
            fidelities=fidelities,
            populations=probs,
            mean_excitation=mean_excitation(obj),
            source=source,
            success=_success(fidelities, n_target, fp_target_min, fp_below_max),
        )
    raise TypeError(f"expected Trajectory or QuantumState, got {type(obj)!r}")
