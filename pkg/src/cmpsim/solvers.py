"""Time evolution, steady states and spectra with explicit accuracy contracts.

Every generator in scope is time independent, so the default propagation
("auto") uses exact spectral/exponential stepping: eigendecomposition for
hermitian Hamiltonians, a precomputed expm(L dt) step for Liouvillians.
An adaptive embedded Runge-Kutta path (DOP853 honouring the configured
rel_tol/abs_tol) is available as ``method="adaptive"`` for cross-validation;
accuracy violations raise, they are never silently degraded.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm, lstsq, solve

from .errors import ConfigError, SolverError, SpaceMismatchError, TruncationError
from .fock import (
    FockOperator,
    QuantumState,
    SingleModeSpace,
    Space,
    TwoModeSpace,
    density_state,
    pure_state,
)
from .model import Liouvillian, trace_row, unvec, vec

DEFAULT_PEAK_WINDOW = 1500.0
DEFAULT_PEAK_SAMPLES = 1501
DIM_RETRY_STEP = 8
MAX_DIM_RETRIES = 3

_NORM_DRIFT_TOL = 1e-6
_TRACE_DRIFT_TOL = 1e-8
_HERM_DRIFT_TOL = 1e-8
_POSITIVITY_ERROR_FLOOR = -1e-8
_STEADY_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class EvolveConfig:
    """Integration window and accuracy settings (time in units of 1/g)."""

    t_start: float
    t_end: float
    n_samples: int
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float | None = None

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ConfigError(f"t_end {self.t_end} must exceed t_start {self.t_start}")
        if self.n_samples < 2:
            raise ConfigError(f"n_samples must be >= 2, got {self.n_samples}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ConfigError("tolerances must be > 0")

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_samples)

    def doubled(self) -> "EvolveConfig":
        """Same start and sample spacing, twice the duration."""
        return EvolveConfig(
            self.t_start,
            self.t_start + 2.0 * (self.t_end - self.t_start),
            2 * (self.n_samples - 1) + 1,
            self.rel_tol,
            self.abs_tol,
            self.max_step,
        )


@dataclass
class Trajectory:
    """Per-sample observable records of a single evolution.

    populations holds probabilities over the space's enumerated basis (Fock
    populations for single-mode spaces, joint-occupancy probabilities for
    two-mode spaces). mean_excitation is the mode occupancy for single-mode
    spaces and the total excitation for two-mode spaces. fidelity is the
    cumulative population through level n_target (single-mode only).
    norm_trace records the pre-renormalization norm (pure) or trace
    (density) diagnostic at each sample.
    """

    times: np.ndarray
    populations: np.ndarray
    mean_excitation: np.ndarray
    norm_trace: np.ndarray
    fidelity: np.ndarray | None
    final_state: QuantumState
    states: list | None = None

    @property
    def space(self) -> Space:
        return self.final_state.space


TruncationCheck = namedtuple("TruncationCheck", ["passed", "max_tail_mass"])


def _excitation_weights(space: Space) -> np.ndarray:
    if isinstance(space, SingleModeSpace):
        return np.arange(space.dim, dtype=float)
    return np.array([na + nm for na, nm in space.basis_states], dtype=float)


def _tail_indices(space: Space, tail_levels: int) -> np.ndarray:
    if tail_levels < 1:
        raise ConfigError(f"tail_levels must be >= 1, got {tail_levels}")
    if isinstance(space, SingleModeSpace):
        lo = max(space.dim - tail_levels, 0)
        return np.arange(lo, space.dim)
    cutoff = space.n_total_max - tail_levels
    return np.array(
        [i for i, (na, nm) in enumerate(space.basis_states) if na + nm > cutoff]
    )


def _check_hermitian(h: FockOperator, tol: float = 1e-10):
    dev = np.abs(h.matrix - h.matrix.conj().T).max()
    if dev > tol:
        raise ConfigError(f"Hamiltonian not hermitian (max deviation {dev:.2e})")


def _records(space, times, pops, norm_trace, n_target, fidelity_ok=True):
    weights = _excitation_weights(space)
    mean_exc = pops @ weights
    fid = None
    if n_target is not None and fidelity_ok and isinstance(space, SingleModeSpace):
        fid = pops[:, : n_target + 1].sum(axis=1)
    return mean_exc, fid


def evolve_pure(
    h: FockOperator,
    psi0: QuantumState,
    cfg: EvolveConfig,
    method: str = "auto",
    keep_states: bool = False,
    n_target: int | None = None,
) -> Trajectory:
    """Integrate the Schroedinger equation d psi/dt = -i h psi.

    Norm drift beyond 1e-6 before the per-sample renormalization raises
    SolverError. ``method`` is "auto" (exact eigendecomposition propagator),
    "eig", or "adaptive" (DOP853 with cfg tolerances).
    """
    _check_hermitian(h)
    if psi0.space != h.space:
        raise SpaceMismatchError(f"{psi0.space} vs {h.space}")
    if not psi0.is_pure:
        raise ConfigError("evolve_pure requires a pure initial state")
    times = cfg.times()

    if method in ("auto", "eig"):
        energies, basis = np.linalg.eigh(h.matrix)
        coeffs = basis.conj().T @ psi0.data
        phases = np.exp(-1j * np.outer(energies, times - cfg.t_start))
        psis = (basis @ (phases * coeffs[:, None])).T
    elif method == "adaptive":
        sol = solve_ivp(
            lambda t, y: -1j * (h.matrix @ y),
            (cfg.t_start, cfg.t_end),
            psi0.data,
            t_eval=times,
            method="DOP853",
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
            max_step=cfg.max_step if cfg.max_step is not None else np.inf,
        )
        if not sol.success:
            raise SolverError(f"adaptive integration failed: {sol.message}")
        psis = sol.y.T
    else:
        raise ConfigError(f"unknown method {method!r}")

    norms = np.linalg.norm(psis, axis=1)
    drift = np.abs(norms - 1.0).max()
    if drift > _NORM_DRIFT_TOL:
        raise SolverError(f"norm drift {drift:.2e} exceeds {_NORM_DRIFT_TOL:.0e}")
    psis = psis / norms[:, None]

    pops = np.abs(psis) ** 2
    mean_exc, fid = _records(h.space, times, pops, norms, n_target)
    states = None
    if keep_states:
        states = [pure_state(h.space, v) for v in psis]
    return Trajectory(
        times=times,
        populations=pops,
        mean_excitation=mean_exc,
        norm_trace=norms,
        fidelity=fid,
        final_state=pure_state(h.space, psis[-1]),
        states=states,
    )


def clip_positivity(rho: np.ndarray) -> np.ndarray:
    """Symmetrize and clip tiny negative eigenvalues, renormalizing the trace.

    Eigenvalues below -1e-8 signal an inadequate truncation and raise
    TruncationError; anything in [-1e-8, 0) is clipped to 0.
    """
    rho = 0.5 * (rho + rho.conj().T)
    eigvals, eigvecs = np.linalg.eigh(rho)
    if eigvals.min() < _POSITIVITY_ERROR_FLOOR:
        raise TruncationError(
            f"negative eigenvalue {eigvals.min():.2e} below {_POSITIVITY_ERROR_FLOOR:.0e}; "
            "raise the Fock-space cutoff"
        )
    clipped = np.clip(eigvals, 0.0, None)
    rho = (eigvecs * clipped) @ eigvecs.conj().T
    return rho / np.trace(rho).real


def evolve_density(
    liouv: Liouvillian,
    rho0: QuantumState,
    cfg: EvolveConfig,
    method: str = "auto",
    keep_states: bool = False,
    n_target: int | None = None,
) -> Trajectory:
    """Integrate the vectorized master equation d vec(rho)/dt = L vec(rho).

    Trace drift beyond 1e-8 or hermiticity deviation beyond 1e-8 (before the
    per-sample symmetrization) raises SolverError. ``method`` is "auto"
    (exact expm stepping on the uniform sample grid), "expm", or "adaptive".
    A pure rho0 is promoted to its projector.
    """
    if rho0.space != liouv.space:
        raise SpaceMismatchError(f"{rho0.space} vs {liouv.space}")
    d = liouv.dim
    times = cfg.times()
    v0 = vec(rho0.density_matrix().astype(complex))

    if method in ("auto", "expm"):
        dt = times[1] - times[0]
        step = expm(liouv.matrix * dt)
        vs = np.empty((len(times), d * d), dtype=complex)
        vs[0] = v0
        for k in range(1, len(times)):
            vs[k] = step @ vs[k - 1]
    elif method == "adaptive":
        sol = solve_ivp(
            lambda t, y: liouv.matrix @ y,
            (cfg.t_start, cfg.t_end),
            v0,
            t_eval=times,
            method="DOP853",
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
            max_step=cfg.max_step if cfg.max_step is not None else np.inf,
        )
        if not sol.success:
            raise SolverError(f"adaptive integration failed: {sol.message}")
        vs = sol.y.T
    else:
        raise ConfigError(f"unknown method {method!r}")

    pops = np.empty((len(times), d))
    traces = np.empty(len(times))
    rhos = np.empty((len(times), d, d), dtype=complex)
    herm_dev = 0.0
    for k, v in enumerate(vs):
        rho = unvec(v, d)
        herm_dev = max(herm_dev, np.abs(rho - rho.conj().T).max())
        rho = 0.5 * (rho + rho.conj().T)
        tr = np.trace(rho).real
        traces[k] = tr
        rho = rho / tr
        rhos[k] = rho
        pops[k] = np.diag(rho).real
    if herm_dev > _HERM_DRIFT_TOL:
        raise SolverError(f"hermiticity drift {herm_dev:.2e} exceeds {_HERM_DRIFT_TOL:.0e}")
    trace_drift = np.abs(traces - 1.0).max()
    if trace_drift > _TRACE_DRIFT_TOL:
        raise SolverError(f"trace drift {trace_drift:.2e} exceeds {_TRACE_DRIFT_TOL:.0e}")

    mean_exc, fid = _records(liouv.space, times, pops, traces, n_target)
    states = None
    if keep_states:
        states = [density_state(liouv.space, clip_positivity(r)) for r in rhos]
    return Trajectory(
        times=times,
        populations=pops,
        mean_excitation=mean_exc,
        norm_trace=traces,
        fidelity=fid,
        final_state=density_state(liouv.space, clip_positivity(rhos[-1])),
        states=states,
    )


def evolve_pure_converged(
    h: FockOperator,
    psi0: QuantumState,
    cfg: EvolveConfig,
    peak_tol: float = 0.01,
    max_doublings: int = 4,
    method: str = "auto",
    n_target: int | None = None,
) -> tuple[Trajectory, dict]:
    """Window-converged peak extraction for closed evolutions.

    Reports the base-window trajectory once doubling the horizon raises no
    per-level population maximum by more than ``peak_tol``; otherwise the
    window is extended (up to ``max_doublings`` times).
    """
    base = evolve_pure(h, psi0, cfg, method=method, n_target=n_target)
    for doublings in range(max_doublings):
        cfg2 = cfg.doubled()
        check = evolve_pure(h, psi0, cfg2, method=method, n_target=n_target)
        increase = float(
            (check.populations.max(axis=0) - base.populations.max(axis=0)).max()
        )
        if increase <= peak_tol:
            info = {
                "window": cfg.t_end,
                "n_samples": cfg.n_samples,
                "doublings": doublings,
                "max_peak_increase": increase,
                "peak_tol": peak_tol,
            }
            return base, info
        base, cfg = check, cfg2
    raise SolverError(
        f"peak window did not converge within {max_doublings} doublings "
        f"(last increase {increase:.3f} > {peak_tol})"
    )


def steady_state(liouv: Liouvillian) -> QuantumState:
    """Solve L vec(rho) = 0 with Tr rho = 1 by trace-row replacement.

    The kernel residual must satisfy ||L vec(rho_ss)||_inf <= 1e-10; the
    output is symmetrized, eigenvalue-clipped and validated as a density
    matrix. Requires at least one nonzero decay rate.
    """
    if not liouv.has_dissipation():
        raise ConfigError("no dissipation: steady state is not unique")
    d = liouv.dim
    a = liouv.matrix.copy()
    a[0, :] = trace_row(d)
    b = np.zeros(d * d, dtype=complex)
    b[0] = 1.0
    try:
        x = solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"steady-state system singular: {exc}") from exc
    residual = np.abs(liouv.matrix @ x).max()
    if residual > _STEADY_RESIDUAL_TOL:
        # fall back to the overdetermined [L; trace] system
        stacked = np.vstack([liouv.matrix, trace_row(d)])
        rhs = np.zeros(d * d + 1, dtype=complex)
        rhs[-1] = 1.0
        x = lstsq(stacked, rhs)[0]
        residual = np.abs(liouv.matrix @ x).max()
        if residual > _STEADY_RESIDUAL_TOL:
            raise SolverError(
                f"steady-state residual {residual:.2e} exceeds "
                f"{_STEADY_RESIDUAL_TOL:.0e}; kernel may not be one-dimensional"
            )
    rho = clip_positivity(unvec(x, d))
    return density_state(liouv.space, rho)


def eigenspectrum(h: FockOperator, k: int | None = None) -> np.ndarray:
    """Ascending real eigenvalues of a hermitian operator.

    Two-mode operators that are block-diagonal in total excitation number
    are diagonalized blockwise, which is both faster and exact on block
    membership.
    """
    _check_hermitian(h)
    if isinstance(h.space, TwoModeSpace):
        labels = np.array([na + nm for na, nm in h.space.basis_states])
        off_block = 0.0
        mat = h.matrix
        for n in range(h.space.n_total_max + 1):
            inside = labels == n
            off_block = max(off_block, np.abs(mat[np.ix_(inside, ~inside)]).max(initial=0.0))
        if off_block <= 1e-12:
            vals = np.concatenate(
                [
                    np.linalg.eigvalsh(mat[np.ix_(labels == n, labels == n)])
                    for n in range(h.space.n_total_max + 1)
                ]
            )
            vals.sort()
            return vals if k is None else vals[:k]
    vals = np.linalg.eigvalsh(h.matrix)
    return vals if k is None else vals[:k]


def truncation_check(obj, tail_levels: int = 3, threshold: float = 1e-8) -> TruncationCheck:
    """Maximum population found in the top occupancy levels of a state or trajectory.

    For single-mode spaces the tail is the top ``tail_levels`` Fock levels;
    for two-mode spaces it is the top ``tail_levels`` total-excitation
    shells. Passes iff the maximum tail mass is <= threshold.
    """
    if isinstance(obj, Trajectory):
        idx = _tail_indices(obj.space, tail_levels)
        mass = float(obj.populations[:, idx].sum(axis=1).max())
    elif isinstance(obj, QuantumState):
        idx = _tail_indices(obj.space, tail_levels)
        if obj.is_pure:
            probs = np.abs(obj.data) ** 2
        else:
            probs = np.diag(obj.data).real
        mass = float(probs[idx].sum())
    else:
        raise TypeError(f"expected Trajectory or QuantumState, got {type(obj)!r}")
    return TruncationCheck(passed=mass <= threshold, max_tail_mass=mass)
