"""Physical model builders for the driven Kerr cavity-magnon system.

All rates are expressed in units of the photon-magnon coupling g (g = 1
defines the frequency unit; time is measured in 1/g). In the frame rotating
at the drive frequency the full two-mode Hamiltonian is

    H0 = delta_c a^+a + delta_m m^+m + K (a^+a)^2 + g (a^+m + a m^+)
    Hd = omega (a^+ + a) + g2 (a^+2 + a^2)

with detunings delta = omega_mode - omega_drive. In the resonant case
(delta_c = delta_m = delta_0) the symmetric/antisymmetric polariton modes
are p_pm = (a +- m)/sqrt(2). Driving near the upper polariton and dropping
the far-detuned p_- mode yields the single-mode effective Hamiltonian

    H_eff = delta_plus n + (K/4) n^2 + (omega/sqrt(2)) (p^+ + p)
            + (g2/2) (p^+2 + p^2),      delta_plus = delta_0 + g + K/4.

The Kerr term is K (a^+a)^2 verbatim (the linear Kerr shift is absorbed
into the cavity frequency), so the drive-free effective ladder is
E_n = delta_plus n + K n^2 / 4 and the n-excitation resonance sits at
delta_plus = -n K / 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import ConfigError, SpaceMismatchError
from .fock import (
    FockOperator,
    SingleModeSpace,
    Space,
    TwoModeSpace,
    destroy,
    number_op,
)

_CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """All physical rates in units of g.

    Detunings may be given either as (delta_c, delta_m) or directly as
    delta_plus; when both are supplied they must agree through
    delta_plus = delta_0 + g + K/4 to 1e-12. n_target optionally tags the
    intended blockade order for reporting.
    """

    kerr: float = 0.0
    coupling: float = 1.0
    omega: float = 0.0
    g2: float = 0.0
    kappa: float = 0.0
    delta_c: float | None = None
    delta_m: float | None = None
    delta_plus: float | None = None
    n_target: int | None = None

    def __post_init__(self):
        if not self.coupling > 0:
            raise ConfigError(f"coupling must be > 0, got {self.coupling}")
        for name in ("kerr", "omega", "g2", "kappa"):
            value = getattr(self, name)
            if value < 0 or not np.isfinite(value):
                raise ConfigError(f"{name} must be finite and >= 0, got {value}")
        for name in ("delta_c", "delta_m", "delta_plus"):
            value = getattr(self, name)
            if value is not None and not np.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value}")
        if self.n_target is not None and self.n_target < 1:
            raise ConfigError(f"n_target must be >= 1, got {self.n_target}")
        if self.delta_plus is not None and self.delta_c is not None:
            if self.delta_c != self.delta_m:
                raise ConfigError(
                    "delta_plus given alongside non-resonant (delta_c != delta_m)"
                )
            implied = self.delta_c + self.coupling + self.kerr / 4
            if abs(implied - self.delta_plus) > _CONSISTENCY_TOL:
                raise ConfigError(
                    f"delta_plus={self.delta_plus} inconsistent with "
                    f"delta_0 + g + K/4 = {implied}"
                )

    @property
    def delta_zero(self) -> float:
        """Shared detuning of the resonant case delta_c = delta_m."""
        if self.delta_c is not None and self.delta_m is not None:
            if self.delta_c != self.delta_m:
                raise ConfigError("delta_c != delta_m: no resonant delta_0")
            return self.delta_c
        if self.delta_plus is not None:
            return self.delta_plus - self.coupling - self.kerr / 4
        raise ConfigError("no detuning given (set delta_c/delta_m or delta_plus)")

    @property
    def delta_plus_resolved(self) -> float:
        if self.delta_plus is not None:
            return self.delta_plus
        return self.delta_zero + self.coupling + self.kerr / 4


def blockade_detuning(n: int, kerr: float) -> float:
    """Effective-mode detuning -n K / 4 that zeroes the n-excitation energy."""
    if n < 1:
        raise ConfigError(f"blockade order must be >= 1, got {n}")
    return -n * kerr / 4.0


def drive_frequency_for_blockade(n: int, omega_0: float, g: float, kerr: float) -> float:
    """Drive frequency omega_0 + g + K/4 + n K/4 addressing the n-excitation ladder rung."""
    if n < 1:
        raise ConfigError(f"blockade order must be >= 1, got {n}")
    return omega_0 + g + kerr / 4.0 + n * kerr / 4.0


def _require_two_mode(space: Space) -> TwoModeSpace:
    if not isinstance(space, TwoModeSpace):
        raise ConfigError(f"expected a two-mode space, got {space}")
    return space


def _require_single_mode(space: Space) -> SingleModeSpace:
    if not isinstance(space, SingleModeSpace):
        raise ConfigError(f"expected a single-mode space, got {space}")
    return space


def build_full_h0(params: SystemParams, space: TwoModeSpace) -> FockOperator:
    """Drive-free two-mode Hamiltonian delta_c n_a + delta_m n_m + K n_a^2 + g(a^+m + am^+)."""
    _require_two_mode(space)
    dc = params.delta_c if params.delta_c is not None else params.delta_zero
    dm = params.delta_m if params.delta_m is not None else params.delta_zero
    a = destroy(space, "a")
    m = destroy(space, "m")
    na = a.dag() @ a
    nm = m.dag() @ m
    return (
        dc * na
        + dm * nm
        + params.kerr * (na @ na)
        + params.coupling * (a.dag() @ m + a @ m.dag())
    )


def build_full_drive(params: SystemParams, space: TwoModeSpace) -> FockOperator:
    """Cavity drives omega (a^+ + a) + g2 (a^+2 + a^2); the magnon mode is undriven."""
    _require_two_mode(space)
    a = destroy(space, "a")
    return params.omega * (a.dag() + a) + params.g2 * (a.dag() @ a.dag() + a @ a)


def build_effective_h(params: SystemParams, space: SingleModeSpace) -> FockOperator:
    """Single-mode effective Hamiltonian of the driven upper polariton."""
    _require_single_mode(space)
    dp = params.delta_plus_resolved
    p = destroy(space)
    n = p.dag() @ p
    return (
        dp * n
        + (params.kerr / 4.0) * (n @ n)
        + (params.omega / np.sqrt(2.0)) * (p.dag() + p)
        + (params.g2 / 2.0) * (p.dag() @ p.dag() + p @ p)
    )


@lru_cache(maxsize=None)
def _polariton_unitary_matrix(n_total_max: int) -> np.ndarray:
    space = TwoModeSpace(n_total_max)
    a = destroy(space, "a").matrix
    m = destroy(space, "m").matrix
    # 50:50 beamsplitter. The generator sign fixes the phase convention:
    # U|1,0> = (|1,0> + |0,1>)/sqrt(2), <1,0|U|1,0> = +1/sqrt(2), and
    # U^+ (p_+^+ p_+) U = a^+a is diagonal in the enumerated basis.
    gen = a @ m.conj().T - a.conj().T @ m
    return expm((np.pi / 4.0) * gen)


def polariton_unitary(space: TwoModeSpace) -> FockOperator:
    """Beamsplitter basis change between bare modes and the polariton modes.

    Block-diagonal in total excitation number since the generator conserves
    it; unitary on the truncated space with no leakage.
    """
    _require_two_mode(space)
    return FockOperator(space, _polariton_unitary_matrix(space.n_total_max).copy())


def polariton_projector(space: TwoModeSpace, j: int) -> FockOperator:
    """Projector onto the j-quanta eigenspace of the upper-polariton number operator."""
    _require_two_mode(space)
    if not 0 <= j <= space.n_total_max:
        raise ValueError(f"j={j} outside 0..{space.n_total_max}")
    u = _polariton_unitary_matrix(space.n_total_max)
    diag = np.array([1.0 if s[0] == j else 0.0 for s in space.basis_states])
    return FockOperator(space, u @ np.diag(diag).astype(complex) @ u.conj().T)


def polariton_number_op(space: TwoModeSpace) -> FockOperator:
    """Upper-polariton number operator n_+ = (n_a + n_m + a^+m + am^+)/2."""
    _require_two_mode(space)
    a = destroy(space, "a")
    m = destroy(space, "m")
    return 0.5 * (a.dag() @ a + m.dag() @ m + a.dag() @ m + a @ m.dag())


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-major (column-stacking) vectorization."""
    return rho.reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return v.reshape((dim, dim), order="F")


def trace_row(dim: int) -> np.ndarray:
    """Row vector r with r @ vec(rho) = Tr rho under column stacking."""
    row = np.zeros(dim * dim, dtype=complex)
    row[np.arange(dim) * dim + np.arange(dim)] = 1.0
    return row


@dataclass(frozen=True)
class Liouvillian:
    """Master-equation generator acting on column-stacked density matrices.

    matrix satisfies L @ vec(rho) = vec(-i[h, rho] + sum_k rate_k
    (2 c_k rho c_k^+ - rho c_k^+c_k - c_k^+c_k rho)/2).
    """

    space: Space
    matrix: np.ndarray
    collapses: tuple = field(default=())

    @property
    def dim(self) -> int:
        return self.space.size

    def has_dissipation(self) -> bool:
        return any(rate > 0 for _, rate in self.collapses)


def build_liouvillian(h: FockOperator, collapses) -> Liouvillian:
    """Assemble the Lindblad superoperator for Hamiltonian h and (operator, rate) pairs."""
    d = h.space.size
    eye = np.eye(d)
    mat = -1j * (np.kron(eye, h.matrix) - np.kron(h.matrix.T, eye))
    stored = []
    for c, rate in collapses:
        if c.space != h.space:
            raise SpaceMismatchError(f"{c.space} vs {h.space}")
        if rate < 0:
            raise ConfigError(f"collapse rate must be >= 0, got {rate}")
        cm = c.matrix
        cdc = cm.conj().T @ cm
        mat += (rate / 2.0) * (
            2.0 * np.kron(cm.conj(), cm)
            - np.kron(cdc.T, eye)
            - np.kron(eye, cdc)
        )
        stored.append((c, float(rate)))
    return Liouvillian(h.space, mat, tuple(stored))
