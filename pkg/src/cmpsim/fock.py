"""Truncated Fock-space linear algebra: spaces, operators, and states.

Two kinds of Hilbert space are supported:

* ``SingleModeSpace(dim)`` -- one bosonic mode truncated to occupations
  0..dim-1.
* ``TwoModeSpace(n_total_max)`` -- two bosonic modes (labelled ``a`` and
  ``m``) truncated by *total* excitation number, n_a + n_m <= n_total_max.
  The basis is enumerated in a fixed order: lexicographic in
  (N = n_a + n_m, n_a), i.e. (0,0), (0,1), (1,0), (0,2), (1,1), (2,0), ...
  Total-N truncation keeps every N-conserving Hamiltonian exactly
  block-diagonal, so there is no truncation leakage inside a block.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import SpaceMismatchError

DEFAULT_SINGLE_MODE_DIM = 21


@dataclass(frozen=True)
class SingleModeSpace:
    """Single bosonic mode with Fock basis |0>..|dim-1>."""

    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"single-mode dim must be >= 2, got {self.dim}")

    @property
    def size(self) -> int:
        return self.dim

    @property
    def max_occupancy(self) -> int:
        return self.dim - 1


@dataclass(frozen=True)
class TwoModeSpace:
    """Two bosonic modes truncated by total excitation n_a + n_m <= n_total_max."""

    n_total_max: int

    def __post_init__(self):
        if self.n_total_max < 1:
            raise ValueError(f"n_total_max must be >= 1, got {self.n_total_max}")

    @property
    def size(self) -> int:
        n = self.n_total_max
        return (n + 1) * (n + 2) // 2

    @property
    def max_occupancy(self) -> int:
        return self.n_total_max

    @property
    def basis_states(self) -> tuple:
        """Basis as (n_a, n_m) tuples in the documented enumeration order."""
        return _two_mode_basis(self.n_total_max)


Space = Union[SingleModeSpace, TwoModeSpace]


@lru_cache(maxsize=None)
def _two_mode_basis(n_total_max: int) -> tuple:
    return tuple(
        (na, big_n - na) for big_n in range(n_total_max + 1) for na in range(big_n + 1)
    )


@lru_cache(maxsize=None)
def _two_mode_index(n_total_max: int) -> dict:
    return {s: i for i, s in enumerate(_two_mode_basis(n_total_max))}


def basis_index(space: Space, occupancy) -> int:
    """Index of a basis state: an int for single-mode, an (n_a, n_m) pair for two-mode."""
    if isinstance(space, SingleModeSpace):
        n = int(occupancy)
        if not 0 <= n < space.dim:
            raise ValueError(f"occupancy {n} outside 0..{space.dim - 1}")
        return n
    na, nm = occupancy
    try:
        return _two_mode_index(space.n_total_max)[(int(na), int(nm))]
    except KeyError:
        raise ValueError(
            f"({na},{nm}) not in the total-N<= {space.n_total_max} basis"
        ) from None


@dataclass(frozen=True)
class FockOperator:
    """A linear operator on a truncated Fock space.

    Operators are treated as immutable after construction and are safe to
    share across threads. Binary operations require identical spaces.
    """

    space: Space
    matrix: np.ndarray

    def __post_init__(self):
        d = self.space.size
        if self.matrix.shape != (d, d):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match space size {d}"
            )

    def _check_space(self, other: "FockOperator"):
        if other.space != self.space:
            raise SpaceMismatchError(f"{self.space} vs {other.space}")

    def dag(self) -> "FockOperator":
        return FockOperator(self.space, self.matrix.conj().T)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        self._check_space(other)
        return FockOperator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        self._check_space(other)
        return FockOperator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "FockOperator":
        return FockOperator(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "FockOperator":
        return FockOperator(self.space, -self.matrix)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        self._check_space(other)
        return FockOperator(self.space, self.matrix @ other.matrix)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return np.abs(self.matrix - self.matrix.conj().T).max() <= tol


def dag(op: FockOperator) -> FockOperator:
    return op.dag()


def _resolve_mode(space: Space, mode) -> str:
    if isinstance(space, SingleModeSpace):
        # a single-mode space has exactly one mode; any selector names it
        return "only"
    if mode not in ("a", "m"):
        raise ValueError(f"two-mode space requires mode 'a' or 'm', got {mode!r}")
    return mode


def destroy(space: Space, mode=None) -> FockOperator:
    """Truncated annihilation operator: <n-1|op|n> = sqrt(n) within the basis.

    For two-mode spaces ``mode`` selects 'a' or 'm'; matrix elements connect
    basis states differing by one quantum in that mode.
    """
    which = _resolve_mode(space, mode)
    if which == "only":
        mat = np.diag(np.sqrt(np.arange(1, space.dim)), 1).astype(complex)
        return FockOperator(space, mat)
    basis = space.basis_states
    index = _two_mode_index(space.n_total_max)
    mat = np.zeros((space.size, space.size), dtype=complex)
    sel = 0 if which == "a" else 1
    for i, (na, nm) in enumerate(basis):
        occ = (na, nm)[sel]
        if occ >= 1:
            target = (na - 1, nm) if sel == 0 else (na, nm - 1)
            mat[index[target], i] = np.sqrt(occ)
    return FockOperator(space, mat)


def number_op(space: Space, mode=None) -> FockOperator:
    """Occupation-number operator dag(destroy) @ destroy for the selected mode."""
    a = destroy(space, mode)
    return a.dag() @ a


def identity_op(space: Space) -> FockOperator:
    return FockOperator(space, np.eye(space.size, dtype=complex))


def projector(space: Space, j: int, mode=None) -> FockOperator:
    """Projector onto the j-quanta eigenspace of the selected number operator.

    ``mode`` is None for single-mode spaces (elementary |j><j|), 'a' or 'm'
    for the bare modes of a two-mode space, or 'p+' for the symmetric
    polariton mode (delegated to the model module's basis change).
    """
    if not 0 <= j <= space.max_occupancy:
        raise ValueError(f"j={j} outside 0..{space.max_occupancy}")
    if isinstance(space, SingleModeSpace):
        diag = np.zeros(space.dim)
        diag[j] = 1.0
        return FockOperator(space, np.diag(diag).astype(complex))
    if mode == "p+":
        from .model import polariton_projector

        return polariton_projector(space, j)
    which = _resolve_mode(space, mode)
    sel = 0 if which == "a" else 1
    diag = np.array([1.0 if s[sel] == j else 0.0 for s in space.basis_states])
    return FockOperator(space, np.diag(diag).astype(complex))


@dataclass(frozen=True)
class QuantumState:
    """A pure state vector (1-d payload) or density matrix (2-d payload).

    Use :func:`pure_state` / :func:`density_state` to construct validated
    instances; the constructors enforce the normalization, hermiticity and
    positivity invariants.
    """

    space: Space
    data: np.ndarray

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    def density_matrix(self) -> np.ndarray:
        """The state as a density matrix regardless of payload kind."""
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data


def pure_state(space: Space, vector, normalize: bool = True) -> QuantumState:
    vec = np.asarray(vector, dtype=complex).reshape(-1)
    if vec.shape != (space.size,):
        raise ValueError(f"vector length {vec.size} != space size {space.size}")
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    if normalize:
        vec = vec / norm
    elif abs(norm - 1.0) > 1e-10:
        raise ValueError(f"|norm - 1| = {abs(norm - 1.0):.2e} exceeds 1e-10")
    return QuantumState(space, vec)


def density_state(space: Space, matrix) -> QuantumState:
    """Validated density matrix: unit trace, hermitian, positive semidefinite.

    Tolerances: |tr-1| <= 1e-10, max |rho-rho^dag| <= 1e-12, min eigenvalue
    >= -1e-10. Callers holding slightly out-of-tolerance matrices should
    symmetrize/clip first (see solvers.clip_positivity).
    """
    rho = np.asarray(matrix, dtype=complex)
    d = space.size
    if rho.shape != (d, d):
        raise ValueError(f"matrix shape {rho.shape} != ({d},{d})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"|trace - 1| = {abs(tr - 1.0):.2e} exceeds 1e-10")
    herm_dev = np.abs(rho - rho.conj().T).max()
    if herm_dev > 1e-12:
        raise ValueError(f"hermiticity deviation {herm_dev:.2e} exceeds 1e-12")
    min_eig = np.linalg.eigvalsh(rho).min()
    if min_eig < -1e-10:
        raise ValueError(f"min eigenvalue {min_eig:.2e} below -1e-10")
    return QuantumState(space, rho)


def basis_state(space: Space, occupancy) -> QuantumState:
    vec = np.zeros(space.size, dtype=complex)
    vec[basis_index(space, occupancy)] = 1.0
    return QuantumState(space, vec)


def vacuum_state(space: Space) -> QuantumState:
    if isinstance(space, SingleModeSpace):
        return basis_state(space, 0)
    return basis_state(space, (0, 0))


def expectation(state: QuantumState, op: FockOperator) -> complex:
    """<psi|op|psi> for pure states, Tr(op rho) for density matrices."""
    if state.space != op.space:
        raise SpaceMismatchError(f"{state.space} vs {op.space}")
    if state.is_pure:
        return complex(np.vdot(state.data, op.matrix @ state.data))
    return complex(np.trace(op.matrix @ state.data))
