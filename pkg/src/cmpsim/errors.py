"""Exception types shared across the simulator."""


class ConfigError(ValueError):
    """Invalid configuration: bad parameter values, malformed grids, unknown ids."""


class SpaceMismatchError(ValueError):
    """Operands live on different Hilbert spaces."""


class SolverError(RuntimeError):
    """A numerical routine could not meet its accuracy contract."""


class TruncationError(SolverError):
    """Fock-space cutoff is inadequate for the requested computation."""
