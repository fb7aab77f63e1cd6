"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration input (bad key, value out of range, parse failure)."""


class SolverError(RuntimeError):
    """A numerical solve failed: bracket exhaustion, nonconvergence, or an
    invalid regime detected at convergence (e.g. nonpositive field)."""
