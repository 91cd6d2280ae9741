class GuardError(ValueError):
    """An instance exceeds a size guard of an exact solver."""


class SolverError(RuntimeError):
    """A numerical solve failed to reach its certificate tolerances."""
