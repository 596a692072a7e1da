"""Exception types shared across the solvers."""


class ConvergenceError(RuntimeError):
    """A numerical routine failed to converge within its iteration/cutoff cap."""


class UnboundedSearchError(RuntimeError):
    """The excitation-subspace scan exhausted its bound without the stopping
    rule firing; signals parameters outside the regime covered by the scan."""
