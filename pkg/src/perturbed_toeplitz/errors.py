"""Exception hierarchy shared by all solver layers."""


class ToeplitzError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ToeplitzError, ValueError):
    """An argument lies outside the domain of a kernel."""


class NonFiniteError(ToeplitzError, ArithmeticError):
    """A NaN or infinity showed up in an intermediate value."""

    def __init__(self, operation: str, value=None):
        self.operation = operation
        self.value = value
        super().__init__(f"non-finite value in {operation}: {value!r}")


class ArctanhDomain(DomainError):
    """arctanh received |t| >= 1 (psi left its certified range)."""


class PoleError(ToeplitzError, ArithmeticError):
    """tan(nx/2) is at (or numerically too close to) a pole."""


class RegimeError(ToeplitzError, ValueError):
    """The requested operation is not valid for this (alpha, n)."""


class SolverError(ToeplitzError, RuntimeError):
    """Base class for iterative solver failures."""


class NoConvergence(SolverError):
    def __init__(self, what: str, iterations: int, last_step=None):
        self.what = what
        self.iterations = iterations
        self.last_step = last_step
        super().__init__(f"{what}: no convergence after {iterations} iterations "
                         f"(last step {last_step})")


class FallbackUnavailable(SolverError):
    """Bisection could not bracket a root; route to the oracle."""


class NoBracket(SolverError):
    """No sign change on the search interval."""


class PairMismatch(SolverError):
    """Real-embedding eigenvalues did not come in coincident pairs."""


class ZeroVector(ToeplitzError, ArithmeticError):
    """An eigenvector formula degenerated to (numerically) zero."""
