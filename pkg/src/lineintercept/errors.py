"""Exception hierarchy shared by every module."""


class InterceptError(Exception):
    """Base class for all library errors."""


class DomainError(InterceptError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularityError(InterceptError, ArithmeticError):
    """A derivative was requested where the integrand is singular."""


class DegenerateGeometryError(InterceptError, ValueError):
    """Two points that must be distinct coincide."""


class CoincidentVehiclesError(DegenerateGeometryError):
    """Two vehicles occupy the same location."""

    def __init__(self, i, j, msg=None):
        self.pair = (i, j)
        super().__init__(msg or f"vehicles {i} and {j} are coincident")


class InfeasibleError(InterceptError, ArithmeticError):
    """A closed-form expression produced an imaginary value."""


class InvariantViolation(InterceptError, RuntimeError):
    """An internal numerical invariant failed; never silently repaired."""


class PreconditionError(InterceptError, ValueError):
    """The caller violated a documented precondition."""


class NotConvergedError(InterceptError, RuntimeError):
    """An iterative method hit its iteration cap."""
