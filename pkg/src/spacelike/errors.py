"""Exception hierarchy shared by all subpackages."""


class SpacelikeError(Exception):
    """Base class for every error raised by this package."""


class UnknownIndexError(SpacelikeError, KeyError):
    """A preparation, context or outcome identifier does not exist."""

    def __str__(self):
        # KeyError quotes its argument; keep the plain message instead.
        return str(self.args[0]) if self.args else ""


class ShapeError(SpacelikeError, ValueError):
    """Two objects that must share a structure do not."""


class ConditioningError(SpacelikeError, ValueError):
    """Conditioning on an outcome whose probability is (numerically) zero."""


class SignalingError(SpacelikeError):
    """Conditioning was requested but the detector statistics depend on the
    local context, so no context-independent ``c_j`` exists."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PreconditionError(SpacelikeError, ValueError):
    """Inputs violate a documented precondition."""


class ConstructionError(SpacelikeError):
    """No feasible signaling perturbation exists for the given theory."""


class ConvergenceError(SpacelikeError):
    """An iterative method hit its iteration cap."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class InvalidInputError(SpacelikeError, ValueError):
    """Malformed file content or an object failing validation at construction."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])
