"""Exception types shared across the package.

Every domain error derives from :class:`ObstateError`; the CLI maps those to
exit code 1 and prints the class name verbatim.
"""


class ObstateError(Exception):
    """Base class for domain errors."""


class PoleAtZero(ObstateError, ZeroDivisionError):
    pass


class NegativeLoops(ObstateError, ValueError):
    pass


class OutOfRealDomain(ObstateError, ValueError):
    pass


class NoClosedForm(ObstateError, ValueError):
    """No closed-form coefficient table exists for the requested (n, p)."""


class OnShellPole(ObstateError, ZeroDivisionError):
    pass


class ArityMismatch(ObstateError, ValueError):
    pass


class DegenerateGamma(ObstateError, ValueError):
    pass


class RootFindFailure(ObstateError, ArithmeticError):
    pass


class LandauPole(ObstateError, ZeroDivisionError):
    pass


class LandauPoleCrossed(ObstateError, OverflowError):
    """Raised when the running coupling blows past the divergence threshold.

    The partial trajectory and the scale at which the threshold was crossed
    are attached for diagnostics.
    """

    def __init__(self, message, mu=None, step=None, trajectory=None):
        super().__init__(message)
        self.mu = mu
        self.step = step
        self.trajectory = trajectory if trajectory is not None else []


class QuadratureNonConvergence(ObstateError, ArithmeticError):
    pass


class DivergentRatioWarning(RuntimeWarning):
    """Geometric resummation requested outside its radius of convergence."""
