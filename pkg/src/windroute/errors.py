"""Exception hierarchy shared across the package."""


class WindrouteError(Exception):
    """Base class for all package-specific errors."""


class DegenerateInputError(WindrouteError, ValueError):
    """Geometry is degenerate (e.g. bearing between coincident points)."""


class IllConditionedError(WindrouteError):
    """A Gram matrix could not be factorized even after jitter."""


class ConvergenceError(WindrouteError):
    """The mode-finding solve did not converge."""

    def __init__(self, message, grad_norm=None):
        super().__init__(message)
        self.grad_norm = grad_norm


class SaddlePointError(WindrouteError):
    """The Hessian at the returned mode is not positive definite."""


class InfeasibleTrackError(WindrouteError):
    """Crosswind component meets or exceeds airspeed; track cannot be held."""


class ParseError(WindrouteError, ValueError):
    """Malformed input text; carries a location when available."""

    def __init__(self, message, offset=None, row=None, column=None):
        super().__init__(message)
        self.offset = offset
        self.row = row
        self.column = column


class FormatError(ParseError):
    """Lexically valid group whose content violates the encoding rules."""


class LevelNotFoundError(WindrouteError, KeyError):
    """Requested altitude level is absent from a bulletin."""


class NoFeasibleTrajectoryError(WindrouteError):
    """Every trajectory in the library is infeasible at the current winds."""


class SimulationError(WindrouteError):
    """Base for simulator failures."""


class SimulationStuckError(SimulationError):
    """The simulated aircraft cannot make progress toward the goal."""


class SimulationTimeoutError(SimulationError):
    """Simulated time exceeded the hard cap."""


class ConfigError(WindrouteError):
    """Invalid or inconsistent run configuration."""
