"""Exception hierarchy shared across the package."""


class XductError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(XductError, ValueError):
    """A physical-parameter invariant is violated; message names the first one."""


class ConfigError(XductError, ValueError):
    """A run configuration file is malformed; message names the offending key."""


class SingularAmplitudeError(XductError, ArithmeticError):
    """Steady-state pump amplitude is undefined (undamped, resonant denominator)."""


class StepSizeError(XductError, ValueError):
    """Fixed-step integration is too coarse for the requested trajectory."""


class SolverError(XductError, ArithmeticError):
    """A frequency-domain solve hit a singular (or numerically singular) matrix."""


class NoCrossingError(XductError, ValueError):
    """A crossing/root search found no sign change on the given grid or bracket."""
