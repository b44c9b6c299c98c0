"""Exception hierarchy shared by all solver modules."""


class GlimmError(Exception):
    """Base class for every error raised by the package."""


class DomainError(GlimmError, ValueError):
    """Non-positive pressure, density or temperature."""


class SonicError(GlimmError):
    """A state is sonic or subsonic where supersonic flow is required."""


class RangeError(GlimmError, ValueError):
    """A quantity left its admissible interval."""


class IntegrationError(GlimmError):
    """The rarefaction integrator failed its accuracy check."""


class NoRootError(GlimmError):
    """A bracketed scalar root solve failed."""


class NoConvergence(GlimmError):
    """Newton iteration did not reach tolerance."""


class DegenerateJacobian(GlimmError):
    """Jacobian determinant too small for a reliable solve."""


class ConfigError(GlimmError, ValueError):
    """Invalid or unsupported configuration."""


class StepTooLarge(GlimmError):
    """Reaction step violates phi*h/u < 1 or has no real solution."""


class CFLViolation(GlimmError):
    """A wave left its diamond during a slab."""


class MissingWaveData(GlimmError):
    """Diagnostics need wave fans that were not retained."""


class NoContraction(GlimmError):
    """Quasi-1D iteration stopped contracting."""


class MaxIterations(GlimmError):
    """Quasi-1D iteration exhausted its budget."""


class GridMismatch(GlimmError, ValueError):
    """Two solutions do not live on compatible grids."""


class ParseError(GlimmError, ValueError):
    """Malformed configuration text."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ValidationError(GlimmError, ValueError):
    """Configuration violates one or more modelling hypotheses."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


# status codes returned by the compiled kernels
OK = 0
ST_SONIC = 1
ST_DOMAIN = 2
ST_INTEGRATION = 3
ST_NOROOT = 4
ST_NOCONV = 5
ST_DEGENERATE = 6
ST_RANGE = 7
ST_STEP = 8
ST_CFL = 9
ST_CONFIG = 10

_STATUS_TO_ERROR = {
    ST_SONIC: SonicError,
    ST_DOMAIN: DomainError,
    ST_INTEGRATION: IntegrationError,
    ST_NOROOT: NoRootError,
    ST_NOCONV: NoConvergence,
    ST_DEGENERATE: DegenerateJacobian,
    ST_RANGE: RangeError,
    ST_STEP: StepTooLarge,
    ST_CFL: CFLViolation,
    ST_CONFIG: ConfigError,
}


def raise_for_status(status, message=""):
    """Translate a kernel status code into the matching exception."""
    if status == OK:
        return
    cls = _STATUS_TO_ERROR.get(int(status), GlimmError)
    raise cls(message or cls.__doc__)
