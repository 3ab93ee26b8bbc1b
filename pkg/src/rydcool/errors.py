"""Exception types shared across the package."""


class RydcoolError(Exception):
    """Base class for all package-specific errors."""


class SpeciesFileError(RydcoolError):
    """Species/config file cannot be parsed; carries the offending line number."""

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc = f"{path}:"
            if line is not None:
                loc += f"{line}:"
            loc += " "
        super().__init__(loc + message)
        self.path = path
        self.line = line


class MissingSeriesError(SpeciesFileError):
    """A required (L, J) quantum-defect or lifetime series is absent."""


class UnphysicalStateError(RydcoolError):
    """Effective principal quantum number n - delta is not positive."""


class IntegrationError(RydcoolError):
    """Radial integration failed (divergence or degenerate grid)."""


class NonConvergedError(RydcoolError):
    """An iterative computation did not reach its tolerance."""


class ResonantDressingError(RydcoolError):
    """Dressed potential has a pole at real separation (soft-core form invalid)."""


class LevelCrossingError(RydcoolError):
    """Adiabatic connection of a dressed eigenstate is ambiguous."""


class BifurcationError(RydcoolError):
    """Equilibrium Newton solve hit a near-singular Jacobian."""


class InsufficientSamplingError(RydcoolError):
    """Time grid too coarse for a converged finite-difference diagnostic."""


class ConfigError(RydcoolError):
    """Run configuration is invalid."""
