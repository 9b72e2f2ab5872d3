"""Exception types shared across the package."""


class PulsecoolError(Exception):
    """Base class for all package errors."""


class ValidationError(PulsecoolError, ValueError):
    """A parameter failed validation; the message names the field."""


class UnsupportedConfigurationError(PulsecoolError, ValueError):
    """Configuration outside the supported model family (e.g. >2 auxiliaries)."""


class RefinementError(PulsecoolError, ValueError):
    """Pulse resampling requested fewer segments than the input has."""


class DivergenceError(PulsecoolError, RuntimeError):
    """Second moments blew up during propagation (unstable coupling)."""


class PhysicalityError(PulsecoolError, RuntimeError):
    """A moment that must be real/positive came out unphysical."""


class NoSteadyStateError(PulsecoolError, RuntimeError):
    """Drift matrix is not Hurwitz; no steady state exists."""


class DimensionError(PulsecoolError, ValueError):
    """Fock cutoff too small for the requested construction."""


class SpaceError(PulsecoolError, ValueError):
    """Density matrix lives on the wrong space for this operation."""


class TruncationError(PulsecoolError, RuntimeError):
    """Population leaked into the top Fock level beyond tolerance."""


class OptimizationFailedError(PulsecoolError, RuntimeError):
    """Every restart of an optimization diverged or errored."""


class ConfigError(PulsecoolError, ValueError):
    """Experiment configuration failed schema validation."""
