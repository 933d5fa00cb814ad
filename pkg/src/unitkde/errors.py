"""Shared exception taxonomy for the library."""


class UnitKdeError(Exception):
    """Base class for all library-specific errors."""


class DomainError(UnitKdeError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(UnitKdeError, ValueError):
    """A structural parameter is invalid (e.g. bandwidth branch overlap)."""


class DegenerateSampleError(UnitKdeError, ValueError):
    """The sample carries no usable spread (constant values, zero variance)."""


class InsufficientDataError(UnitKdeError, ValueError):
    """Too few observations for the requested statistic."""


class IntegrationError(UnitKdeError, ArithmeticError):
    """The integrand was nonfinite at a quadrature node."""


class NumericalError(UnitKdeError, ArithmeticError):
    """A numeric identity the method relies on failed to hold."""


class DivergenceError(NumericalError):
    """An integral required to be finite diverges for these inputs."""


class OptimizationError(UnitKdeError, RuntimeError):
    """A numerical search could not produce a usable result."""


class MethodUnavailableError(UnitKdeError):
    """The requested method does not apply to these inputs (recorded, not fatal)."""
