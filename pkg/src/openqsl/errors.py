"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Operands do not share the required dimensions."""


class NonHermitianError(ValueError):
    """A matrix expected to be Hermitian deviates beyond tolerance."""


class ResourceLimitError(ValueError):
    """Requested object exceeds the configured dense-size budget."""


class IntegrationQualityError(RuntimeError):
    """A trajectory failed a conservation check; rerun with a smaller dt."""


class UnreachableTargetError(RuntimeError):
    """The target Bures angle was never reached within the horizon."""


class SingularPointError(ValueError):
    """Expression evaluated at a singular point of its domain."""


class FrozenDynamicsError(ValueError):
    """The generator produces no motion; finite targets are unreachable."""


class ConfigError(ValueError):
    """Experiment configuration failed to parse or validate."""
