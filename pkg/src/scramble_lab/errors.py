"""Exception hierarchy shared across the package."""


class ScrambleLabError(Exception):
    """Base class for all library errors."""


class DimensionError(ScrambleLabError, ValueError):
    pass


class SymmetryError(ScrambleLabError, ValueError):
    """Input expected Hermitian (or unitary) was not, beyond tolerance."""


class DomainError(ScrambleLabError, ValueError):
    pass


class ConventionError(ScrambleLabError, ValueError):
    """Closed-form predictions require m <= n."""


class FitError(ScrambleLabError, RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class BudgetError(ScrambleLabError, ValueError):
    """Requested problem size exceeds the exact-simulation budget."""


class ConfigError(ScrambleLabError, ValueError):
    pass
