"""Exception hierarchy.

Everything raised on purpose derives from :class:`WalkError`. Two families
matter to callers: :class:`ConfigError` (bad user input) and
:class:`NumericalError` (an invariant or regime condition failed during
evaluation). The CLI maps them to exit codes 1 and 2.
"""


class WalkError(ValueError):
    pass


class ConfigError(WalkError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SpecError(ConfigError):
    """Inconsistent walk or switch specification."""


class NormalizationError(WalkError):
    pass


class LatticeBoundsError(WalkError):
    pass


class LightConeError(WalkError):
    """Lattice too small to hold the wavefront without wrapping."""


class BudgetError(WalkError):
    """Requested enumeration or matrix exceeds the size budget."""


class DimensionMismatchError(WalkError):
    pass


class NumericalError(WalkError):
    pass


class DegenerateStateError(NumericalError):
    pass


class DegeneratePostselectionError(NumericalError):
    pass


class DestructiveInterferenceError(NumericalError):
    pass


class WrongRegimeError(NumericalError):
    pass


class DensityMatrixError(NumericalError):
    pass


class ChannelError(NumericalError):
    pass
