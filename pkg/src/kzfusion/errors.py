"""Exceptions shared across the package."""


class KzFusionError(Exception):
    pass


class ExtensionMismatchError(KzFusionError):
    """Two scalars from different quadratic extensions met in one operation."""


class NonRationalError(KzFusionError):
    """A plain rational was required but the scalar has an irrational part."""


class DimensionMismatchError(KzFusionError):
    pass


class WindowEscapeError(KzFusionError):
    """An action left the materialized weight window of a module."""


class CutoffExceededError(KzFusionError):
    """A computation needed degrees beyond the module's degree cutoff."""


class CriticalLevelError(KzFusionError):
    """The level equals -h_vee, where the Sugawara construction breaks down."""


class UnsupportedShapeError(KzFusionError):
    """The requested module/tensor shape is outside the supported catalogue."""


class DomainError(KzFusionError):
    """Parameters violate an operation's stated domain."""


class ObstructionError(KzFusionError):
    """The recursion hit a non-invertible degree.

    Carries the partial prefix and the obstruction entry so callers can
    still extract singular-vector candidates.
    """

    def __init__(self, message, prefix=None, entry=None):
        super().__init__(message)
        self.prefix = prefix
        self.entry = entry
