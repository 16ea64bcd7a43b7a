"""Exception types raised across the package."""


class SchurTransformError(Exception):
    """Base class for all errors raised by this package."""


class RealizationNotInvariant(SchurTransformError, ValueError):
    """A supplied irrep realization is not closed under the u(d) generators."""


class LabelOutOfRange(SchurTransformError, ValueError):
    """A Schur label does not address an occupied state of the layout."""


class SpaceCapExceeded(SchurTransformError):
    """Full expansion would exceed the configured index-space cap."""


class NotUnitary(SchurTransformError, ValueError):
    """A matrix handed to the two-level decomposer is not unitary."""
