"""Exception types raised by spinwire."""


class SpinwireError(ValueError):
    """Base class for all library errors."""


class NoPropagationError(SpinwireError):
    """The dispersion relation is flat, so no packet can travel."""


class SizeMismatchError(SpinwireError):
    """Two objects refer to rings of different sizes."""


class DegenerateStateError(SpinwireError):
    """A quantity is undefined because the one-particle component vanishes."""


class BudgetUnattainableError(SpinwireError):
    """No packet width satisfies the requested spread budget."""


class ConfigError(SpinwireError):
    """An experiment configuration failed validation."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
