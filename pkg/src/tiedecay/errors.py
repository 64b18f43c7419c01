"""Shared exception types."""


class ConfigError(ValueError):
    """An experiment configuration is malformed or violates a precondition."""


class NumericalError(RuntimeError):
    """An iterative numerical routine failed to meet its tolerance."""
