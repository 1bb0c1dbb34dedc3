"""Exception types shared across tinyturbo."""

from __future__ import annotations


class ConfigurationError(ValueError):
    """Raised when a code, channel, decoder or training definition is invalid."""


class ContractError(ValueError):
    """Raised when an operation receives inputs that violate its preconditions."""


class UnsupportedBlocklengthError(ConfigurationError, LookupError):
    """Raised when a blocklength has no embedded interleaver parameters."""
