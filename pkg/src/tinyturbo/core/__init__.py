"""Core data models and errors for tinyturbo."""

from .errors import ConfigurationError, ContractError, UnsupportedBlocklengthError
from .models import (
    ChannelConfig,
    CodeConfig,
    DecoderConfig,
    SimulationConfig,
    TrainingConfig,
)

__all__ = [
    "ChannelConfig",
    "CodeConfig",
    "ConfigurationError",
    "ContractError",
    "DecoderConfig",
    "SimulationConfig",
    "TrainingConfig",
    "UnsupportedBlocklengthError",
]
