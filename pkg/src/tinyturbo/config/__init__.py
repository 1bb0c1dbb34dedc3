"""Configuration helpers for tinyturbo."""

from .loader import (
    ConfigLoader,
    ExperimentConfig,
    build_channel,
    build_code,
    build_decoder,
    build_stop_rule,
    decoder_from,
    load_config,
    snr_grid,
)

__all__ = [
    "ConfigLoader",
    "ExperimentConfig",
    "build_channel",
    "build_code",
    "build_decoder",
    "build_stop_rule",
    "decoder_from",
    "load_config",
    "snr_grid",
]
