"""tinyturbo: turbo encoding, BCJR decoding and learned extrinsic weights."""

from __future__ import annotations

import importlib
from typing import Any

__all__ = [
    "ChannelSpec",
    "DecodeConfig",
    "ExperimentConfig",
    "LlrFrame",
    "StopRule",
    "TurboCode",
    "WeightSet",
    "analyze_llr",
    "compare",
    "encode",
    "load_config",
    "make_code",
    "simulate",
    "tinyturbo_preset",
    "train",
    "turbo_decode",
]

_MODULE_MAP = {
    "ChannelSpec": ("tinyturbo.channel", "ChannelSpec"),
    "DecodeConfig": ("tinyturbo.decoding", "DecodeConfig"),
    "ExperimentConfig": ("tinyturbo.config", "ExperimentConfig"),
    "LlrFrame": ("tinyturbo.channel", "LlrFrame"),
    "StopRule": ("tinyturbo.simulation", "StopRule"),
    "TurboCode": ("tinyturbo.coding", "TurboCode"),
    "WeightSet": ("tinyturbo.decoding", "WeightSet"),
    "analyze_llr": ("tinyturbo.simulation", "analyze_llr"),
    "compare": ("tinyturbo.simulation", "compare"),
    "encode": ("tinyturbo.coding", "encode"),
    "load_config": ("tinyturbo.config", "load_config"),
    "make_code": ("tinyturbo.coding", "make_code"),
    "simulate": ("tinyturbo.simulation", "simulate"),
    "tinyturbo_preset": ("tinyturbo.decoding", "tinyturbo_preset"),
    "train": ("tinyturbo.training", "train"),
    "turbo_decode": ("tinyturbo.decoding", "turbo_decode"),
}


def __getattr__(name: str) -> Any:
    if name not in _MODULE_MAP:
        raise AttributeError(f"module 'tinyturbo' has no attribute '{name}'")
    module_name, attr = _MODULE_MAP[name]
    module = importlib.import_module(module_name)
    return getattr(module, attr)
