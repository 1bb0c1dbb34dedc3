"""BCJR constituent decoding and the weighted iterative turbo decoder."""

from .decoder import DecodeConfig, DecodeResult, DecodeTape, turbo_backward, turbo_decode, weighted_extrinsic
from .siso import (
    SisoAlgorithm,
    SisoGradients,
    SisoInput,
    SisoOutput,
    SisoWorkspace,
    branch_metric,
    branch_metrics,
    lse,
    lse_grad,
    max_log,
    max_log_grad,
    parse_algorithm,
    siso_backward,
    siso_decode,
)
from .weights import WeightSet, load_weights, resolve_weights, save_weights, tinyturbo_preset

__all__ = [
    "DecodeConfig",
    "DecodeResult",
    "DecodeTape",
    "SisoAlgorithm",
    "SisoGradients",
    "SisoInput",
    "SisoOutput",
    "SisoWorkspace",
    "WeightSet",
    "branch_metric",
    "branch_metrics",
    "load_weights",
    "lse",
    "lse_grad",
    "max_log",
    "max_log_grad",
    "parse_algorithm",
    "resolve_weights",
    "save_weights",
    "siso_backward",
    "siso_decode",
    "tinyturbo_preset",
    "turbo_backward",
    "turbo_decode",
    "weighted_extrinsic",
]
