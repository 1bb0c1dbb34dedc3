"""Constituent trellises, QPP interleavers and the turbo encoder."""

from .codec import (
    NAMED_PUNCTURES,
    NO_PUNCTURE,
    RATE_HALF,
    CodedFrame,
    FrameLayout,
    PuncturePattern,
    TurboCode,
    depuncture,
    encode,
    layout,
    make_code,
    multiplex,
    rsc_encode,
    serialize,
)
from .interleave import LTE_QPP_TABLE, Permutation, apply, apply_inverse, lte_qpp, lte_qpp_params, qpp
from .trellis import RscSpec, Trellis, build_trellis, lte_trellis, turbo757_trellis

__all__ = [
    "CodedFrame",
    "FrameLayout",
    "LTE_QPP_TABLE",
    "NAMED_PUNCTURES",
    "NO_PUNCTURE",
    "Permutation",
    "PuncturePattern",
    "RATE_HALF",
    "RscSpec",
    "Trellis",
    "TurboCode",
    "apply",
    "apply_inverse",
    "build_trellis",
    "depuncture",
    "encode",
    "layout",
    "lte_qpp",
    "lte_qpp_params",
    "lte_trellis",
    "make_code",
    "multiplex",
    "qpp",
    "rsc_encode",
    "serialize",
    "turbo757_trellis",
]
