"""Channel models, LLR frames and random streams."""

from .frames import LlrFrame, read_llr_file, read_llr_lines, write_llr_file
from .model import CHANNEL_KINDS, ChannelSpec, bpsk, demap, snr_to_sigma, transmit
from .streams import frame_rng

__all__ = [
    "CHANNEL_KINDS",
    "ChannelSpec",
    "LlrFrame",
    "bpsk",
    "demap",
    "frame_rng",
    "read_llr_file",
    "read_llr_lines",
    "snr_to_sigma",
    "transmit",
    "write_llr_file",
]
