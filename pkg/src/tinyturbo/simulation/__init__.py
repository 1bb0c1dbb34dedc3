"""Monte-Carlo evaluation: frame sampling, error-rate sweeps and result files."""

from .harness import (
    CompareResult,
    LlrStats,
    SignTest,
    SimResult,
    SimRow,
    StopRule,
    analyze_llr,
    compare,
    paired_sign_test,
    simulate,
)
from .results import read_table, write_compare_result, write_llr_stats, write_sim_result, write_table
from .sampling import FrameBatch, draw_batch

__all__ = [
    "CompareResult",
    "FrameBatch",
    "LlrStats",
    "SignTest",
    "SimResult",
    "SimRow",
    "StopRule",
    "analyze_llr",
    "compare",
    "draw_batch",
    "paired_sign_test",
    "read_table",
    "simulate",
    "write_compare_result",
    "write_llr_stats",
    "write_sim_result",
    "write_table",
]
