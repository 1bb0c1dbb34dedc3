"""Result files: CSV tables whose first line is ``# `` plus JSON metadata."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, List, Sequence

from tinyturbo.core.errors import ContractError
from tinyturbo.logging import get_logger, log_step

from .harness import CompareResult, LlrStats, SimResult

LOGGER = get_logger(__name__)

SIM_COLUMNS = ("snr_db", "frames", "bit_errors", "block_errors", "ber", "bler")


def write_table(path: Path, metadata: dict, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8", newline="") as handle:
        handle.write("# " + json.dumps(metadata, sort_keys=True) + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(value) if isinstance(value, float) else value for value in row])
    log_step(LOGGER, phase="results", step="write", extra={"path": str(target)})
    return target


def read_table(path: Path):
    """Return ``(metadata, header, rows)`` with every cell as text."""

    with Path(path).open("r", encoding="utf-8", newline="") as handle:
        first = handle.readline()
        if not first.startswith("# "):
            raise ContractError(f"{path}: missing metadata header line")
        metadata = json.loads(first[2:])
        reader = csv.reader(handle)
        header = next(reader)
        rows = [row for row in reader]
    return metadata, header, rows


def _with_timing(metadata: dict, wall_time: float, record_timing: bool) -> dict:
    if not record_timing:
        return metadata
    return dict(metadata, wall_time_s=round(wall_time, 3))


def write_sim_result(path: Path, result: SimResult, *, record_timing: bool = False) -> Path:
    rows = [[row.to_dict()[column] for column in SIM_COLUMNS] for row in result.rows]
    return write_table(path, _with_timing(result.metadata, result.wall_time, record_timing), SIM_COLUMNS, rows)


def write_compare_result(path: Path, result: CompareResult, *, record_timing: bool = False) -> Path:
    """One row per SNR point; each decoder contributes its own column group."""

    header: List[str] = ["snr_db", "frames"]
    for label in result.labels:
        header.extend(f"{label}:{column}" for column in ("bit_errors", "block_errors", "ber", "bler"))
    rows = []
    for point, snr in enumerate(result.snr_db):
        first = result.rows[result.labels[0]][point]
        row: List = [snr, first.frames]
        for label in result.labels:
            item = result.rows[label][point]
            row.extend([item.bit_errors, item.block_errors, item.ber, item.bler])
        rows.append(row)
    metadata = _with_timing(result.metadata, result.wall_time, record_timing)
    return write_table(path, metadata, header, rows)


def write_llr_stats(path: Path, stats: Sequence[LlrStats], metadata: dict) -> Path:
    header: List[str] = ["position"]
    for item in stats:
        header.extend([f"{item.label}:mean", f"{item.label}:std"])
    K = len(stats[0].mean) if stats else 0
    rows = []
    for k in range(K):
        row: List = [k]
        for item in stats:
            row.extend([float(item.mean[k]), float(item.std[k])])
        rows.append(row)
    summary = dict(
        metadata,
        zero_crossing_fraction={item.label: item.zero_crossing_fraction for item in stats},
    )
    return write_table(path, summary, header, rows)
