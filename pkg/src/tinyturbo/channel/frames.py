"""Channel-LLR frames and their plain-text file format.

Files hold one frame per line as whitespace-separated reals in the serialized
(transmitted) order, so externally simulated channels can feed the decoder.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, TextIO, Union

import numpy as np

from tinyturbo.core.errors import ContractError


@dataclass
class LlrFrame:
    """Channel LLRs of a batch of turbo frames, all arrays shaped ``(batch, length)``.

    Punctured positions hold 0. ``tail_*1`` terminate encoder 1, ``tail_*2``
    encoder 2; each has ``m`` entries.
    """

    sys: np.ndarray
    par1: np.ndarray
    par2: np.ndarray
    tail_sys1: np.ndarray
    tail_par1: np.ndarray
    tail_sys2: np.ndarray
    tail_par2: np.ndarray

    def __post_init__(self) -> None:
        batch = None
        for item in fields(self):
            value = np.atleast_2d(np.asarray(getattr(self, item.name), dtype=np.float64))
            if value.ndim != 2:
                raise ContractError(f"LlrFrame.{item.name} must be 1-D or 2-D")
            if batch is None:
                batch = value.shape[0]
            elif value.shape[0] != batch:
                raise ContractError("LlrFrame streams disagree on batch size")
            setattr(self, item.name, value)
        if not (self.sys.shape == self.par1.shape == self.par2.shape):
            raise ContractError("systematic and parity streams must have equal length")
        if not (self.tail_sys1.shape == self.tail_par1.shape == self.tail_sys2.shape == self.tail_par2.shape):
            raise ContractError("tail streams must have equal length")

    @property
    def batch_size(self) -> int:
        return int(self.sys.shape[0])

    @property
    def K(self) -> int:
        return int(self.sys.shape[1])

    @property
    def memory(self) -> int:
        return int(self.tail_sys1.shape[1])

    def select(self, index: Union[int, slice, np.ndarray]) -> "LlrFrame":
        if isinstance(index, int):
            index = slice(index, index + 1)
        return LlrFrame(**{item.name: getattr(self, item.name)[index] for item in fields(self)})


def read_llr_lines(handle: TextIO) -> np.ndarray:
    """Parse one frame per non-empty line; every line must have the same length."""

    rows = []
    for number, line in enumerate(handle, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            rows.append([float(token) for token in stripped.split()])
        except ValueError as exc:
            raise ContractError(f"line {number}: {exc}") from exc
    if not rows:
        return np.zeros((0, 0))
    width = len(rows[0])
    for number, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ContractError(f"frame {number} has {len(row)} values; expected {width}")
    return np.asarray(rows, dtype=np.float64)


def read_llr_file(path: Path) -> np.ndarray:
    with Path(path).open("r", encoding="utf-8") as handle:
        return read_llr_lines(handle)


def format_rows(rows: Iterable[np.ndarray], fmt: str = "%.17g") -> str:
    return "".join(" ".join(fmt % value for value in row) + "\n" for row in rows)


def write_llr_file(path: Path, received: np.ndarray) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_rows(np.atleast_2d(received)), encoding="utf-8")
