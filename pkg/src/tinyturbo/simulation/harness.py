"""Monte-Carlo error-rate simulation, paired comparisons and LLR statistics.

Frames are processed in fixed-size chunks. Chunk ``c`` of SNR point ``p``
always holds the same frames, and tallies are folded in chunk order with the
stop rule checked after each chunk, so results do not depend on the number of
workers. Chunks computed past the stopping point are discarded.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from tinyturbo.channel.model import ChannelSpec
from tinyturbo.channel.streams import ANALYSIS, MAX_GRID_POINTS, SIMULATION, point_stream
from tinyturbo.coding.codec import TurboCode
from tinyturbo.core.errors import ConfigurationError
from tinyturbo.decoding.decoder import DecodeConfig, turbo_decode
from tinyturbo.logging import get_logger, log_progress, log_step

from .sampling import FrameBatch, draw_batch

LOGGER = get_logger(__name__)


@dataclass(frozen=True)
class StopRule:
    """Stop a point once ``min_block_errors`` (and ``min_frames``) are reached, or at ``max_frames``.

    Without a block-error target every point runs ``max_frames`` frames.
    """

    max_frames: int = 200_000
    min_block_errors: Optional[int] = 100
    min_frames: int = 0

    def __post_init__(self) -> None:
        if self.max_frames < 1:
            raise ConfigurationError(f"max_frames must be >= 1, got {self.max_frames}")
        if self.min_frames < 0:
            raise ConfigurationError(f"min_frames must be >= 0, got {self.min_frames}")
        if self.min_block_errors is not None and self.min_block_errors < 1:
            raise ConfigurationError("min_block_errors must be >= 1 or None")

    def done(self, frames: int, block_errors: int) -> bool:
        if frames >= self.max_frames:
            return True
        if self.min_block_errors is None or frames < self.min_frames:
            return False
        return block_errors >= self.min_block_errors

    def describe(self) -> dict:
        return {
            "max_frames": self.max_frames,
            "min_block_errors": self.min_block_errors,
            "min_frames": self.min_frames,
        }


@dataclass
class SimRow:
    snr_db: float
    K: int
    frames: int = 0
    bit_errors: int = 0
    block_errors: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self.K) if self.frames else 0.0

    @property
    def bler(self) -> float:
        return self.block_errors / self.frames if self.frames else 0.0

    def add(self, errors_per_frame: np.ndarray) -> None:
        self.frames += int(errors_per_frame.shape[0])
        self.bit_errors += int(errors_per_frame.sum())
        self.block_errors += int(np.count_nonzero(errors_per_frame))

    def to_dict(self) -> dict:
        return {
            "snr_db": self.snr_db,
            "frames": self.frames,
            "bit_errors": self.bit_errors,
            "block_errors": self.block_errors,
            "ber": self.ber,
            "bler": self.bler,
        }


@dataclass
class SimResult:
    rows: List[SimRow]
    metadata: dict
    wall_time: float = 0.0


@dataclass
class CompareResult:
    """Per-config rows over a shared SNR grid, plus per-frame bit errors for paired tests."""

    labels: List[str]
    snr_db: List[float]
    rows: Dict[str, List[SimRow]]
    frame_errors: Dict[str, List[np.ndarray]]
    metadata: dict
    wall_time: float = 0.0

    def sign_test(self, better: str, worse: str, point: int, confidence: float = 0.99) -> "SignTest":
        return paired_sign_test(
            self.frame_errors[better][point], self.frame_errors[worse][point], confidence=confidence
        )


@dataclass
class LlrStats:
    label: str
    mean: np.ndarray
    std: np.ndarray
    trials: int

    @property
    def upper_band(self) -> np.ndarray:
        return self.mean + 2.0 * self.std

    @property
    def zero_crossing_fraction(self) -> float:
        """Fraction of positions whose ``mean + 2 std`` reaches zero."""
        return float(np.mean(self.upper_band >= 0.0))


@dataclass
class SignTest:
    wins: int
    losses: int
    ties: int
    p_value: float
    confidence: float

    @property
    def significant(self) -> bool:
        return self.p_value < 1.0 - self.confidence


def paired_sign_test(errors_a, errors_b, *, confidence: float = 0.99) -> SignTest:
    """One-sided exact sign test that ``a`` makes fewer errors than ``b`` on paired frames."""

    a = np.asarray(errors_a)
    b = np.asarray(errors_b)
    if a.shape != b.shape:
        raise ConfigurationError(f"paired samples differ in shape: {a.shape} vs {b.shape}")
    wins = int(np.count_nonzero(a < b))
    losses = int(np.count_nonzero(a > b))
    ties = int(a.size - wins - losses)
    return SignTest(wins, losses, ties, _binomial_upper_tail(wins, wins + losses), confidence)


def _binomial_upper_tail(k: int, n: int) -> float:
    """``P(X >= k)`` for ``X ~ Binomial(n, 1/2)``."""
    if n == 0 or k <= 0:
        return 1.0
    j = np.arange(1, n + 1, dtype=np.float64)
    log_comb = np.concatenate([[0.0], np.cumsum(np.log((n - j + 1) / j))])
    tail = log_comb[k:]
    peak = tail.max()
    log_p = peak + np.log(np.exp(tail - peak).sum()) - n * np.log(2.0)
    return float(min(1.0, np.exp(log_p)))


def _check_grid(snr_grid: Sequence[float]) -> None:
    if len(snr_grid) > MAX_GRID_POINTS:
        raise ConfigurationError(f"at most {MAX_GRID_POINTS} SNR points per run, got {len(snr_grid)}")


def _frame_bit_errors(code: TurboCode, decoder: DecodeConfig, batch: FrameBatch) -> np.ndarray:
    bits = turbo_decode(code, batch.llr, decoder).bits
    return np.count_nonzero(bits != batch.messages, axis=1)


def _run_chunks(
    total: int,
    chunk: int,
    workers: int,
    work: Callable[[int, int], object],
    consume: Callable[[object], bool],
) -> None:
    """Feed chunk results to ``consume`` in order until it returns True or frames run out."""

    starts = list(range(0, total, chunk))
    if workers <= 1:
        for start in starts:
            if consume(work(start, min(chunk, total - start))):
                return
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for wave in range(0, len(starts), workers):
            futures = [
                pool.submit(work, start, min(chunk, total - start))
                for start in starts[wave : wave + workers]
            ]
            for future in futures:
                if consume(future.result()):
                    for pending in futures:
                        pending.cancel()
                    return


def code_metadata(code: TurboCode) -> dict:
    spec = code.trellis.spec
    return {
        "label": code.label,
        "K": code.K,
        "N": code.N,
        "trellis": {"memory": spec.memory, "feedforward": spec.feedforward, "feedback": spec.feedback},
        "puncture": code.puncture.name,
    }


def decoder_metadata(decoder: DecodeConfig) -> dict:
    return {
        "label": decoder.label,
        "iterations": decoder.iterations,
        "algorithm": decoder.algorithm.value,
        "scheme": decoder.weights.scheme,
    }


def simulate(
    code: TurboCode,
    decoder: DecodeConfig,
    channel: ChannelSpec,
    snr_grid: Sequence[float],
    stop: StopRule = StopRule(),
    *,
    seed: int = 0,
    batch_size: int = 1000,
    workers: int = 1,
) -> SimResult:
    """BER/BLER of one decoder at every SNR of ``snr_grid``."""

    if batch_size < 1:
        raise ConfigurationError(f"batch_size must be >= 1, got {batch_size}")
    _check_grid(snr_grid)
    started = time.perf_counter()
    rows: List[SimRow] = []
    for point, snr in enumerate(snr_grid):
        spec = replace(channel, snr_db=float(snr))
        stream = point_stream(SIMULATION, point)
        row = SimRow(snr_db=float(snr), K=code.K)
        log_step(LOGGER, phase="simulate", step="point", extra={"snr_db": float(snr), "decoder": decoder.label})

        def work(start: int, count: int) -> np.ndarray:
            batch = draw_batch(code, spec, seed=seed, stream=stream, start=start, count=count)
            return _frame_bit_errors(code, decoder, batch)

        def consume(errors: np.ndarray) -> bool:
            row.add(errors)
            log_progress(
                LOGGER,
                phase="simulate",
                step=f"{snr:g} dB",
                current=row.frames,
                total=stop.max_frames,
                extra={"block_errors": row.block_errors},
                level=logging.DEBUG,
            )
            return stop.done(row.frames, row.block_errors)

        _run_chunks(stop.max_frames, batch_size, workers, work, consume)
        rows.append(row)
        log_step(LOGGER, phase="simulate", step="point complete", extra=row.to_dict())

    metadata = {
        "command": "simulate",
        "code": code_metadata(code),
        "decoder": decoder_metadata(decoder),
        "channel": channel.describe() | {"snr_db": [float(s) for s in snr_grid]},
        "seed": seed,
        "stop": stop.describe(),
        "batch_size": batch_size,
    }
    return SimResult(rows=rows, metadata=metadata, wall_time=time.perf_counter() - started)


def _unique_labels(decoders: Sequence[DecodeConfig], labels: Optional[Sequence[str]]) -> List[str]:
    if labels is not None:
        if len(labels) != len(decoders):
            raise ConfigurationError("one label per decoder is required")
        out = list(labels)
    else:
        out = []
        for decoder in decoders:
            base = decoder.label
            name = base
            suffix = 2
            while name in out:
                name = f"{base}#{suffix}"
                suffix += 1
            out.append(name)
    if len(set(out)) != len(out):
        raise ConfigurationError(f"decoder labels must be unique: {out}")
    return out


def compare(
    code: TurboCode,
    decoders: Sequence[DecodeConfig],
    channel: ChannelSpec,
    snr_grid: Sequence[float],
    stop: StopRule = StopRule(),
    *,
    seed: int = 0,
    batch_size: int = 1000,
    workers: int = 1,
    labels: Optional[Sequence[str]] = None,
) -> CompareResult:
    """Decode identical frames with every decoder.

    A point stops once every decoder has the target block errors, or at
    ``max_frames``.
    """

    if not decoders:
        raise ConfigurationError("compare needs at least one decoder")
    _check_grid(snr_grid)
    names = _unique_labels(decoders, labels)
    started = time.perf_counter()
    rows: Dict[str, List[SimRow]] = {name: [] for name in names}
    frame_errors: Dict[str, List[np.ndarray]] = {name: [] for name in names}

    for point, snr in enumerate(snr_grid):
        spec = replace(channel, snr_db=float(snr))
        stream = point_stream(SIMULATION, point)
        point_rows = {name: SimRow(snr_db=float(snr), K=code.K) for name in names}
        collected: Dict[str, List[np.ndarray]] = {name: [] for name in names}
        log_step(LOGGER, phase="compare", step="point", extra={"snr_db": float(snr), "decoders": names})

        def work(start: int, count: int) -> Dict[str, np.ndarray]:
            batch = draw_batch(code, spec, seed=seed, stream=stream, start=start, count=count)
            return {name: _frame_bit_errors(code, dec, batch) for name, dec in zip(names, decoders)}

        def consume(result: Dict[str, np.ndarray]) -> bool:
            for name in names:
                point_rows[name].add(result[name])
                collected[name].append(result[name])
            frames = point_rows[names[0]].frames
            fewest = min(r.block_errors for r in point_rows.values())
            log_progress(
                LOGGER,
                phase="compare",
                step=f"{snr:g} dB",
                current=frames,
                total=stop.max_frames,
                extra={"min_block_errors": fewest},
                level=logging.DEBUG,
            )
            return stop.done(frames, fewest)

        _run_chunks(stop.max_frames, batch_size, workers, work, consume)
        for name in names:
            rows[name].append(point_rows[name])
            frame_errors[name].append(np.concatenate(collected[name]))
        log_step(
            LOGGER,
            phase="compare",
            step="point complete",
            extra={name: point_rows[name].to_dict() for name in names},
        )

    metadata = {
        "command": "compare",
        "code": code_metadata(code),
        "decoders": {name: decoder_metadata(dec) for name, dec in zip(names, decoders)},
        "channel": channel.describe() | {"snr_db": [float(s) for s in snr_grid]},
        "seed": seed,
        "stop": stop.describe(),
        "batch_size": batch_size,
    }
    return CompareResult(
        labels=names,
        snr_db=[float(s) for s in snr_grid],
        rows=rows,
        frame_errors=frame_errors,
        metadata=metadata,
        wall_time=time.perf_counter() - started,
    )


def analyze_llr(
    code: TurboCode,
    decoders: Sequence[DecodeConfig],
    channel: ChannelSpec,
    trials: int,
    *,
    seed: int = 0,
    batch_size: int = 1000,
    labels: Optional[Sequence[str]] = None,
) -> List[LlrStats]:
    """Per-position mean and std of final posteriors for the all-zero codeword."""

    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    names = _unique_labels(decoders, labels)
    posteriors: Dict[str, List[np.ndarray]] = {name: [] for name in names}
    done = 0
    while done < trials:
        count = min(batch_size, trials - done)
        batch = draw_batch(code, channel, seed=seed, stream=ANALYSIS, start=done, count=count, all_zero=True)
        for name, decoder in zip(names, decoders):
            posteriors[name].append(turbo_decode(code, batch.llr, decoder).posterior)
        done += count
        log_progress(LOGGER, phase="analyze", step="trials", current=done, total=trials, level=logging.DEBUG)

    stats = []
    for name in names:
        values = np.concatenate(posteriors[name], axis=0)
        stats.append(LlrStats(label=name, mean=values.mean(axis=0), std=values.std(axis=0), trials=trials))
        log_step(
            LOGGER,
            phase="analyze",
            step="decoder complete",
            extra={"decoder": name, "zero_crossing_fraction": stats[-1].zero_crossing_fraction},
        )
    return stats
