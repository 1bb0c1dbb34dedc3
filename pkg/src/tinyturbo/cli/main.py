"""CLI entry point for tinyturbo."""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import replace
from pathlib import Path
from typing import Iterable, List, Optional, TextIO

import numpy as np

from tinyturbo.channel.frames import format_rows, read_llr_file, read_llr_lines
from tinyturbo.coding.codec import depuncture, encode, multiplex, serialize
from tinyturbo.config import (
    ExperimentConfig,
    build_channel,
    build_code,
    build_decoder,
    build_stop_rule,
    decoder_from,
    load_config,
    snr_grid,
)
from tinyturbo.core.errors import ConfigurationError, ContractError
from tinyturbo.decoding import DecodeConfig, save_weights, turbo_decode
from tinyturbo.logging import configure_logging, get_logger, log_step
from tinyturbo.simulation import (
    analyze_llr,
    compare,
    simulate,
    write_compare_result,
    write_llr_stats,
    write_sim_result,
    write_table,
)
from tinyturbo.simulation.harness import code_metadata, decoder_metadata

LOGGER = get_logger(__name__)

DEFAULT_CONFIG = Path("configs/base/experiment.yaml")
DEFAULT_DECODERS = ("tinyturbo:max_log_map", "classical:max_log_map:3", "classical:map:6")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        type=Path,
        default=None,
        help=f"Experiment configuration file (YAML or JSON; default: {DEFAULT_CONFIG} when present)",
    )
    common.add_argument("--K", type=int, default=None, help="Override the blocklength")
    common.add_argument(
        "--channel",
        choices=["awgn", "bursty", "deterministic_burst"],
        default=None,
        help="Override the channel kind",
    )
    common.add_argument("--snr", type=float, nargs="+", default=None, help="SNR grid in dB")
    common.add_argument("--sigma-b", type=float, default=None, help="Bursty noise standard deviation")
    common.add_argument("--rho", type=float, default=None, help="Bursty hit probability per symbol")
    common.add_argument("--seed", type=int, default=None, help="Random seed")
    common.add_argument("--out", type=Path, default=None, help="Output file")
    return common


def _decoder_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--weights",
        default=None,
        help="classical, tinyturbo or a weight JSON file",
    )
    parser.add_argument("--iterations", type=int, default=None, help="Decoding iterations")
    parser.add_argument("--algorithm", default=None, help="map or max_log_map")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="tinyturbo command-line interface")
    parser.add_argument("--log-json", action="store_true", help="Emit logs in JSON format")
    parser.add_argument("--log-level", default="INFO", help="Logging level (default: INFO)")
    subcommands = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    sim = subcommands.add_parser("simulate", parents=[common], help="BER/BLER sweep of one decoder")
    _decoder_options(sim)
    sim.add_argument("--workers", type=int, default=None, help="Parallel chunk workers")
    sim.add_argument("--max-frames", type=int, default=None, help="Frame cap per SNR point")
    sim.add_argument("--record-timing", action="store_true", help="Store wall time in the result file")

    cmp_ = subcommands.add_parser("compare", parents=[common], help="Paired comparison of decoders")
    cmp_.add_argument(
        "--decoder",
        action="append",
        default=None,
        help="weights[:algorithm[:iterations]], repeatable "
        f"(default: {' '.join(DEFAULT_DECODERS)})",
    )
    cmp_.add_argument("--workers", type=int, default=None, help="Parallel chunk workers")
    cmp_.add_argument("--max-frames", type=int, default=None, help="Frame cap per SNR point")
    cmp_.add_argument("--record-timing", action="store_true", help="Store wall time in the result file")

    analyze = subcommands.add_parser(
        "analyze", parents=[common], help="Posterior LLR statistics of the all-zero codeword"
    )
    analyze.add_argument("--decoder", action="append", default=None, help="weights[:algorithm[:iterations]]")
    analyze.add_argument("--trials", type=int, default=10_000, help="Noise realizations (default: 10000)")

    enc = subcommands.add_parser("encode", parents=[common], help="Encode messages to the serialized frame")
    enc.add_argument("messages", nargs="*", help="Messages as binary (K digits) or hex (0x..., K/4 digits)")
    enc.add_argument("--in", dest="message_file", type=Path, default=None, help="File with one message per line")
    enc.add_argument("--symbols", action="store_true", help="Emit BPSK symbols instead of bits")

    dec = subcommands.add_parser("decode", parents=[common], help="Decode channel LLR frames")
    _decoder_options(dec)
    dec.add_argument("--llr-in", default="-", help="LLR frame file, one frame per line ('-' = stdin)")
    dec.add_argument("--posterior-out", type=Path, default=None, help="Also write final posteriors")
    dec.add_argument("--reference", type=Path, default=None, help="Transmitted messages, for error counts")

    tr = subcommands.add_parser("train", parents=[common], help="Learn extrinsic weights")
    tr.add_argument("--loss", choices=["bce", "mse"], default=None, help="Training loss")
    tr.add_argument("--scheme", choices=["shared", "positional"], default=None, help="Weight scheme")
    tr.add_argument("--base", default=None, help="Base SISO algorithm (map or maxlog)")
    tr.add_argument("--lr", type=float, default=None, help="Adam learning rate")
    tr.add_argument("--batch", type=int, default=None, help="Frames per step")
    tr.add_argument("--steps", type=int, default=None, help="Optimizer steps")
    tr.add_argument("--iterations", type=int, default=None, help="Decoding iterations")

    return parser


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)

    configure_logging(level=args.log_level, json_logs=args.log_json)

    handlers = {
        "simulate": _handle_simulate,
        "compare": _handle_compare,
        "analyze": _handle_analyze,
        "encode": _handle_encode,
        "decode": _handle_decode,
        "train": _handle_train,
    }
    handler = handlers.get(args.command)
    if handler is None:
        parser.error("Unknown command")
        return 1
    try:
        return handler(args)
    except (ConfigurationError, ContractError, OSError) as exc:
        LOGGER.error("%s failed: %s", args.command, exc, extra={"command": args.command, "error": str(exc)})
        return 1


def _load_experiment(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is not None:
        resolved = args.config.resolve()
        if not resolved.exists():
            raise ConfigurationError(f"Configuration file not found: {resolved}")
        cfg = load_config(resolved)
    elif DEFAULT_CONFIG.exists():
        cfg = load_config(DEFAULT_CONFIG.resolve())
    else:
        cfg = ExperimentConfig()

    if args.K is not None:
        cfg.code = replace(cfg.code, K=args.K, f1=None, f2=None)
    if args.channel is not None:
        cfg.channel.kind = args.channel
    if args.snr is not None:
        cfg.channel.snr_db = tuple(args.snr)
    if args.sigma_b is not None:
        cfg.channel.sigma_b = args.sigma_b
        cfg.training.sigma_b = args.sigma_b
    if args.rho is not None:
        cfg.channel.rho = args.rho
        cfg.training.rho = args.rho
    if args.seed is not None:
        cfg.simulation.seed = args.seed
        cfg.training.seed = args.seed
    if getattr(args, "weights", None) is not None:
        cfg.decoder.weights = args.weights
    if getattr(args, "iterations", None) is not None:
        cfg.decoder.iterations = args.iterations
        cfg.training.iterations = args.iterations
    if getattr(args, "algorithm", None) is not None:
        cfg.decoder.algorithm = args.algorithm
    if getattr(args, "workers", None) is not None:
        cfg.simulation.workers = args.workers
    if getattr(args, "max_frames", None) is not None:
        cfg.simulation.max_frames = args.max_frames
    return cfg


def _parse_decoder(text: str) -> DecodeConfig:
    parts = text.split(":")
    if not 1 <= len(parts) <= 3 or not parts[0]:
        raise ConfigurationError(f"decoder spec must be weights[:algorithm[:iterations]], got {text!r}")
    algorithm = parts[1] if len(parts) > 1 and parts[1] else "max_log_map"
    try:
        iterations = int(parts[2]) if len(parts) > 2 else None
    except ValueError:
        raise ConfigurationError(f"iterations in {text!r} must be an integer") from None
    return decoder_from(parts[0], algorithm, iterations)


def _output_path(args: argparse.Namespace, cfg: ExperimentConfig, default_name: str) -> Path:
    return args.out if args.out is not None else cfg.output_dir / default_name


def _handle_simulate(args: argparse.Namespace) -> int:
    cfg = _load_experiment(args)
    code = build_code(cfg.code)
    decoder = build_decoder(cfg.decoder)
    result = simulate(
        code,
        decoder,
        build_channel(cfg.channel),
        snr_grid(cfg.channel),
        build_stop_rule(cfg.simulation),
        seed=cfg.simulation.seed,
        batch_size=cfg.simulation.batch_size,
        workers=cfg.simulation.workers,
    )
    path = write_sim_result(_output_path(args, cfg, "simulate.csv"), result, record_timing=args.record_timing)
    print(f"{code.label} {decoder.label}")
    for row in result.rows:
        print(f"  {row.snr_db:g} dB: frames={row.frames} ber={row.ber:.3e} bler={row.bler:.3e}")
    print(f"wrote {path}")
    return 0


def _handle_compare(args: argparse.Namespace) -> int:
    cfg = _load_experiment(args)
    code = build_code(cfg.code)
    decoders = [_parse_decoder(text) for text in (args.decoder or DEFAULT_DECODERS)]
    result = compare(
        code,
        decoders,
        build_channel(cfg.channel),
        snr_grid(cfg.channel),
        build_stop_rule(cfg.simulation),
        seed=cfg.simulation.seed,
        batch_size=cfg.simulation.batch_size,
        workers=cfg.simulation.workers,
    )
    path = write_compare_result(_output_path(args, cfg, "compare.csv"), result, record_timing=args.record_timing)
    reference = result.labels[0]
    for point, snr in enumerate(result.snr_db):
        print(f"{snr:g} dB")
        for label in result.labels:
            row = result.rows[label][point]
            line = f"  {label}: ber={row.ber:.3e} bler={row.bler:.3e}"
            if label != reference:
                test = result.sign_test(reference, label, point)
                line += f" (sign test {reference} better: p={test.p_value:.3g})"
            print(line)
    print(f"wrote {path}")
    return 0


def _handle_analyze(args: argparse.Namespace) -> int:
    cfg = _load_experiment(args)
    code = build_code(cfg.code)
    decoders = [_parse_decoder(text) for text in (args.decoder or DEFAULT_DECODERS[:2])]
    channel = build_channel(cfg.channel)
    stats = analyze_llr(
        code,
        decoders,
        channel,
        args.trials,
        seed=cfg.simulation.seed,
        batch_size=cfg.simulation.batch_size,
    )
    metadata = {
        "command": "analyze",
        "code": code_metadata(code),
        "decoders": {item.label: decoder_metadata(dec) for item, dec in zip(stats, decoders)},
        "channel": channel.describe(),
        "seed": cfg.simulation.seed,
        "trials": args.trials,
    }
    path = write_llr_stats(_output_path(args, cfg, "analyze.csv"), stats, metadata)
    for item in stats:
        print(f"{item.label}: mean+2std >= 0 at {item.zero_crossing_fraction:.3f} of positions")
    print(f"wrote {path}")
    return 0


_HEX = re.compile(r"^(0x)?[0-9a-fA-F]+$")


def parse_message(text: str, K: int) -> np.ndarray:
    """Binary string of ``K`` digits, or hex (most significant bit first) of ``K / 4`` digits."""

    token = text.strip()
    if len(token) == K and set(token) <= {"0", "1"}:
        return np.array([int(c) for c in token], dtype=np.int64)
    if _HEX.match(token):
        digits = token[2:] if token.lower().startswith("0x") else token
        if 4 * len(digits) == K:
            bits = bin(int(digits, 16))[2:].zfill(K)
            return np.array([int(c) for c in bits], dtype=np.int64)
    raise ContractError(f"message {text!r} is neither {K} binary digits nor {K // 4} hex digits")


def _open_output(path: Optional[Path]) -> TextIO:
    if path is None:
        return sys.stdout
    path.parent.mkdir(parents=True, exist_ok=True)
    return path.open("w", encoding="utf-8")


def _write_lines(path: Optional[Path], text: str) -> None:
    handle = _open_output(path)
    try:
        handle.write(text)
    finally:
        if handle is not sys.stdout:
            handle.close()


def _bit_lines(bits: np.ndarray) -> str:
    return "".join("".join(str(int(b)) for b in row) + "\n" for row in bits)


def _read_messages(lines: Iterable[str], K: int) -> List[np.ndarray]:
    return [parse_message(line, K) for line in lines if line.strip() and not line.lstrip().startswith("#")]


def _handle_encode(args: argparse.Namespace) -> int:
    cfg = _load_experiment(args)
    code = build_code(cfg.code)
    messages = _read_messages(args.messages, code.K)
    if args.message_file is not None:
        messages.extend(_read_messages(args.message_file.read_text(encoding="utf-8").splitlines(), code.K))
    if not messages:
        raise ContractError("no messages given")
    frame = encode(code, np.stack(messages))
    if args.symbols:
        text = format_rows(serialize(code, frame), fmt="%g")
    else:
        text = _bit_lines(multiplex(code, frame))
    _write_lines(args.out, text)
    return 0


def _handle_decode(args: argparse.Namespace) -> int:
    cfg = _load_experiment(args)
    code = build_code(cfg.code)
    decoder = build_decoder(cfg.decoder)
    if args.llr_in == "-":
        received = read_llr_lines(sys.stdin)
    else:
        received = read_llr_file(Path(args.llr_in))
    result = turbo_decode(code, depuncture(code, received), decoder)
    _write_lines(args.out, _bit_lines(result.bits))
    if args.posterior_out is not None:
        _write_lines(args.posterior_out, format_rows(result.posterior))
    log_step(LOGGER, phase="decode", step="frames", extra={"frames": int(result.bits.shape[0])})

    if args.reference is not None:
        reference = np.stack(
            _read_messages(args.reference.read_text(encoding="utf-8").splitlines(), code.K)
        )
        if reference.shape != result.bits.shape:
            raise ContractError(
                f"reference holds {reference.shape[0]} messages for {result.bits.shape[0]} frames"
            )
        errors = np.count_nonzero(reference != result.bits, axis=1)
        ber = errors.sum() / errors.size / code.K
        bler = np.count_nonzero(errors) / errors.size
        print(f"frames={errors.size} ber={ber:.3e} bler={bler:.3e}", file=sys.stderr)
    return 0


def _handle_train(args: argparse.Namespace) -> int:
    from tinyturbo.training import train

    cfg = _load_experiment(args)
    training = cfg.training
    overrides = {
        "loss": args.loss,
        "scheme": args.scheme,
        "base_algorithm": args.base,
        "learning_rate": args.lr,
        "batch_size": args.batch,
        "steps": args.steps,
        "train_snr_db": args.snr[0] if args.snr else None,
        "channel_kind": args.channel,
    }
    training = replace(training, **{key: value for key, value in overrides.items() if value is not None})
    code = build_code(cfg.code)
    report = train(code, training)

    weights_path = _output_path(args, cfg, "weights.json")
    save_weights(report.weights, weights_path)
    metadata = {
        "command": "train",
        "code": code_metadata(code),
        "loss": training.loss,
        "scheme": training.scheme,
        "base_algorithm": training.base_algorithm,
        "learning_rate": training.learning_rate,
        "batch_size": training.batch_size,
        "steps": training.steps,
        "train_snr_db": training.train_snr_db,
        "channel": training.channel_kind,
        "seed": training.seed,
    }
    stem = weights_path.with_suffix("")
    write_table(
        stem.with_name(stem.name + "-loss.csv"),
        metadata,
        ("step", "loss"),
        [(step + 1, value) for step, value in enumerate(report.losses)],
    )
    write_table(
        stem.with_name(stem.name + "-validation.csv"),
        dict(metadata, validation_snr_db=training.validation_snr_db, validation_frames=training.validation_frames),
        ("step", "ber"),
        report.validation,
    )
    print(f"final loss {report.losses[-1]:.6f}")
    if report.validation:
        print(f"validation ber {report.validation[-1][1]:.3e}")
    print(f"wrote {weights_path}")
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
