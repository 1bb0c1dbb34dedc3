"""Experiment configuration with YAML and JSON support."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from tinyturbo.channel.model import ChannelSpec
from tinyturbo.coding.codec import PuncturePattern, TurboCode, make_code
from tinyturbo.coding.trellis import RscSpec
from tinyturbo.core.errors import ConfigurationError
from tinyturbo.core.models import (
    ChannelConfig,
    CodeConfig,
    DecoderConfig,
    SimulationConfig,
    TrainingConfig,
)
from tinyturbo.decoding.decoder import DecodeConfig
from tinyturbo.decoding.weights import resolve_weights
from tinyturbo.simulation.harness import StopRule

try:
    import yaml  # type: ignore
except ImportError:  # pragma: no cover - optional dependency guard
    yaml = None

NAMED_WEIGHTS = ("classical", "tinyturbo")


def _as_int(value: Any) -> int:
    """Integers, or strings with a base prefix such as ``0o15`` / ``0b1101``."""
    if isinstance(value, str):
        return int(value.strip(), 0)
    return int(value)


@dataclass
class ExperimentConfig:
    """Top-level configuration object for tinyturbo experiments."""

    output_dir: Path = Path("results")
    code: CodeConfig = field(default_factory=CodeConfig)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    decoder: DecoderConfig = field(default_factory=DecoderConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)

    def resolve_relative_paths(self, base_dir: Path) -> None:
        """Resolve the output directory and a weight file path against ``base_dir``."""

        if not self.output_dir.is_absolute():
            self.output_dir = base_dir / self.output_dir
        weights = self.decoder.weights
        if weights not in NAMED_WEIGHTS and not Path(weights).is_absolute():
            self.decoder.weights = str(base_dir / weights)


class ConfigLoader:
    """Load experiment files in YAML or JSON format."""

    def __init__(self, base_dir: Optional[Path] = None) -> None:
        self._base_dir = base_dir or Path.cwd()

    def load(self, path: Path | str) -> ExperimentConfig:
        config_path = self._resolve_path(Path(path))
        payload = self._load_payload(config_path)
        config = self.build(payload)
        config.resolve_relative_paths(config_path.parent)
        return config

    def _resolve_path(self, path: Path) -> Path:
        if path.is_absolute():
            return path
        return (self._base_dir / path).resolve()

    def _load_payload(self, path: Path) -> Dict[str, Any]:
        suffix = path.suffix.lower()
        if suffix in {".yaml", ".yml"}:
            if yaml is None:
                raise RuntimeError("PyYAML is required to load YAML configuration files.")
            with path.open("r", encoding="utf-8") as handle:
                payload = yaml.safe_load(handle) or {}
        elif suffix == ".json":
            with path.open("r", encoding="utf-8") as handle:
                payload = json.load(handle) or {}
        else:
            raise ConfigurationError(f"Unsupported configuration format: {suffix}")
        if not isinstance(payload, dict):
            raise ConfigurationError(f"{path}: top level must be a mapping")
        return payload

    @staticmethod
    def _section(payload: Dict[str, Any], name: str) -> Dict[str, Any]:
        section = payload.get(name) or {}
        if not isinstance(section, dict):
            raise ConfigurationError(f"{name} section must be a mapping")
        return dict(section)

    @staticmethod
    def _construct(cls, name: str, data: Dict[str, Any]):
        known = {item.name for item in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"unknown keys in {name} section: {', '.join(unknown)}")
        return cls(**data)

    def build(self, payload: Dict[str, Any]) -> ExperimentConfig:
        output_dir = Path(payload.get("output_dir", "results"))

        code_data = self._section(payload, "code")
        interleaver = code_data.pop("interleaver", None)
        if interleaver is not None:
            if not isinstance(interleaver, dict) or not {"f1", "f2"} <= set(interleaver):
                raise ConfigurationError("code.interleaver must be a mapping with f1 and f2")
            code_data["f1"] = _as_int(interleaver["f1"])
            code_data["f2"] = _as_int(interleaver["f2"])
        if "K" in code_data:
            code_data["K"] = int(code_data["K"])
        trellis = code_data.get("trellis")
        if isinstance(trellis, dict):
            try:
                code_data["trellis"] = tuple(
                    _as_int(trellis[key]) for key in ("memory", "feedforward", "feedback")
                )
            except KeyError as exc:
                raise ConfigurationError(f"code.trellis is missing {exc.args[0]!r}") from None
        puncture = code_data.get("puncture")
        if isinstance(puncture, dict):
            code_data["puncture"] = (
                tuple(int(bit) for bit in puncture.get("parity1") or ()),
                tuple(int(bit) for bit in puncture.get("parity2") or ()),
            )
        code = self._construct(CodeConfig, "code", code_data)

        channel_data = self._section(payload, "channel")
        if "snr_db" in channel_data:
            snr = channel_data["snr_db"]
            values = snr if isinstance(snr, (list, tuple)) else [snr]
            channel_data["snr_db"] = tuple(float(value) for value in values)
        for key in ("sigma_b", "rho", "burst_amplitude"):
            if key in channel_data:
                channel_data[key] = float(channel_data[key])
        if "burst_position" in channel_data:
            channel_data["burst_position"] = int(channel_data["burst_position"])
        channel = self._construct(ChannelConfig, "channel", channel_data)

        decoder_data = self._section(payload, "decoder")
        if "iterations" in decoder_data:
            decoder_data["iterations"] = int(decoder_data["iterations"])
        if "weights" in decoder_data:
            decoder_data["weights"] = str(decoder_data["weights"])
        decoder = self._construct(DecoderConfig, "decoder", decoder_data)

        simulation_data = self._section(payload, "simulation")
        for key in ("seed", "batch_size", "min_frames", "max_frames", "workers"):
            if key in simulation_data:
                simulation_data[key] = int(simulation_data[key])
        if simulation_data.get("min_block_errors") is not None:
            simulation_data["min_block_errors"] = int(simulation_data["min_block_errors"])
        simulation = self._construct(SimulationConfig, "simulation", simulation_data)

        training_data = self._section(payload, "training")
        float_keys = ("learning_rate", "train_snr_db", "sigma_b", "rho", "validation_snr_db", "beta1", "beta2", "epsilon")
        int_keys = ("batch_size", "steps", "seed", "iterations", "validation_frames", "validation_interval", "log_interval")
        for key in float_keys:
            if key in training_data:
                training_data[key] = float(training_data[key])
        for key in int_keys:
            if key in training_data:
                training_data[key] = int(training_data[key])
        training = self._construct(TrainingConfig, "training", training_data)

        return ExperimentConfig(
            output_dir=output_dir,
            code=code,
            channel=channel,
            decoder=decoder,
            simulation=simulation,
            training=training,
        )


def load_config(path: Path | str, *, base_dir: Optional[Path] = None) -> ExperimentConfig:
    """Convenience wrapper mirroring :class:`ConfigLoader` usage."""

    loader = ConfigLoader(base_dir=base_dir)
    return loader.load(path)


def build_code(cfg: CodeConfig) -> TurboCode:
    trellis = cfg.trellis
    if isinstance(trellis, (tuple, list)):
        memory, feedforward, feedback = trellis
        trellis = RscSpec(memory=int(memory), feedforward=int(feedforward), feedback=int(feedback))
    puncture = cfg.puncture
    if isinstance(puncture, (tuple, list)):
        puncture = PuncturePattern("custom", tuple(puncture[0]), tuple(puncture[1]))
    return make_code(cfg.K, trellis=trellis, f1=cfg.f1, f2=cfg.f2, puncture=puncture)


def build_channel(cfg: ChannelConfig, snr_db: Optional[float] = None) -> ChannelSpec:
    return ChannelSpec(
        kind=cfg.kind,
        snr_db=float(cfg.snr_db[0] if snr_db is None else snr_db),
        sigma_b=cfg.sigma_b,
        rho=cfg.rho,
        burst_position=cfg.burst_position,
        burst_amplitude=cfg.burst_amplitude,
    )


def decoder_from(weights: str, algorithm: str, iterations: Optional[int] = None) -> DecodeConfig:
    """Classical weights take ``iterations`` (default 3); other weight sets bring their own count."""

    resolved = resolve_weights(weights, iterations or 3)
    count = iterations if iterations is not None else resolved.iterations
    return DecodeConfig(count, algorithm, resolved)


def build_decoder(cfg: DecoderConfig) -> DecodeConfig:
    return decoder_from(cfg.weights, cfg.algorithm, cfg.iterations)


def build_stop_rule(cfg: SimulationConfig) -> StopRule:
    return StopRule(
        max_frames=cfg.max_frames,
        min_block_errors=cfg.min_block_errors,
        min_frames=cfg.min_frames,
    )


def snr_grid(cfg: ChannelConfig) -> Sequence[float]:
    return tuple(float(value) for value in cfg.snr_db)
