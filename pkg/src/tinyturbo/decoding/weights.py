"""Extrinsic scaling weights and their JSON file format.

Each iteration carries six weights ``(a1, a2, a3, b1, b2, b3)``: the first
three scale the posterior, systematic and prior terms of decoder 1, the last
three those of decoder 2. The positional scheme stores a length-``K`` vector
per weight instead of a scalar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from tinyturbo.core.errors import ConfigurationError

SCHEMES = ("classical", "shared", "positional")

TINYTURBO_WEIGHTS = (
    (0.445, 0.584, 1.0, 0.641, 0.779, 0.662),
    (0.834, 0.795, 0.725, 0.863, 0.716, 0.645),
    (0.911, 0.715, 0.638, 0.263, 0.616, 0.938),
)


@dataclass(frozen=True)
class WeightSet:
    """``values`` has shape ``(M, 6)`` or, for the positional scheme, ``(M, 6, K)``."""

    scheme: str
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"unknown weight scheme {self.scheme!r} (known: {SCHEMES})")
        values = np.array(self.values, dtype=np.float64)
        expected_ndim = 3 if self.scheme == "positional" else 2
        if values.ndim != expected_ndim or values.shape[0] < 1 or values.shape[1] != 6:
            raise ConfigurationError(
                f"{self.scheme} weights need shape (M, 6{', K' if expected_ndim == 3 else ''}), got {values.shape}"
            )
        if self.scheme == "classical" and not np.all(values == 1.0):
            raise ConfigurationError("classical weights must all be 1")
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("weights must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def classical(cls, iterations: int) -> "WeightSet":
        return cls("classical", np.ones((iterations, 6)))

    @classmethod
    def ones(cls, iterations: int, scheme: str = "shared", K: Optional[int] = None) -> "WeightSet":
        if scheme == "positional":
            if K is None:
                raise ConfigurationError("positional weights need K")
            return cls("positional", np.ones((iterations, 6, K)))
        return cls(scheme, np.ones((iterations, 6)))

    @property
    def iterations(self) -> int:
        return int(self.values.shape[0])

    @property
    def K(self) -> Optional[int]:
        return int(self.values.shape[2]) if self.scheme == "positional" else None

    @property
    def num_parameters(self) -> int:
        return int(self.values.size)

    def half(self, iteration: int, decoder: int) -> Tuple[Any, Any, Any]:
        """``(w1, w2, w3)`` for decoder 0 or 1 of an iteration: scalars or length-K vectors."""
        row = self.values[iteration, 3 * decoder : 3 * decoder + 3]
        return row[0], row[1], row[2]

    def truncate(self, iterations: int) -> "WeightSet":
        if not 1 <= iterations <= self.iterations:
            raise ConfigurationError(
                f"cannot truncate {self.iterations} iterations to {iterations}"
            )
        return WeightSet(self.scheme, self.values[:iterations])

    def with_values(self, values: np.ndarray) -> "WeightSet":
        scheme = "shared" if self.scheme == "classical" else self.scheme
        return WeightSet(scheme, values)

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "scheme": self.scheme,
            "iterations": self.iterations,
            "weights": self.values.tolist(),
        }
        if self.K is not None:
            payload["K"] = self.K
        return payload

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WeightSet":
        if not isinstance(data, dict):
            raise ConfigurationError("weight file must contain a mapping")
        try:
            scheme = str(data["scheme"])
            weights = np.asarray(data["weights"], dtype=np.float64)
        except KeyError as exc:
            raise ConfigurationError(f"weight file is missing {exc.args[0]!r}") from None
        result = cls(scheme, weights)
        iterations = data.get("iterations")
        if iterations is not None and int(iterations) != result.iterations:
            raise ConfigurationError(
                f"weight file declares {iterations} iterations but holds {result.iterations}"
            )
        declared_k = data.get("K")
        if declared_k is not None and result.K is not None and int(declared_k) != result.K:
            raise ConfigurationError(f"weight file declares K={declared_k} but holds K={result.K}")
        return result


def tinyturbo_preset() -> WeightSet:
    return WeightSet("shared", np.asarray(TINYTURBO_WEIGHTS))


def load_weights(path: Union[str, Path]) -> WeightSet:
    with Path(path).open("r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid weight JSON ({exc.msg})") from None
    return WeightSet.from_dict(data)


def save_weights(weights: WeightSet, path: Union[str, Path]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(weights.to_dict(), indent=2) + "\n", encoding="utf-8")
    return target


def resolve_weights(spec: Union[str, Path, WeightSet], iterations: int) -> WeightSet:
    """``classical``, ``tinyturbo`` or a weight file path."""

    if isinstance(spec, WeightSet):
        return spec
    name = str(spec)
    if name == "classical":
        return WeightSet.classical(iterations)
    if name == "tinyturbo":
        return tinyturbo_preset()
    return load_weights(name)
