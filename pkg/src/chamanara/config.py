"""Run configuration and sequence-family parsing."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .dyadic import (SparseExponentSequence, explicit_sequence, exponential_sequence,
                     polynomial_sequence)

OUTPUT_DIR_ENV = "CHAMANARA_OUTPUT_DIR"

# Documented caps for numeric parameters.
MAX_PRECISION = 4096
MAX_DEPTH = 1
MAX_WINDOW = 2001
MAX_PERIOD = 20
MIN_TOL_EXPONENT = 4
MAX_TOL_EXPONENT = 256
MAX_EDGES = 64

SHORTHANDS: dict[str, dict] = {
    "exponential": {"kind": "exponential", "base": 2, "offset": -1},
    "squares": {"kind": "polynomial", "coefficients": [0, 0, 1]},
    "polynomial": {"kind": "polynomial", "coefficients": [0, 0, 1]},
    "cubes": {"kind": "polynomial", "coefficients": [0, 0, 0, 1]},
}

COMMANDS = ("orbit", "separation", "accumulation", "periodic", "verify", "render")


class ConfigError(ValueError):
    """A configuration value outside its documented domain."""


def load_sequence_spec(spec: Union[str, dict]) -> dict:
    """The JSON object behind a shorthand name, JSON text or JSON file path."""
    if isinstance(spec, dict):
        return spec
    text = spec.strip()
    if text in SHORTHANDS:
        return dict(SHORTHANDS[text])
    if os.path.isfile(text):
        text = Path(text).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"sequence spec {spec!r} is neither a known name nor JSON") from exc
    if not isinstance(obj, dict):
        raise ConfigError("a sequence spec is a JSON object")
    return obj


def _int_list(obj: Any, what: str) -> list[int]:
    if not isinstance(obj, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in obj):
        raise ConfigError(f"{what} must be a list of integers")
    return obj


def parse_sequence_spec(spec: Union[str, dict]) -> SparseExponentSequence:
    """Build a sparse exponent sequence from its JSON description.

    Kinds: ``polynomial`` (``coefficients``, lowest degree first, degree at
    least 2), ``exponential`` (``base``, ``offset``: ``s_n = base^n +
    offset``) and ``explicit`` (``values`` followed by a ``tail`` spec).
    A name from :data:`SHORTHANDS`, a JSON string or a path to a JSON file
    is accepted too.
    """
    obj = load_sequence_spec(spec)
    kind = obj.get("kind")
    try:
        if kind == "polynomial":
            return polynomial_sequence(_int_list(obj.get("coefficients"), "coefficients"))
        if kind == "exponential":
            base, offset = obj.get("base", 2), obj.get("offset", -1)
            if not isinstance(base, int) or not isinstance(offset, int):
                raise ConfigError("base and offset must be integers")
            return exponential_sequence(base, offset)
        if kind == "explicit":
            if "tail" not in obj:
                raise ConfigError("an explicit sequence needs a tail spec")
            return explicit_sequence(_int_list(obj.get("values"), "values"),
                                     parse_sequence_spec(obj["tail"]))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown sequence kind {kind!r}")


def parse_window(text: str) -> tuple[int, int]:
    """``"a:b"`` to ``(a, b)`` with ``a <= b``."""
    try:
        a, b = (int(v) for v in text.split(":"))
    except ValueError as exc:
        raise ConfigError(f"window {text!r} is not of the form a:b") from exc
    if a > b:
        raise ConfigError(f"window {text!r} is empty")
    if b - a + 1 > MAX_WINDOW:
        raise ConfigError(f"window {text!r} exceeds {MAX_WINDOW} points")
    return a, b


def _check_range(name: str, value: int, lo: int, hi: int) -> None:
    if not lo <= value <= hi:
        raise ConfigError(f"{name} = {value} is outside [{lo}, {hi}]")


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of a CLI run."""

    command: str
    x_spec: dict = field(default_factory=lambda: dict(SHORTHANDS["exponential"]))
    y_spec: dict = field(default_factory=lambda: dict(SHORTHANDS["exponential"]))
    window: tuple[int, int] = (-50, 50)
    precision: int = 128
    depth: int = 1
    tol_exponent: int = 20
    n_max: int = 200
    period: int = 2
    edges: int = 6
    scale: int = 512
    direction: str = "forward"
    workers: int = 1
    output_dir: Path = Path(".")
    stem: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        _check_range("precision", self.precision, 1, MAX_PRECISION)
        _check_range("depth", self.depth, 0, MAX_DEPTH)
        _check_range("tol exponent", self.tol_exponent, MIN_TOL_EXPONENT, MAX_TOL_EXPONENT)
        _check_range("period", self.period, 1, MAX_PERIOD)
        _check_range("edges", self.edges, 0, MAX_EDGES)
        _check_range("n_max", self.n_max, 0, MAX_WINDOW - 1)
        _check_range("scale", self.scale, 16, 8192)
        _check_range("workers", self.workers, 1, 64)
        a, b = self.window
        if a > b or b - a + 1 > MAX_WINDOW:
            raise ConfigError(f"invalid window {self.window}")
        if self.direction not in ("forward", "backward"):
            raise ConfigError("direction is 'forward' or 'backward'")

    def sequences(self) -> tuple[SparseExponentSequence, SparseExponentSequence]:
        return parse_sequence_spec(self.x_spec), parse_sequence_spec(self.y_spec)

    def output_path(self, suffix: str) -> Path:
        return self.output_dir / f"{self.stem or self.command}{suffix}"

    def to_dict(self) -> dict:
        return {
            "command": self.command, "x_seq": self.x_spec, "y_seq": self.y_spec,
            "window": list(self.window), "precision": self.precision, "depth": self.depth,
            "tol_exponent": self.tol_exponent, "n_max": self.n_max, "period": self.period,
            "edges": self.edges, "scale": self.scale, "direction": self.direction,
        }


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


__all__ = ["COMMANDS", "ConfigError", "OUTPUT_DIR_ENV", "RunConfig", "SHORTHANDS",
           "default_output_dir", "load_sequence_spec", "parse_sequence_spec", "parse_window"]
