"""Run configuration and deterministic JSON report encoding.

Reports are byte-stable given (inputs, config): keys are sorted, floats
are printed with 17 significant digits (lossless round-trip), and the
only nondeterministic field is the wall-clock ``timing``, which callers
comparing reports should drop.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .tags import TAG_SET


@dataclass(frozen=True)
class Tolerances:
    formula: float = 1e-9
    optimizer: float = 1e-6
    cluster: float = 1e-3

    def __post_init__(self):
        for name in ("formula", "optimizer", "cluster"):
            if getattr(self, name) <= 0:
                raise ValueError(f"tolerance {name} must be positive")


@dataclass(frozen=True)
class RunConfig:
    seed: int = 1234
    tolerances: Tolerances = field(default_factory=Tolerances)
    grid_density: int = 100_000
    p_values: tuple = (1.5, 2.0, 3.0)

    def __post_init__(self):
        if self.grid_density < 100:
            raise ValueError("grid_density must be at least 100")


def jsonable(obj):
    """Recursively convert library objects to JSON-encodable structures."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, (np.floating, np.integer)):
        return jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if callable(obj):
        return f"<callable {getattr(obj, '__name__', 'anonymous')}>"
    return str(obj)


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        return "{" + ",".join(f"{_encode(str(k))}:{_encode(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, 17-significant-digit floats."""
    return _encode(jsonable(obj))


@dataclass(frozen=True)
class Report:
    """A CLI report: echoed inputs, verdicts, rule citations, timing."""

    command: str
    inputs: object
    verdicts: object
    citations: list
    timing: float

    def __post_init__(self):
        tags = set(self.citations)
        if not tags:
            raise ValueError("every report must cite at least one rule tag")
        unknown = tags - TAG_SET
        if unknown:
            raise ValueError(f"unknown rule tags: {sorted(unknown)}")

    def to_json(self) -> str:
        return dumps({
            "command": self.command,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "citations": sorted(set(self.citations)),
            "timing": self.timing,
        })
