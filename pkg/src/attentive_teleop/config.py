"""Run configuration: one JSON document with every tunable parameter,
defaults embedded so a minimal config is just a world path."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .camera import CameraModel, CameraMount
from .haptics import FieldParams
from .memory import MemoryParams
from .operator import OperatorModel
from .pipeline import ControlParams, PipelineParams
from .saliency import SaliencyParams

CONFIG_SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Raised for malformed or out-of-range run configuration."""


@dataclass(frozen=True)
class RunConfig:
    world_path: str | None = None
    method: str = "amgpf"
    seed: int = 0
    out_dir: str = "out"
    max_duration: float = 240.0
    pipeline: PipelineParams = field(default_factory=PipelineParams)
    operator: OperatorModel = field(default_factory=OperatorModel)


_SECTION_TYPES = {
    "saliency": SaliencyParams,
    "memory": MemoryParams,
    "haptic": FieldParams,
    "control": ControlParams,
    "mount": CameraMount,
}

_CAMERA_KEYS = ("fx", "fy", "cx", "cy", "width", "height", "z_near", "z_far")
_PIPELINE_SCALARS = ("grid_resolution", "pixel_stride", "sensing_radius", "tick_rate")


def _build_section(cls, data: dict, label: str):
    valid = {f.name for f in fields(cls)}
    unknown = set(data) - valid
    if unknown:
        raise ConfigError(f"unknown {label} option(s): {sorted(unknown)}")
    coerced = {}
    for key, value in data.items():
        if isinstance(value, list):
            value = tuple(value)
        coerced[key] = value
    try:
        return cls(**coerced)
    except ValueError as exc:
        raise ConfigError(f"{label}: {exc}") from exc


def parse_config(data: dict) -> RunConfig:
    """Build a validated RunConfig from a parsed JSON document."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    version = data.get("schema_version", CONFIG_SCHEMA_VERSION)
    if version != CONFIG_SCHEMA_VERSION:
        raise ConfigError(f"unsupported config schema_version: {version!r}")

    method = data.get("method", "amgpf")
    if method not in ("amgpf", "gpf"):
        raise ConfigError(f"method must be one of amgpf, gpf (got {method!r})")

    sections = {}
    for name, cls in _SECTION_TYPES.items():
        sections[name] = _build_section(cls, data.get(name, {}), name)
    try:
        camera = _build_section(CameraModel, {
            k: v for k, v in data.get("camera", {}).items()
        }, "camera")
    except ConfigError:
        raise
    unknown_cam = set(data.get("camera", {})) - set(_CAMERA_KEYS)
    if unknown_cam:
        raise ConfigError(f"unknown camera option(s): {sorted(unknown_cam)}")

    pipeline_kwargs = dict(
        camera=camera,
        mount=sections["mount"],
        saliency=sections["saliency"],
        memory=sections["memory"],
        haptic=sections["haptic"],
        control=sections["control"],
    )
    for key in _PIPELINE_SCALARS:
        if key in data:
            pipeline_kwargs[key] = data[key]
    pipeline = PipelineParams(**pipeline_kwargs)
    if pipeline.pixel_stride < 1:
        raise ConfigError("pixel_stride must be >= 1")
    if pipeline.grid_resolution <= 0:
        raise ConfigError("grid_resolution must be > 0")
    if pipeline.tick_rate <= 0:
        raise ConfigError("tick_rate must be > 0")

    operator = _build_section(OperatorModel, data.get("operator", {}), "operator")

    known_top = ({"schema_version", "world", "method", "seed", "out_dir",
                  "max_duration", "camera", "operator"}
                 | set(_SECTION_TYPES) | set(_PIPELINE_SCALARS))
    unknown = set(data) - known_top
    if unknown:
        raise ConfigError(f"unknown top-level option(s): {sorted(unknown)}")

    return RunConfig(
        world_path=data.get("world"),
        method=method,
        seed=int(data.get("seed", 0)),
        out_dir=str(data.get("out_dir", "out")),
        max_duration=float(data.get("max_duration", 240.0)),
        pipeline=pipeline,
        operator=operator,
    )


def config_to_dict(config: RunConfig) -> dict:
    p = config.pipeline
    cam = {k: getattr(p.camera, k) for k in _CAMERA_KEYS}
    out = {
        "schema_version": CONFIG_SCHEMA_VERSION,
        "world": config.world_path,
        "method": config.method,
        "seed": config.seed,
        "out_dir": config.out_dir,
        "max_duration": config.max_duration,
        "camera": cam,
        "mount": asdict(p.mount),
        "saliency": {k: (list(v) if isinstance(v, tuple) else v)
                     for k, v in asdict(p.saliency).items()},
        "memory": asdict(p.memory),
        "haptic": asdict(p.haptic),
        "control": asdict(p.control),
        "operator": asdict(config.operator),
    }
    for key in _PIPELINE_SCALARS:
        out[key] = getattr(p, key)
    return out


def load_config(path) -> RunConfig:
    try:
        with open(path) as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    return parse_config(data)


def apply_overrides(data: dict, overrides: list[str]) -> dict:
    """Apply dotted key=value overrides to a raw config dict.

    Values parse as JSON when possible, else as strings, so
    `haptic.gamma=0.5` and `method=gpf` both work.
    """
    out = json.loads(json.dumps(data))  # deep copy
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value: {item!r}")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override path {key!r} crosses a non-object")
        node[parts[-1]] = value
    return out
