"""Experiment configuration files.

Same line-oriented, whitespace-delimited format as scene files, with
dotted keys namespacing one block per module:

    scene cell.scene

    controller.controller fuzzy_pi
    controller.axis fz
    controller.du_max 2.0
    controller.rulebase canonical

    fuzzy_pi.kp 0.05          # per-controller gain overrides
    fuzzy_pi.ki 0.12
    fuzzy_pi.kx 0.3
    pi.kp 0.03
    pi.ki 0.12
    pi.kx 1.0

    env.ks 10
    env.dt 0.004
    env.z_surface 0
    env.obstacle_height 20    # omit for no foreign object
    env.obstacle_xmin 260
    env.obstacle_xmax 340
    env.calib_dx 0
    env.f_setpoint -10

    out.dir results

The scene path is resolved relative to the config file.  Gains under
``controller.*`` apply to both controllers; ``pi.*`` / ``fuzzy_pi.*``
override them per kind so one file can hold both documented tunings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .control import AXES, CONTROLLER_KINDS, FUZZY_PI, ControllerConfig, Gains
from .fuzzy import RuleBase
from .scene import CalibrationTransform, Scene, parse_scene
from .sim import Environment, Obstacle

# Untuned starting gains; real experiments override them in the config.
FALLBACK_GAINS = {"kp": 0.2, "ki": 0.05, "kx": 1.0}


class ConfigError(ValueError):
    """Config text that fails to parse or validate."""


def parse_config(text: str) -> dict[str, dict[str, str]]:
    """Parse dotted-key lines into {namespace: {key: value}}.

    Un-dotted keys land in the "" namespace.  Values are kept as strings;
    consumers do the typing.
    """
    blocks: dict[str, dict[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if len(tokens) != 2:
            raise ConfigError(f"line {lineno}: expected 'key value', got {raw.strip()!r}")
        key, value = tokens
        namespace, _, name = key.rpartition(".")
        if not name:
            raise ConfigError(f"line {lineno}: empty key name in {key!r}")
        block = blocks.setdefault(namespace, {})
        if name in block:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        block[name] = value
    return blocks


def _number(blocks, namespace: str, name: str, default: float | None = None) -> float | None:
    raw = blocks.get(namespace, {}).get(name)
    if raw is None:
        return default
    try:
        v = float(raw)
    except ValueError:
        raise ConfigError(f"{namespace}.{name}: expected a number, got {raw!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{namespace}.{name}: non-finite value")
    return v


def _string(blocks, namespace: str, name: str, default: str, allowed: tuple[str, ...]) -> str:
    raw = blocks.get(namespace, {}).get(name, default)
    if raw not in allowed:
        raise ConfigError(f"{namespace}.{name}: expected one of {allowed}, got {raw!r}")
    return raw


@dataclass(frozen=True)
class ExperimentConfig:
    scene_path: Path
    scene: Scene
    env: Environment
    controllers: dict[str, ControllerConfig]  # keyed by kind
    selected: str  # controller picked by cmd_run
    f_setpoint: float
    out_dir: Path

    def controller(self, kind: str | None = None) -> ControllerConfig:
        return self.controllers[kind or self.selected]


def _controller_for(blocks, kind: str, rulebase_override: str | None) -> ControllerConfig:
    def gain(name: str) -> float:
        v = _number(blocks, kind, name)
        if v is None:
            v = _number(blocks, "controller", name, FALLBACK_GAINS[name])
        return v

    axis = _string(blocks, "controller", "axis", "fz", AXES)
    du_max = _number(blocks, "controller", "du_max", 2.0)
    rulebase = rulebase_override or _string(
        blocks, "controller", "rulebase", "canonical", ("as_printed", "canonical")
    )
    try:
        return ControllerConfig(
            kind=kind,
            gains=Gains(gain("kp"), gain("ki"), gain("kx")),
            du_max=du_max,
            axis=axis,
            rules=RuleBase.from_name(rulebase),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _environment_for(blocks) -> Environment:
    z_surface = _number(blocks, "env", "z_surface", 0.0)
    height = _number(blocks, "env", "obstacle_height")
    obstacle = None
    if height is not None and height != 0.0:
        x_min = _number(blocks, "env", "obstacle_xmin")
        x_max = _number(blocks, "env", "obstacle_xmax")
        if x_min is None or x_max is None:
            raise ConfigError("env.obstacle_height needs env.obstacle_xmin and env.obstacle_xmax")
        try:
            obstacle = Obstacle(z_top=z_surface + height, x_min=x_min, x_max=x_max)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    calibration = CalibrationTransform(
        dx=_number(blocks, "env", "calib_dx", 0.0),
        dy=_number(blocks, "env", "calib_dy", 0.0),
        dz=_number(blocks, "env", "calib_dz", 0.0),
        dyaw=_number(blocks, "env", "calib_dyaw", 0.0),
    )
    try:
        return Environment(
            z_surface=z_surface,
            stiffness=_number(blocks, "env", "ks", 10.0),
            dt=_number(blocks, "env", "dt", 0.004),
            obstacle=obstacle,
            calibration=calibration,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_experiment(path: str | Path, rulebase_override: str | None = None) -> ExperimentConfig:
    """Load and validate an experiment config file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    blocks = parse_config(text)

    known = {"", "controller", "pi", "fuzzy_pi", "env", "out"}
    unknown = set(blocks) - known
    if unknown:
        raise ConfigError(f"unknown config block(s): {sorted(unknown)}")

    scene_rel = blocks.get("", {}).get("scene")
    if scene_rel is None:
        raise ConfigError("config must name a scene file (key: scene)")
    scene_path = (path.parent / scene_rel).resolve()
    scene = parse_scene(scene_path.read_text(encoding="utf-8"))

    selected = _string(blocks, "controller", "controller", FUZZY_PI, CONTROLLER_KINDS)
    controllers = {
        kind: _controller_for(blocks, kind, rulebase_override) for kind in CONTROLLER_KINDS
    }

    out_rel = blocks.get("out", {}).get("dir", ".")
    return ExperimentConfig(
        scene_path=scene_path,
        scene=scene,
        env=_environment_for(blocks),
        controllers=controllers,
        selected=selected,
        f_setpoint=_number(blocks, "env", "f_setpoint", -10.0),
        out_dir=(path.parent / out_rel).resolve(),
    )
