"""Neutral scene description: the CAD-model stand-in.

Scene files are line-oriented, UTF-8, whitespace-delimited, with ``#``
comments:

    clearance 30
    speed 50
    object cup pos 100 200 0 rpy 0 0 90 tags pick
    object pallet pos 300 200 0 rpy 0 0 0 tags place

``clearance`` (mm, approach height above pick/place poses) and ``speed``
(mm/s) default to 30 and 50 when omitted.  Tags are a comma-separated
subset of pick/place/obstacle; an object cannot be both pick and place.
Angles are fixed-axis ZYX roll-pitch-yaw in degrees, normalized into
(-180, 180].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

TAGS = ("pick", "place", "obstacle")

DEFAULT_CLEARANCE = 30.0
DEFAULT_SPEED = 50.0


class SceneError(ValueError):
    """Scene text that violates the format or the scene invariants."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where = f" ({where})"
        super().__init__(message + where)


def normalize_angle(a: float) -> float:
    """Map an angle in degrees into (-180, 180].

    Already-normalized values pass through bit-identically so repeated
    normalization is the identity.
    """
    if -180.0 < a <= 180.0:
        return a
    r = a % 360.0
    if r > 180.0:
        r -= 360.0
    return r


@dataclass(frozen=True)
class Pose:
    """Rigid-body pose: position in mm, fixed-axis ZYX angles in degrees."""

    x: float
    y: float
    z: float
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    def __post_init__(self) -> None:
        for name in ("x", "y", "z", "roll", "pitch", "yaw"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"pose field {name} is not finite")
        object.__setattr__(self, "roll", normalize_angle(self.roll))
        object.__setattr__(self, "pitch", normalize_angle(self.pitch))
        object.__setattr__(self, "yaw", normalize_angle(self.yaw))

    def lifted(self, dz: float) -> "Pose":
        return replace(self, z=self.z + dz)


@dataclass(frozen=True)
class SceneObject:
    name: str
    pose: Pose
    tags: frozenset[str]

    def __post_init__(self) -> None:
        bad = set(self.tags) - set(TAGS)
        if bad:
            raise ValueError(f"unknown tags {sorted(bad)} on object {self.name!r}")
        if "pick" in self.tags and "place" in self.tags:
            raise ValueError(f"object {self.name!r} cannot be both pick and place")


@dataclass(frozen=True)
class Scene:
    objects: tuple[SceneObject, ...]
    clearance: float = DEFAULT_CLEARANCE
    speed: float = DEFAULT_SPEED

    def __post_init__(self) -> None:
        if not self.clearance > 0.0:
            raise ValueError(f"clearance must be > 0, got {self.clearance}")
        if not self.speed > 0.0:
            raise ValueError(f"speed must be > 0, got {self.speed}")

    def tagged(self, tag: str) -> list[SceneObject]:
        return [o for o in self.objects if tag in o.tags]


@dataclass(frozen=True)
class CalibrationTransform:
    """Rigid offset between the modeled and the real cell: translation in
    mm plus a yaw rotation (degrees) about the world z axis."""

    dx: float = 0.0
    dy: float = 0.0
    dz: float = 0.0
    dyaw: float = 0.0

    def __post_init__(self) -> None:
        for name in ("dx", "dy", "dz", "dyaw"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"calibration field {name} is not finite")

    def is_identity(self) -> bool:
        return self.dx == self.dy == self.dz == self.dyaw == 0.0

    def apply_point(self, x: float, y: float, z: float) -> tuple[float, float, float]:
        if self.dyaw != 0.0:
            rad = math.radians(self.dyaw)
            c, s = math.cos(rad), math.sin(rad)
            x, y = c * x - s * y, s * x + c * y
        return x + self.dx, y + self.dy, z + self.dz

    def apply_pose(self, pose: Pose) -> Pose:
        x, y, z = self.apply_point(pose.x, pose.y, pose.z)
        return Pose(x, y, z, pose.roll, pose.pitch, normalize_angle(pose.yaw + self.dyaw))


def apply_calibration(scene: Scene, transform: CalibrationTransform) -> Scene:
    """Rigidly transform every object pose; the identity transform
    returns an equal scene."""
    if transform.is_identity():
        return scene
    objects = tuple(replace(o, pose=transform.apply_pose(o.pose)) for o in scene.objects)
    return replace(scene, objects=objects)


def _parse_number(token: str, lineno: int, col: int) -> float:
    try:
        v = float(token)
    except ValueError:
        raise SceneError(f"expected a number, got {token!r}", lineno, col) from None
    if not math.isfinite(v):
        raise SceneError(f"non-finite number {token!r}", lineno, col)
    return v


def _tokenize(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = line.split()
        if tokens:
            # column of each token = 1-based offset in the raw line
            cols = []
            pos = 0
            for tok in tokens:
                pos = line.index(tok, pos)
                cols.append(pos + 1)
                pos += len(tok)
            yield lineno, tokens, cols


def parse_scene(text: str) -> Scene:
    """Parse scene text; raises SceneError with line/column diagnostics."""
    clearance = DEFAULT_CLEARANCE
    speed = DEFAULT_SPEED
    objects: list[SceneObject] = []
    names: set[str] = set()

    for lineno, tokens, cols in _tokenize(text):
        key = tokens[0]
        if key == "clearance" or key == "speed":
            if len(tokens) != 2:
                raise SceneError(f"{key} takes exactly one value", lineno, cols[0])
            value = _parse_number(tokens[1], lineno, cols[1])
            if key == "clearance":
                clearance = value
            else:
                speed = value
        elif key == "object":
            objects.append(_parse_object(tokens, cols, lineno, names))
        else:
            raise SceneError(f"unknown directive {key!r}", lineno, cols[0])

    try:
        return Scene(tuple(objects), clearance, speed)
    except ValueError as exc:
        raise SceneError(str(exc)) from None


def _parse_object(tokens: list[str], cols: list[int], lineno: int, names: set[str]) -> SceneObject:
    # object <name> pos <x> <y> <z> rpy <r> <p> <y> tags <t,...>
    if len(tokens) != 12:
        raise SceneError(
            "object line must be: object <name> pos <x> <y> <z> rpy <r> <p> <y> tags <t,...>",
            lineno,
            cols[0],
        )
    name = tokens[1]
    if name in names:
        raise SceneError(f"duplicate object name {name!r}", lineno, cols[1])
    names.add(name)
    for idx, keyword in ((2, "pos"), (6, "rpy"), (10, "tags")):
        if tokens[idx] != keyword:
            raise SceneError(f"missing required field {keyword!r}", lineno, cols[idx])
    numbers = [_parse_number(tokens[i], lineno, cols[i]) for i in (3, 4, 5, 7, 8, 9)]
    tags = frozenset(t for t in tokens[11].split(",") if t)
    if not tags:
        raise SceneError("object needs at least one tag", lineno, cols[11])
    try:
        return SceneObject(name, Pose(*numbers), tags)
    except ValueError as exc:
        raise SceneError(str(exc), lineno, cols[0]) from None


def emit_scene(scene: Scene) -> str:
    """Render a scene back to text.  Numbers use repr so parsing the
    result reproduces an equal Scene."""
    lines = [f"clearance {scene.clearance!r}", f"speed {scene.speed!r}"]
    for o in scene.objects:
        p = o.pose
        tags = ",".join(sorted(o.tags))
        lines.append(
            f"object {o.name} pos {p.x!r} {p.y!r} {p.z!r} "
            f"rpy {p.roll!r} {p.pitch!r} {p.yaw!r} tags {tags}"
        )
    return "\n".join(lines) + "\n"
