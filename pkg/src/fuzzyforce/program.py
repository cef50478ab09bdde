"""Robot motion programs and the scene-to-program compiler.

Program text is one instruction per line:

    MOVEL x y z r p y speed     positions mm (6 decimals), angles deg, speed mm/s
    GRIP ON | GRIP OFF
    SETFORCE axis value         arms force control for the following moves

For each (pick, place) pair, taken in file order, the compiler emits the
nine-instruction template: approach pick, descend, grip, retreat, travel
to above place, arm force control, descend to place, release, retreat.
Positions are written with micrometre resolution, so programs whose
coordinates are multiples of 1e-6 mm round-trip exactly through
emit/parse.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .control import AXES
from .scene import Pose, Scene


class CompileError(Exception):
    """Scene cannot be compiled to a program."""


class ProgramError(ValueError):
    """Program text that violates the grammar or program invariants."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"{message} (line {line})")


@dataclass(frozen=True)
class MoveL:
    """Straight-line move to a pose at a given speed (mm/s)."""

    pose: Pose
    speed: float

    def __post_init__(self) -> None:
        if not self.speed > 0.0:
            raise ValueError(f"speed must be > 0, got {self.speed}")


@dataclass(frozen=True)
class Grip:
    on: bool


@dataclass(frozen=True)
class SetForce:
    """Arms closed-loop force control on one axis at a setpoint (N)."""

    axis: str
    setpoint: float

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}")
        if not math.isfinite(self.setpoint):
            raise ValueError("setpoint must be finite")


Instruction = MoveL | Grip | SetForce


@dataclass(frozen=True)
class RobotProgram:
    instructions: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        if not self.instructions:
            raise ValueError("program must be nonempty")
        if not isinstance(self.instructions[0], MoveL):
            raise ValueError("first instruction must be a MOVEL")
        held = False
        for instr in self.instructions:
            if isinstance(instr, Grip):
                held = instr.on
        if held:
            raise ValueError("every GRIP ON must eventually be followed by GRIP OFF")


def compile_scene(scene: Scene, force_axis: str = "fz", force_setpoint: float = -10.0) -> RobotProgram:
    """Compile pick/place pairs into a motion program.

    Picks and places pair up in file order; force control arms just
    before each placement descent.
    """
    picks = scene.tagged("pick")
    places = scene.tagged("place")
    if not picks or not places:
        raise CompileError("scene needs at least one pick and one place object")
    if len(picks) != len(places):
        raise CompileError(f"unpaired objects: {len(picks)} pick vs {len(places)} place")

    up = scene.clearance
    speed = scene.speed
    instructions: list[Instruction] = []
    for pick, place in zip(picks, places):
        above_pick = pick.pose.lifted(up)
        above_place = place.pose.lifted(up)
        instructions += [
            MoveL(above_pick, speed),
            MoveL(pick.pose, speed),
            Grip(True),
            MoveL(above_pick, speed),
            MoveL(above_place, speed),
            SetForce(force_axis, force_setpoint),
            MoveL(place.pose, speed),
            Grip(False),
            MoveL(above_place, speed),
        ]
    return RobotProgram(tuple(instructions))


def _fmt_speed(v: float) -> str:
    return str(int(v)) if v == int(v) else repr(v)


def emit_program(program: RobotProgram) -> str:
    lines = []
    for instr in program.instructions:
        if isinstance(instr, MoveL):
            p = instr.pose
            lines.append(
                f"MOVEL {p.x:.6f} {p.y:.6f} {p.z:.6f} "
                f"{p.roll!r} {p.pitch!r} {p.yaw!r} {_fmt_speed(instr.speed)}"
            )
        elif isinstance(instr, Grip):
            lines.append(f"GRIP {'ON' if instr.on else 'OFF'}")
        else:
            lines.append(f"SETFORCE {instr.axis} {instr.setpoint!r}")
    return "\n".join(lines) + "\n"


def _number(token: str, lineno: int) -> float:
    try:
        v = float(token)
    except ValueError:
        raise ProgramError(f"expected a number, got {token!r}", lineno) from None
    if not math.isfinite(v):
        raise ProgramError(f"non-finite number {token!r}", lineno)
    return v


def parse_program(text: str) -> RobotProgram:
    instructions: list[Instruction] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        op = tokens[0]
        if op == "MOVEL":
            if len(tokens) != 8:
                raise ProgramError("MOVEL takes 7 values", lineno)
            nums = [_number(t, lineno) for t in tokens[1:]]
            try:
                instructions.append(MoveL(Pose(*nums[:6]), nums[6]))
            except ValueError as exc:
                raise ProgramError(str(exc), lineno) from None
        elif op == "GRIP":
            if len(tokens) != 2 or tokens[1] not in ("ON", "OFF"):
                raise ProgramError("GRIP takes ON or OFF", lineno)
            instructions.append(Grip(tokens[1] == "ON"))
        elif op == "SETFORCE":
            if len(tokens) != 3:
                raise ProgramError("SETFORCE takes an axis and a value", lineno)
            try:
                instructions.append(SetForce(tokens[1], _number(tokens[2], lineno)))
            except ValueError as exc:
                raise ProgramError(str(exc), lineno) from None
        else:
            raise ProgramError(f"unknown instruction {op!r}", lineno)
    try:
        return RobotProgram(tuple(instructions))
    except ValueError as exc:
        raise ProgramError(str(exc)) from None
