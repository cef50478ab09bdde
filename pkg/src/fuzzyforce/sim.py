"""Deterministic contact world and the closed-loop runner.

The environment is a memoryless linear spring: a flat surface at
``z_surface`` plus an optional raised foreign object over an x-range.
Penetration p of the (point) end-effector produces fz = -ks * p; all
other wrench components stay zero.  A calibration transform maps the
program's model coordinates into the environment frame before contact
is evaluated, so a miscalibrated or disturbed cell shows up as forces
the program did not anticipate.

The runner executes a RobotProgram one control period dt at a time.
MOVEL segments advance speed*dt per step.  After SETFORCE arms force
control, any step whose measured force magnitude exceeds the contact
threshold hands the controlled axis to the controller: its du replaces
the path increment and lateral progress pauses.  The override ends once
the error has stayed inside the settle band for ``settle_hold``
consecutive steps, which completes the current MOVEL and disarms force
control.  One TraceRecord is emitted per step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable

from .control import ControllerConfig, Displacement, ErrorState, Wrench, controller_step
from .program import Grip, MoveL, RobotProgram, SetForce
from .scene import CalibrationTransform, Pose

DEFAULT_CONTACT_THRESHOLD = 0.1  # N
DEFAULT_SETTLE_BAND = 0.05  # fraction of |setpoint|
DEFAULT_SETTLE_HOLD = 50  # steps
DEFAULT_MAX_STEPS = 100_000


class ConvergenceError(RuntimeError):
    """Step budget exhausted before the program completed; carries the
    partial trace."""

    def __init__(self, message: str, trace: list["TraceRecord"]):
        super().__init__(message)
        self.trace = trace


class MetricsError(ValueError):
    """Trace has no force-controlled contact phase to measure."""


@dataclass(frozen=True)
class Obstacle:
    """Foreign object: raises the contact surface to z_top over
    [x_min, x_max] (all y)."""

    z_top: float
    x_min: float
    x_max: float

    def __post_init__(self) -> None:
        if self.x_min > self.x_max:
            raise ValueError("obstacle x-range is empty")


@dataclass(frozen=True)
class Environment:
    z_surface: float = 0.0
    stiffness: float = 10.0  # N/mm
    dt: float = 0.004  # s
    obstacle: Obstacle | None = None
    calibration: CalibrationTransform = CalibrationTransform()

    def __post_init__(self) -> None:
        if not self.stiffness > 0.0:
            raise ValueError(f"stiffness must be > 0, got {self.stiffness}")
        if not self.dt > 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")


@dataclass(frozen=True)
class WorldState:
    pose: Pose
    dt: float
    gripper: bool = False
    k: int = 0

    @property
    def t(self) -> float:
        return self.k * self.dt


def surface_height(env: Environment, x: float) -> float:
    """Effective contact height under horizontal position x (environment
    frame)."""
    ob = env.obstacle
    if ob is not None and ob.x_min <= x <= ob.x_max:
        return ob.z_top
    return env.z_surface


def contact_force(env: Environment, pose: Pose) -> Wrench:
    """Spring contact wrench at a pose.  Zero when clear of the surface."""
    x, _, z = env.calibration.apply_point(pose.x, pose.y, pose.z)
    penetration = max(0.0, surface_height(env, x) - z)
    if penetration == 0.0:
        return Wrench()
    return Wrench(fz=-env.stiffness * penetration)


def step_world(
    world: WorldState, env: Environment, du: float, dxy: tuple[float, float] = (0.0, 0.0)
) -> tuple[WorldState, Wrench]:
    """Advance one control period: displace the end-effector and return
    the wrench at the new pose."""
    pose = world.pose
    new_pose = replace(pose, x=pose.x + dxy[0], y=pose.y + dxy[1], z=pose.z + du)
    new_world = replace(world, pose=new_pose, k=world.k + 1)
    return new_world, contact_force(env, new_pose)


@dataclass(frozen=True)
class TraceRecord:
    """One control step: measurement, error bookkeeping, and the
    controller's contribution.  ``contact`` flags steps where force
    control was actively engaged."""

    k: int
    t: float
    f_d: float
    f_a: float
    e: float
    de: float
    du: float
    u: float
    ee_z: float
    contact: bool


def run_closed_loop(
    program: RobotProgram,
    cfg: ControllerConfig,
    env: Environment,
    *,
    contact_threshold: float = DEFAULT_CONTACT_THRESHOLD,
    settle_band: float = DEFAULT_SETTLE_BAND,
    settle_hold: int = DEFAULT_SETTLE_HOLD,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> list[TraceRecord]:
    """Execute a program against the environment under the configured
    controller; returns the per-step trace.

    Raises ConvergenceError (with the partial trace attached) when the
    step budget runs out, e.g. when an aggressive tuning never settles.
    """
    for instr in program.instructions:
        if isinstance(instr, SetForce) and instr.axis != cfg.axis:
            raise ValueError(
                f"program arms force control on {instr.axis!r} but the controller "
                f"is configured for {cfg.axis!r}"
            )

    first = program.instructions[0]
    assert isinstance(first, MoveL)
    world = WorldState(pose=first.pose, dt=env.dt)
    trace: list[TraceRecord] = []
    err: ErrorState | None = None
    disp = Displacement()
    armed = False
    setpoint = 0.0
    hold = 0

    for instr in program.instructions:
        if isinstance(instr, Grip):
            world = replace(world, gripper=instr.on)
            continue
        if isinstance(instr, SetForce):
            armed = True
            setpoint = instr.setpoint
            hold = 0
            continue

        target = instr.pose
        step_len = instr.speed * env.dt

        while True:
            rx = target.x - world.pose.x
            ry = target.y - world.pose.y
            rz = target.z - world.pose.z
            remaining = math.sqrt(rx * rx + ry * ry + rz * rz)

            f_a = contact_force(env, world.pose).component(cfg.axis)
            engaged = armed and abs(f_a) > contact_threshold
            if not engaged and remaining == 0.0:
                break  # segment done; no step, no record

            if world.k >= max_steps:
                raise ConvergenceError(f"step budget of {max_steps} exhausted", trace)

            f_d = setpoint if armed else 0.0
            e = f_d - f_a
            err = ErrorState.initial(e) if err is None else err.advance(e)

            if engaged:
                du = controller_step(cfg, err.e, err.de)
                move = (0.0, 0.0, du)  # lateral progress pauses under override
                hold = hold + 1 if abs(err.e) < settle_band * abs(setpoint) else 0
            else:
                du = 0.0
                hold = 0
                if remaining <= step_len:
                    move = (rx, ry, rz)  # final partial step lands on target
                else:
                    scale = step_len / remaining
                    move = (rx * scale, ry * scale, rz * scale)
            disp = disp.accumulate(du)

            trace.append(
                TraceRecord(
                    k=world.k,
                    t=world.t,
                    f_d=f_d,
                    f_a=f_a,
                    e=err.e,
                    de=err.de,
                    du=du,
                    u=disp.u,
                    ee_z=world.pose.z,
                    contact=engaged,
                )
            )

            world, _ = step_world(world, env, move[2], (move[0], move[1]))

            if engaged and hold >= settle_hold:
                # desired contact force held long enough: the placement
                # move is complete and force control stands down
                armed = False
                hold = 0
                break

        # orientation snaps at segment end; contact is position-only
        world = replace(
            world,
            pose=replace(world.pose, roll=target.roll, pitch=target.pitch, yaw=target.yaw),
        )

    return trace


@dataclass(frozen=True)
class Metrics:
    overshoot_pct: float
    settling_steps: int | None
    steady_state_error: float
    peak_force: float


def metrics(trace: Iterable[TraceRecord], f_d: float) -> Metrics:
    """Disturbance-rejection metrics over the force-controlled contact
    phase of a trace.

    overshoot_pct: peak |f_a| beyond |f_d|, percent of |f_d|.
    settling_steps: steps into the phase after which |e| stays inside
    the 5% band for the rest of the phase; None if it never does.
    steady_state_error: mean |e| over the final 20% of the phase.
    """
    phase = [r for r in trace if r.contact]
    if not phase:
        raise MetricsError("trace has no force-controlled contact phase")
    if f_d == 0.0:
        raise MetricsError("setpoint is zero; overshoot is undefined")

    peak = max(abs(r.f_a) for r in phase)
    overshoot = max(0.0, (peak - abs(f_d)) / abs(f_d)) * 100.0

    band = 0.05 * abs(f_d)
    settling: int | None = None
    for i, r in enumerate(phase):
        if abs(r.e) >= band:
            settling = None
        elif settling is None:
            settling = i
    tail = phase[-max(1, round(0.2 * len(phase))):]
    sse = sum(abs(r.e) for r in tail) / len(tail)
    return Metrics(overshoot, settling, sse, peak)


def trace_to_csv(trace: Iterable[TraceRecord]) -> str:
    """Render a trace as CSV: 9-significant-digit floats, LF endings."""
    lines = ["k,t,f_d,f_a,e,de,du,u,ee_z,contact"]
    for r in trace:
        lines.append(
            f"{r.k},{r.t:.9g},{r.f_d:.9g},{r.f_a:.9g},{r.e:.9g},{r.de:.9g},"
            f"{r.du:.9g},{r.u:.9g},{r.ee_z:.9g},{int(r.contact)}"
        )
    return "\n".join(lines) + "\n"


def write_trace_csv(trace: Iterable[TraceRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(trace_to_csv(trace))
