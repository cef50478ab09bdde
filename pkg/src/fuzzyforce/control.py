"""Per-axis force controllers producing displacement increments.

Both controllers act on the scalar force error of one wrench axis:

    e_k  = f_d - f_a            (setpoint minus measurement)
    de_k = e_k - e_{k-1}

The conventional incremental PI law is

    du_k = kx * (kp * de_k + ki * e_k)

and the fuzzy-PI variant pushes ki*e and kp*de through the Mamdani core
instead, scaling the defuzzified output by kx.  Every step is clamped to
the per-step saturation du_max.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .fuzzy import CANONICAL, Partition, RuleBase, defuzzify_coa, fire_rules, fuzzify

AXES = ("fx", "fy", "fz", "tx", "ty", "tz")

PI = "pi"
FUZZY_PI = "fuzzy_pi"
CONTROLLER_KINDS = (PI, FUZZY_PI)


@dataclass(frozen=True)
class Wrench:
    """Six-axis force/torque sample: forces in N, torques in N*m."""

    fx: float = 0.0
    fy: float = 0.0
    fz: float = 0.0
    tx: float = 0.0
    ty: float = 0.0
    tz: float = 0.0

    def __post_init__(self) -> None:
        for axis in AXES:
            if not math.isfinite(getattr(self, axis)):
                raise ValueError(f"wrench component {axis} is not finite")

    def component(self, axis: str) -> float:
        if axis not in AXES:
            raise ValueError(f"unknown wrench axis {axis!r}")
        return getattr(self, axis)


def compute_error(f_d: Wrench, f_a: Wrench, axis: str) -> float:
    """Force error on one axis: desired minus actual."""
    return f_d.component(axis) - f_a.component(axis)


@dataclass(frozen=True)
class ErrorState:
    """Error sample plus its backward difference."""

    e: float
    e_prev: float
    de: float

    @classmethod
    def initial(cls, e: float) -> "ErrorState":
        # First sample seeds e_prev so the first step carries no
        # derivative kick.
        return cls(e, e, 0.0)

    def advance(self, e: float) -> "ErrorState":
        return ErrorState(e, self.e, e - self.e)


@dataclass(frozen=True)
class Gains:
    """Scaling factors: kp on the error change, ki on the error, kx on
    the output displacement (mm)."""

    kp: float
    ki: float
    kx: float

    def __post_init__(self) -> None:
        if not self.kx > 0.0:
            raise ValueError(f"kx must be > 0, got {self.kx}")
        if self.kp < 0.0 or self.ki < 0.0:
            raise ValueError("kp and ki must be >= 0")
        if self.kp == 0.0 and self.ki == 0.0:
            raise ValueError("kp and ki cannot both be 0")


def _clamp(v: float, limit: float) -> float:
    return min(limit, max(-limit, v))


def pi_step(gains: Gains, e_k: float, de_k: float, du_max: float = math.inf) -> float:
    """Incremental PI law, saturated to +-du_max."""
    return _clamp(gains.kx * (gains.kp * de_k + gains.ki * e_k), du_max)


def positional_pi(gains: Gains, errors: list[float]) -> float:
    """Absolute-form PI over an error history, as an independent check
    on the incremental law: u_n = kp*e_n + ki*sum(e_j)."""
    if not errors:
        raise ValueError("error history must be nonempty")
    return gains.kp * errors[-1] + gains.ki * sum(errors)


@dataclass(frozen=True)
class ControllerConfig:
    """Everything one per-axis force controller needs."""

    kind: str
    gains: Gains
    du_max: float = 2.0
    axis: str = "fz"
    partition: Partition = field(default_factory=Partition.default)
    rules: RuleBase = field(default_factory=RuleBase.canonical)

    def __post_init__(self) -> None:
        if self.kind not in CONTROLLER_KINDS:
            raise ValueError(f"unknown controller kind {self.kind!r}")
        if not self.du_max > 0.0:
            raise ValueError(f"du_max must be > 0, got {self.du_max}")
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}")


def fuzzy_pi_step(cfg: ControllerConfig, e_k: float, de_k: float) -> float:
    """Fuzzy-PI step: normalize the inputs with ki and kp, run the
    Mamdani pipeline, scale by kx, saturate to +-du_max.

    The output is bounded by kx times the outermost consequent center
    (1 on the default partition) even before saturation.
    """
    g = cfg.gains
    e_deg = fuzzify(g.ki * e_k, cfg.partition)
    de_deg = fuzzify(g.kp * de_k, cfg.partition)
    du = g.kx * defuzzify_coa(fire_rules(e_deg, de_deg, cfg.rules, cfg.partition))
    return _clamp(du, cfg.du_max)


def controller_step(cfg: ControllerConfig, e_k: float, de_k: float) -> float:
    """Dispatch one control step for the configured controller kind."""
    if cfg.kind == PI:
        return pi_step(cfg.gains, e_k, de_k, cfg.du_max)
    return fuzzy_pi_step(cfg, e_k, de_k)


@dataclass(frozen=True)
class Displacement:
    """Accumulated end-effector displacement: last increment and the
    running sum since reset."""

    u: float = 0.0
    du: float = 0.0

    def accumulate(self, du: float) -> "Displacement":
        return Displacement(self.u + du, du)


def default_rules_variant() -> str:
    return CANONICAL
