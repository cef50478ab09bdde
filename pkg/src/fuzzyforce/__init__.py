"""Scene-to-robot-program pipeline with PI and fuzzy-PI force control.

A neutral scene file compiles to a pick/place motion program; a
deterministic spring-contact simulator executes it in closed loop under
either an incremental PI controller or a Mamdani fuzzy-PI controller,
logging per-step traces for disturbance-rejection comparisons.
"""

from .config import ConfigError, ExperimentConfig, load_experiment, parse_config
from .control import (
    AXES,
    CONTROLLER_KINDS,
    FUZZY_PI,
    PI,
    ControllerConfig,
    Displacement,
    ErrorState,
    Gains,
    Wrench,
    compute_error,
    controller_step,
    fuzzy_pi_step,
    pi_step,
    positional_pi,
)
from .fuzzy import (
    AS_PRINTED,
    CANONICAL,
    LABELS,
    FiredRule,
    Label,
    Partition,
    RuleBase,
    TriangularMF,
    defuzzify_coa,
    fire_rules,
    fuzzify,
)
from .program import (
    CompileError,
    Grip,
    MoveL,
    ProgramError,
    RobotProgram,
    SetForce,
    compile_scene,
    emit_program,
    parse_program,
)
from .scene import (
    CalibrationTransform,
    Pose,
    Scene,
    SceneError,
    SceneObject,
    apply_calibration,
    emit_scene,
    normalize_angle,
    parse_scene,
)
from .sim import (
    ConvergenceError,
    Environment,
    Metrics,
    MetricsError,
    Obstacle,
    TraceRecord,
    WorldState,
    contact_force,
    metrics,
    run_closed_loop,
    step_world,
    trace_to_csv,
    write_trace_csv,
)

__version__ = "0.1.0"
