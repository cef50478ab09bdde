"""Command-line front end.

    fuzzyforce compile <scene> -o <prog>   compile a scene to a program
    fuzzyforce run <config>                closed-loop run, trace + metrics
    fuzzyforce compare <config>            PI vs fuzzy-PI on one scenario

Exit codes: 0 success, 1 validation/parse, 2 compile, 3 non-convergence,
4 I/O.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, ExperimentConfig, load_experiment
from .control import CONTROLLER_KINDS
from .program import CompileError, ProgramError, compile_scene, emit_program
from .scene import SceneError, parse_scene
from .sim import ConvergenceError, Metrics, MetricsError, metrics, run_closed_loop, write_trace_csv

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_COMPILE = 2
EXIT_NONCONVERGENCE = 3
EXIT_IO = 4


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_compile(args) -> int:
    try:
        text = Path(args.scene).read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot read scene: {exc}")
    try:
        program = compile_scene(parse_scene(text))
    except SceneError as exc:
        return _fail(EXIT_VALIDATION, f"scene: {exc}")
    except CompileError as exc:
        return _fail(EXIT_COMPILE, f"compile: {exc}")
    try:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(emit_program(program))
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write program: {exc}")
    return EXIT_OK


def _load(args) -> ExperimentConfig:
    return load_experiment(args.config, rulebase_override=args.rulebase)


def _metrics_lines(kind: str, result: Metrics | None, converged: bool, final_u: float, steps: int) -> list[str]:
    lines = [
        f"controller={kind}",
        f"converged={'yes' if converged else 'no'}",
        f"steps={steps}",
        f"final_u_mm={final_u:.9g}",
    ]
    if result is None:
        lines.append("contact_phase=none")
    else:
        settling = "not_settled" if result.settling_steps is None else str(result.settling_steps)
        lines += [
            f"overshoot_pct={result.overshoot_pct:.9g}",
            f"settling_steps={settling}",
            f"steady_state_error_N={result.steady_state_error:.9g}",
            f"peak_force_N={result.peak_force:.9g}",
        ]
    return lines


def _run_one(exp: ExperimentConfig, kind: str, out_dir: Path):
    """Run one controller; returns (metrics | None, converged, final_u, steps)."""
    program = compile_scene(
        exp.scene, force_axis=exp.controller(kind).axis, force_setpoint=exp.f_setpoint
    )
    converged = True
    try:
        trace = run_closed_loop(program, exp.controller(kind), exp.env)
    except ConvergenceError as exc:
        trace = exc.trace
        converged = False
    write_trace_csv(trace, out_dir / f"trace_{kind}.csv")
    final_u = trace[-1].u if trace else 0.0
    result = None
    if converged:
        try:
            result = metrics(trace, exp.f_setpoint)
        except MetricsError:
            result = None
    return result, converged, final_u, len(trace)


def _prepare_out_dir(exp: ExperimentConfig, args) -> Path:
    out_dir = Path(args.trace_dir) if args.trace_dir else exp.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def cmd_run(args) -> int:
    try:
        exp = _load(args)
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    except (ConfigError, SceneError) as exc:
        return _fail(EXIT_VALIDATION, str(exc))
    try:
        out_dir = _prepare_out_dir(exp, args)
        kind = exp.selected
        result, converged, final_u, steps = _run_one(exp, kind, out_dir)
        lines = _metrics_lines(kind, result, converged, final_u, steps)
        (out_dir / f"metrics_{kind}.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    except CompileError as exc:
        return _fail(EXIT_COMPILE, f"compile: {exc}")
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    print("\n".join(lines))
    if not converged:
        return _fail(EXIT_NONCONVERGENCE, f"{kind} exhausted the step budget; partial trace written")
    return EXIT_OK


def _compare_table(results: dict[str, tuple]) -> str:
    def cell(kind, row):
        result, converged, final_u, steps = results[kind]
        if row == "converged":
            return "yes" if converged else "no"
        if row == "steps":
            return str(steps)
        if row == "final_u_mm":
            return f"{final_u:.9g}"
        if result is None:
            return "n/a" if converged else "not_converged"
        if row == "settling_steps":
            return "not_settled" if result.settling_steps is None else str(result.settling_steps)
        value = getattr(result, row)
        return f"{value:.9g}"

    rows = [
        "overshoot_pct",
        "settling_steps",
        "steady_state_error",
        "peak_force",
        "final_u_mm",
        "steps",
        "converged",
    ]
    header = f"{'metric':<22} {'pi':>16} {'fuzzy_pi':>16}"
    lines = [header]
    for row in rows:
        lines.append(f"{row:<22} {cell('pi', row):>16} {cell('fuzzy_pi', row):>16}")
    return "\n".join(lines) + "\n"


def cmd_compare(args) -> int:
    try:
        exp = _load(args)
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    except (ConfigError, SceneError) as exc:
        return _fail(EXIT_VALIDATION, str(exc))
    try:
        out_dir = _prepare_out_dir(exp, args)
        results = {kind: _run_one(exp, kind, out_dir) for kind in CONTROLLER_KINDS}
        table = _compare_table(results)
        (out_dir / "compare.txt").write_text(table, encoding="utf-8")
    except CompileError as exc:
        return _fail(EXIT_COMPILE, f"compile: {exc}")
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    print(table, end="")
    if not all(r[1] for r in results.values()):
        bad = [k for k, r in results.items() if not r[1]]
        return _fail(EXIT_NONCONVERGENCE, f"{', '.join(bad)} exhausted the step budget")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzyforce", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_compile = sub.add_parser("compile", help="compile a scene file to a robot program")
    p_compile.add_argument("scene")
    p_compile.add_argument("-o", "--output", required=True, help="program file to write")
    p_compile.set_defaults(func=cmd_compile)

    for name, func, help_text in (
        ("run", cmd_run, "run the configured closed-loop experiment"),
        ("compare", cmd_compare, "run PI and fuzzy-PI on the same scenario"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config")
        p.add_argument("--trace-dir", help="directory for traces and summaries")
        p.add_argument("--seed", type=int, help="reserved; the core is deterministic")
        p.add_argument(
            "--rulebase",
            choices=("as_printed", "canonical"),
            help="override the configured rule-base variant",
        )
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:
    sys.exit(main())
