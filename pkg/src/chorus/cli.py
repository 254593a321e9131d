"""Command-line entry point.

Commands::

    chorus check    FILE.cc              well-formedness with diagnostics
    chorus project  FILE.cc [--out OUT]  endpoint projection to OUT(.sp) + manifest
    chorus run      FILE.cc              execute a choreography, print the trace
    chorus step     FILE.cc              interactive stepping
    chorus simulate FILE.sp              execute a network, print the trace
    chorus verify   FILE.cc --property P bounded verification, JSON report

Exit codes: 0 on success, 1 when an analysis rejects the input or a
verified property fails, 2 on parse or usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from .chor_semantics import cc_enabled
from .choreography import END, UsedProceduresViolated, format_path, program_wf_dec
from .labels import forget, rich_text, rich_to_json, transition_text, transition_to_json
from .proc_semantics import sp_enabled
from .projection import EppFailure, epp
from .surface import (
    ParseError, SourceFile, parse_cc_file, parse_sp_file, print_behaviour,
    print_chor, print_sp,
)
from .values import EMPTY_STATE, State, state_from_json, state_to_json
from .verification import NotStronglyProjectable, check_property

_PROPERTIES = ("complete", "sound", "determinism", "diamond", "progress",
               "termination", "all")


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation; the check set is filled from the input file."""

    command: str
    path: str
    state_path: Optional[str] = None
    seed: int = 0
    depth: int = 10
    max_steps: int = 100
    out_format: str = "text"
    out_path: Optional[str] = None
    scheduler: str = "first"
    property_name: str = "all"
    check_set: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.depth < 0 or self.max_steps < 0:
            raise ValueError("depth and max-steps must be nonnegative")

    def initial_state(self) -> State:
        if self.state_path is None:
            return EMPTY_STATE
        with open(self.state_path, encoding="utf-8") as handle:
            return state_from_json(json.load(handle))


def _load_cc(config: RunConfig) -> SourceFile:
    return parse_cc_file(Path(config.path).read_text(encoding="utf-8"))


def cmd_check(config: RunConfig) -> int:
    source = _load_cc(config)
    try:
        report = program_wf_dec(source.program, source.def_names)
    except UsedProceduresViolated as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if config.out_format == "json":
        print(json.dumps(report.to_json()))
    elif report.ok:
        print("ok")
    else:
        where = "main" if report.scope == "main" else f"procedure {report.scope}"
        root = ("main",) if report.scope == "main" else ("proc", report.scope)
        span = source.span_at(root + report.path) if report.path is not None else None
        at = f" at {format_path(report.path)}" + (f" ({span})" if span else "")
        print(f"error: clause {report.clause} violated in {where}{at}: {report.detail}")
    return 0 if report.ok else 1


def cmd_project(config: RunConfig) -> int:
    source = _load_cc(config)
    result = epp(source.program, source.def_names)
    if isinstance(result, EppFailure):
        root = ("main",) if result.scope == "main" else ("proc", result.scope)
        span = source.span_at(root + result.diagnostic.path)
        where = f" ({span})" if span else ""
        print(f"error: {result}{where}", file=sys.stderr)
        return 1
    out = Path(config.out_path) if config.out_path else Path(config.path).with_suffix(".sp")
    out.write_text(print_sp(result), encoding="utf-8")
    manifest = {f"{name}@{proc}": print_behaviour(body)
                for (name, proc), body in result.defs.items()}
    manifest_path = out.with_suffix(out.suffix + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                             encoding="utf-8")
    print(f"wrote {out} and {manifest_path}")
    return 0


def _emit_step(rich, fmt: str) -> None:
    label = forget(rich)
    if fmt == "json":
        print(json.dumps({"label": transition_to_json(label), "rich": rich_to_json(rich)}))
    else:
        print(transition_text(label))


def _emit_final(status: str, state: State, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps({"status": status, "state": state_to_json(state)}))
    else:
        print(f"{status}; state {json.dumps(state_to_json(state))}")


def cmd_run(config: RunConfig) -> int:
    source = _load_cc(config)
    state = config.initial_state()
    rng = random.Random(config.seed)
    chor = source.program.main
    defs = source.program.defs
    for _ in range(config.max_steps):
        enabled = cc_enabled(defs, chor, state)
        if not enabled:
            break
        pick = rng.randrange(len(enabled)) if config.scheduler == "random" else 0
        rich, chor, state = enabled[pick]
        _emit_step(rich, config.out_format)
    _emit_final("terminated" if chor == END else
                "stuck" if not cc_enabled(defs, chor, state) else "bound",
                state, config.out_format)
    return 0


def cmd_simulate(config: RunConfig) -> int:
    program = parse_sp_file(Path(config.path).read_text(encoding="utf-8")).program
    state = config.initial_state()
    rng = random.Random(config.seed)
    network, defs = program.network, program.defs
    for _ in range(config.max_steps):
        enabled = sp_enabled(defs, network, state)
        if not enabled:
            break
        pick = rng.randrange(len(enabled)) if config.scheduler == "random" else 0
        rich, network, state = enabled[pick]
        _emit_step(rich, config.out_format)
    _emit_final("terminated" if not network.support() else
                "stuck" if not sp_enabled(defs, network, state) else "bound",
                state, config.out_format)
    return 0


def cmd_step(config: RunConfig) -> int:
    source = _load_cc(config)
    state = config.initial_state()
    chor = source.program.main
    defs = source.program.defs
    while True:
        enabled = cc_enabled(defs, chor, state)
        if not enabled:
            print("no transitions enabled; done")
            break
        for index, (rich, _, _) in enumerate(enabled):
            print(f"  [{index}] {rich_text(rich)}")
        try:
            line = input("step> ").strip()
        except EOFError:
            break
        if line in ("q", "quit", ""):
            break
        try:
            pick = int(line)
            rich, chor, state = enabled[pick]
        except (ValueError, IndexError):
            print("enter one of the listed indices, or q to quit")
            continue
        print(f"-- {rich_text(rich)}")
        print(print_chor(chor))
    return 0


def cmd_verify(config: RunConfig) -> int:
    source = _load_cc(config)
    state = config.initial_state()
    try:
        reports = check_property(config.property_name, source.program, state,
                                 config.depth, source.def_names)
    except NotStronglyProjectable as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if config.out_format == "json":
        print(json.dumps([r.to_json() for r in reports]))
    else:
        for report in reports:
            print(f"{report.property_name}: {report.verdict} ({report.nodes} configurations)")
            if not report.passed:
                print(f"  {report.detail}")
    return 0 if all(r.passed for r in reports) else 1


_COMMANDS = {
    "check": cmd_check,
    "project": cmd_project,
    "run": cmd_run,
    "simulate": cmd_simulate,
    "step": cmd_step,
    "verify": cmd_verify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chorus",
                                     description="choreographic programming toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, state=True):
        if state:
            p.add_argument("--state", help="initial state as a JSON file")
        p.add_argument("--format", choices=("text", "json"), default=None)

    p = sub.add_parser("check", help="well-formedness diagnostics")
    p.add_argument("path")
    common(p, state=False)
    p.set_defaults(default_format="text")

    p = sub.add_parser("project", help="endpoint projection")
    p.add_argument("path")
    p.add_argument("--out", help="output .sp path")
    common(p, state=False)
    p.set_defaults(default_format="text")

    for name in ("run", "simulate"):
        p = sub.add_parser(name, help=f"{name} and print the trace")
        p.add_argument("path")
        common(p)
        p.add_argument("--scheduler", choices=("first", "random"), default="first")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-steps", type=int, default=100)
        p.set_defaults(default_format="json")

    p = sub.add_parser("step", help="interactive stepping")
    p.add_argument("path")
    common(p)
    p.set_defaults(default_format="text")

    p = sub.add_parser("verify", help="bounded verification")
    p.add_argument("path")
    common(p)
    p.add_argument("--property", choices=_PROPERTIES, default="all")
    p.add_argument("--depth", type=int, default=10)
    p.set_defaults(default_format="json")
    return parser


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        path=args.path,
        state_path=getattr(args, "state", None),
        seed=getattr(args, "seed", 0),
        depth=getattr(args, "depth", 10),
        max_steps=getattr(args, "max_steps", 100),
        out_format=args.format if args.format is not None else args.default_format,
        out_path=getattr(args, "out", None),
        scheduler=getattr(args, "scheduler", "first"),
        property_name=getattr(args, "property", "all"),
    )


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[config.command](config)
    except ParseError as err:
        print(f"{args.path}:{err}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # Downstream closed the trace early (e.g. piped into head).
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
