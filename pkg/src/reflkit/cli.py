"""Command-line front end: ``reflkit <subcommand> ...``.

Exit codes: 0 success, 1 evaluation or check failure, 2 usage or input error.
The default fuel is 10**6, overridable by ``REFLKIT_FUEL``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import dynlogic, fixpoint
from .belief import BeliefAssignment, MachineError, parse_machine, simulate_and_check
from .lang import (
    Code, Done, LiftError, OpenTermError, OutOfFuel, Outcome, ParseError, Quote,
    Unit, evaluate_counted, parse, parse_value, print_code, print_value,
)
from .proptest import SUITES, run_suite
from .smn import specialize_many
from .universal import encode, interpret

DEFAULT_FUEL = 10**6
FUEL_ENV = "REFLKIT_FUEL"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    fuel: int = DEFAULT_FUEL
    format: str = "text"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.fuel <= 0:
            raise UsageError("fuel must be positive")


def default_fuel() -> int:
    raw = os.environ.get(FUEL_ENV)
    if raw is None:
        return DEFAULT_FUEL
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{FUEL_ENV} must be an integer, got {raw!r}") from None


def read_source(arg: str) -> str:
    """Inline text, or the contents of ``arg`` when it names a file."""
    if not arg.lstrip().startswith("(") and os.path.isfile(arg):
        return Path(arg).read_text()
    return arg


def read_code(arg: str) -> Code:
    t = parse(read_source(arg))
    if isinstance(t, Quote):
        t = t.inner
    return encode(t)


def outcome_json(out: Outcome, steps: int | None = None) -> dict:
    if isinstance(out, Done):
        d = {"outcome": "done", "value": print_value(out.value)}
    elif isinstance(out, OutOfFuel):
        d = {"outcome": "out-of-fuel"}
    else:
        d = {"outcome": "error", "kind": out.kind, "detail": out.detail}
    if steps is not None:
        d["steps"] = steps
    return d


def outcome_text(out: Outcome) -> str:
    if isinstance(out, Done):
        return print_value(out.value)
    if isinstance(out, OutOfFuel):
        return "OutOfFuel"
    return f"Err({out.kind}): {out.detail}"


def emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# -- subcommands -----------------------------------------------------------

def cmd_eval(args, cfg: RunConfig) -> int:
    term = parse(read_source(args.program))
    trace: list | None = [] if args.trace else None
    out, steps = evaluate_counted(term, cfg.fuel, trace)
    payload = outcome_json(out, steps)
    if trace is not None:
        payload["trace"] = [f"{k} {d}".strip() for k, d in trace]
    text = outcome_text(out)
    if trace is not None:
        text = "\n".join([*(f"{i}\t{k} {d}".rstrip() for i, (k, d) in enumerate(trace)), text])
    emit(cfg, payload, text)
    return 0 if isinstance(out, Done) else 1


def cmd_run(args, cfg: RunConfig) -> int:
    code = read_code(args.code)
    value = parse_value(args.input)
    out = interpret(code, value, cfg.fuel)
    emit(cfg, outcome_json(out), outcome_text(out))
    return 0 if isinstance(out, Done) else 1


def cmd_specialize(args, cfg: RunConfig) -> int:
    code = read_code(args.code)
    values = [parse_value(v) for v in args.values]
    try:
        spec = specialize_many(code, values)
    except LiftError as e:
        print(f"error: lift-failure: {e}", file=sys.stderr)
        return 1
    emit(cfg, {"code": print_code(spec)}, print_code(spec))
    return 0


def cmd_fixpoint(args, cfg: RunConfig) -> int:
    gamma = fixpoint.kleene_fix(read_code(args.g))
    payload = {"code": print_code(gamma)}
    text = print_code(gamma)
    rc = 0
    if args.apply is not None:
        out = interpret(gamma, parse_value(args.apply), cfg.fuel)
        payload["result"] = outcome_json(out)
        text += "\n" + outcome_text(out)
        rc = 0 if isinstance(out, Done) else 1
    emit(cfg, payload, text)
    return rc


def sweep_budgets(top: int) -> list[int]:
    budgets, k = [], 100
    while k < top:
        budgets.append(k)
        k *= 10
    budgets.append(top)
    return budgets


def cmd_godel(args, cfg: RunConfig) -> int:
    if args.budget < 1:
        raise UsageError("--budget must be positive")
    pair = fixpoint.goedel_sentence()
    rows = fixpoint.goedel_sweep(sweep_budgets(args.budget), pair)
    control_ok, control_steps = fixpoint.steps_to_decide(fixpoint.CONTROL, Unit(), 10)
    header = ["budget", "provable_gamma", "provable_not_gamma", "steps_gamma", "steps_not_gamma"]
    table = [[r.budget, r.provable_gamma, r.provable_neg_gamma, r.steps_gamma, r.steps_neg_gamma]
             for r in rows]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows([[str(c).lower() for c in row] for row in table])
    if args.plot:
        from .plotting import plot_goedel_sweep
        plot_goedel_sweep(rows, control_steps, args.plot)
    neither = all(not r.provable_gamma and not r.provable_neg_gamma for r in rows)
    payload = {
        "gamma": print_code(pair.gamma),
        "notGamma": print_code(pair.neg_gamma),
        "sweep": [dict(zip(header, row)) for row in table],
        "control": {"program": "(lam a true)", "budget": 10, "provable": control_ok},
        "neitherProvable": neither,
        "caveat": fixpoint.CAVEAT,
    }
    if args.proof:
        proof = fixpoint.proof_of(fixpoint.ProvabilityQuery(fixpoint.CONTROL, Unit(), 10))
        payload["controlProof"] = [f"{k} {d}".strip() for k, d in proof or []]
    lines = [f"gamma     = {payload['gamma']}", f"not-gamma = {payload['notGamma']}",
             "\t".join(header)]
    lines += ["\t".join(str(c).lower() for c in row) for row in table]
    lines.append(f"control (lam a true) provable at budget 10: {str(control_ok).lower()}")
    if args.proof:
        lines.append("control proof: " + " ; ".join(payload["controlProof"]))
    lines.append(fixpoint.CAVEAT)
    emit(cfg, payload, "\n".join(lines))
    return 0 if neither and control_ok else 1


def _belief_cell(s) -> str:
    if s.next_belief_matches:
        return "match"
    return "MISMATCH (behaves alike)" if s.next_belief_agrees else "MISMATCH"


def cmd_belief_run(args, cfg: RunConfig) -> int:
    m = parse_machine(Path(args.machine).read_text())
    stream = args.stream.replace(",", " ").split()
    assignment = BeliefAssignment.for_machine(m)
    report = simulate_and_check(m, stream, cfg.fuel, assignment)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "state", "input", "true_output", "predicted_output",
                        "next_belief_matches", "error"])
            for s in report.steps:
                w.writerow([s.index, s.state, s.input, s.true_output, s.predicted_output or "",
                            str(s.next_belief_matches).lower(), s.error or ""])
    if args.plot:
        from .plotting import plot_trace
        plot_trace(report, args.plot)
    lines = ["step\tstate\tinput\ttrue\tpredicted\tnext-belief"]
    for s in report.steps:
        lines.append(f"{s.index}\t{s.state}\t{s.input}\t{s.true_output}\t"
                     f"{s.predicted_output or '-'}\t{_belief_cell(s)}"
                     + (f"\t{s.error}" if s.error else ""))
    lines.append(f"verdict: {report.verdict}")
    emit(cfg, report.to_json(), "\n".join(lines))
    return 0 if report.verdict == "all-consistent" else 1


def _pred(frame, text: str):
    text = text.strip()
    if text in ("", "{}", "none"):
        return frozenset()
    if text in ("*", "all"):
        return frame.top
    return frame.predicate(w for w in text.strip("{}").replace(",", " ").split())


def cmd_hoare(args, cfg: RunConfig) -> int:
    frame = dynlogic.parse_frame(Path(args.frame).read_text())
    t = dynlogic.HoareTriple(_pred(frame, args.pre), args.event, _pred(frame, args.post))
    strongest = dynlogic.sp(frame, t.pre, t.event)
    weakest = dynlogic.wp(frame, t.event, t.post)
    by_sp, by_wp = dynlogic.hoare(frame, t), dynlogic.hoare_via_wp(frame, t)
    fmt = lambda p: dynlogic.format_predicate(p, frame)  # noqa: E731
    payload = {"pre": fmt(t.pre), "event": t.event, "post": fmt(t.post),
               "strongestPost": fmt(strongest), "weakestPre": fmt(weakest),
               "validBySp": by_sp, "validByWp": by_wp, "valid": by_sp and by_wp}
    text = "\n".join([
        f"triple   {fmt(t.pre)} {{{t.event}}} {fmt(t.post)}",
        f"sp(pre)  {fmt(strongest)}",
        f"wp(post) {fmt(weakest)}",
        f"sp(pre) <= post: {str(by_sp).lower()}",
        f"pre <= wp(post): {str(by_wp).lower()}",
        "valid" if by_sp and by_wp else "invalid",
    ])
    emit(cfg, payload, text)
    if by_sp != by_wp:
        print("internal error: formulations disagree", file=sys.stderr)
        return 1
    return 0 if by_sp else 1


def cmd_proptest(args, cfg: RunConfig) -> int:
    result = run_suite(args.suite, args.cases, cfg.seed, workers=args.workers)
    if args.plot:
        from .plotting import plot_suite
        plot_suite(result, args.plot)
    emit(cfg, result.to_json(), result.summary().rstrip("\n"))
    return 0 if result.ok else 1


# -- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, default=None,
                        help=f"step budget (default {DEFAULT_FUEL}, or ${FUEL_ENV})")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="reflkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate a program")
    s.add_argument("program", help="program text or file")
    s.add_argument("--trace", action="store_true", help="print every charged step")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("run", parents=[common], help="interpret a code on an input value")
    s.add_argument("code", help="code text or file; a (quote ...) wrapper is optional")
    s.add_argument("input", help="first-order input value")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("specialize", parents=[common], help="fix leading arguments of a code")
    s.add_argument("code")
    s.add_argument("values", nargs="+", help="values, applied left to right")
    s.set_defaults(func=cmd_specialize)

    s = sub.add_parser("fixpoint", parents=[common], help="Kleene fixpoint of a 2-ary code")
    s.add_argument("g")
    s.add_argument("--apply", metavar="VALUE", help="also run the fixpoint on VALUE")
    s.set_defaults(func=cmd_fixpoint)

    s = sub.add_parser("godel-demo", parents=[common],
                       help="budget sweep for the Goedel sentence and its negation")
    s.add_argument("--budget", type=int, default=10**5, help="largest budget in the sweep")
    s.add_argument("--proof", action="store_true", help="print the control's proof trace")
    s.add_argument("--csv", metavar="FILE", help="write the sweep table as CSV")
    s.add_argument("--plot", metavar="FILE", help="write a figure of the sweep")
    s.set_defaults(func=cmd_godel)

    s = sub.add_parser("belief-run", parents=[common],
                       help="run a machine and its belief assignment in lock-step")
    s.add_argument("machine", help="machine table file")
    s.add_argument("--stream", required=True, help="input symbols, space or comma separated")
    s.add_argument("--csv", metavar="FILE", help="write the trace as CSV")
    s.add_argument("--plot", metavar="FILE", help="write a figure of the trace")
    s.set_defaults(func=cmd_belief_run)

    s = sub.add_parser("hoare-check", parents=[common], help="check a Hoare triple on a frame")
    s.add_argument("frame", help="frame file")
    s.add_argument("--pre", required=True, help="comma-separated worlds, {} or *")
    s.add_argument("--event", required=True)
    s.add_argument("--post", required=True)
    s.set_defaults(func=cmd_hoare)

    s = sub.add_parser("proptest", parents=[common], help="run a seeded property suite")
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--cases", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--plot", metavar="FILE", help="write a bar chart of law counts")
    s.set_defaults(func=cmd_proptest)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            fuel=args.fuel if args.fuel is not None else default_fuel(),
            format="json" if args.json else "text",
            seed=getattr(args, "seed", 0),
        )
        return args.func(args, cfg)
    except ParseError as e:
        print(f"parse error at {e}", file=sys.stderr)
        return 2
    except (UsageError, OpenTermError, MachineError, dynlogic.FrameError, ValueError,
            OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
