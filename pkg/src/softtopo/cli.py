"""Command-line front end.

Machine-readable JSON goes to stdout, a human summary to stderr.
Exit codes: 0 pass, 1 check failed, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .core import soft_point
from .errors import BudgetExceededError, NotATopologyError, SoftTopologyError
from .instance import Instance, InstanceError, load_instance
from .mapping import is_continuous, is_embedding, is_homeomorphism, is_open_map
from .separation import (
    Budget,
    check_embedding_lemma,
    random_instance,
    render_counterexample,
    separates_points,
    separates_points_from_closed,
)
from .topology import (
    closure,
    compare,
    generate_from_subbase,
    is_base,
    is_closed,
    is_neighbourhood,
    is_subbase,
    is_topology,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


class _Output:
    def __init__(self, pretty: bool, out=None, err=None):
        self.pretty = pretty
        self.out = out or sys.stdout
        self.err = err or sys.stderr

    def emit(self, report: dict, human: str):
        if self.pretty:
            text = json.dumps(report, indent=2, sort_keys=True)
        else:
            text = json.dumps(report, sort_keys=True)
        print(text, file=self.out)
        print(human, file=self.err)


def _check_budget_context(ctx, budget: Budget):
    if ctx.size > budget.max_bits:
        raise BudgetExceededError(
            f"context needs {ctx.size} bits per soft set (budget {budget.max_bits})")


def cmd_validate(inst: Instance, budget: Budget, out: _Output) -> int:
    results = {}
    lines = []
    failed = False
    for name, decl in inst.topologies.items():
        ctx = inst.context(decl.context)
        _check_budget_context(ctx, budget)
        if decl.opens is not None:
            verdict = is_topology(ctx, decl.opens)
        else:
            verdict = is_topology(ctx, inst.topology(name, budget.max_opens).opens)
        results[name] = verdict.to_dict()
        failed |= not verdict.ok
        lines.append(f"{name}: {'ok' if verdict.ok else 'VIOLATES ' + verdict.reason}")
    out.emit({"command": "validate", "ok": not failed, "topologies": results},
             "\n".join(lines) or "no topologies declared")
    return EXIT_FAIL if failed else EXIT_PASS


def cmd_generate(inst: Instance, name: str, budget: Budget, out: _Output) -> int:
    if name not in inst.subbases:
        raise InstanceError(f"unknown subbase {name!r}")
    sub = inst.subbases[name]
    ctx = inst.context(sub.context)
    _check_budget_context(ctx, budget)
    top = generate_from_subbase(ctx, sub.members, budget.max_opens)
    report = {
        "command": "generate",
        "subbase": name,
        "count": len(top),
        "opens": top.to_canonical(),
    }
    out.emit(report, f"subbase {name}: generated topology with {len(top)} opens")
    return EXIT_PASS


def _family(inst: Instance, decl: dict, budget: Budget):
    spaces, maps = [], []
    for item in decl["family"]:
        spaces.append(inst.topology(item["space"], budget.max_opens))
        maps.append(inst.mapping(item["map"]))
    return spaces, maps


def run_check(inst: Instance, name: str, budget: Budget) -> tuple[bool, dict]:
    """Evaluate one named check; returns (passed, report body)."""
    if name not in inst.checks:
        raise InstanceError(f"unknown check {name!r}")
    decl = inst.checks[name]
    kind = decl["kind"]

    def top(key):
        t = inst.topology(decl[key], budget.max_opens)
        _check_budget_context(t.context, budget)
        return t

    if kind == "topology":
        tdecl = inst.topologies[decl["topology"]]
        ctx = inst.context(tdecl.context)
        if tdecl.opens is not None:
            v = is_topology(ctx, tdecl.opens)
        else:
            v = is_topology(ctx, top("topology").opens)
        return v.ok, v.to_dict()
    if kind in ("continuity", "open_map", "homeomorphism", "embedding"):
        fn = {"continuity": is_continuous, "open_map": is_open_map,
              "homeomorphism": is_homeomorphism, "embedding": is_embedding}[kind]
        v = fn(inst.mapping(decl["map"]), top("source"), top("target"))
        return v.ok, v.to_dict()
    if kind in ("closed", "closure", "neighbourhood"):
        t = top("topology")
        f = inst.soft_set(decl["soft_set"], t.context)
        if kind == "closed":
            ok = is_closed(f, t)
            return ok, {"ok": ok}
        if kind == "closure":
            cl = closure(f, t)
            body = {"closure": cl.to_canonical()}
            ok = True
            if "expect" in decl:
                ok = inst.soft_set(decl["expect"], t.context) == cl
            body["ok"] = ok
            return ok, body
        point = decl["point"]
        if not isinstance(point, list) or len(point) != 2:
            raise InstanceError(f"check {name}: point must be [element, parameter]")
        try:
            pt = soft_point(t.context, point[0], point[1])
        except SoftTopologyError as exc:
            raise InstanceError(str(exc)) from None
        ok = is_neighbourhood(f, pt, t)
        return ok, {"ok": ok}
    if kind in ("base", "subbase"):
        t = top("topology")
        fam = [inst.soft_set(r, t.context) for r in decl["family"]]
        ok = (is_base if kind == "base" else is_subbase)(fam, t)
        return ok, {"ok": ok}
    if kind == "compare":
        result = compare(top("left"), top("right")).value
        ok = decl.get("expect", result) == result
        return ok, {"ok": ok, "relation": result}
    space = top("space")
    spaces, maps = _family(inst, decl, budget)
    if kind == "separates_points":
        v = separates_points(space, spaces, maps)
        return v.ok, v.to_dict()
    if kind == "separates_points_from_closed":
        v = separates_points_from_closed(space, spaces, maps)
        return v.ok, v.to_dict()
    report = check_embedding_lemma(space, spaces, maps, budget)
    return not report.is_violation, report.to_dict()


def cmd_check(inst: Instance, name: str, budget: Budget, out: _Output) -> int:
    try:
        ok, body = run_check(inst, name, budget)
    except NotATopologyError as exc:
        ok, body = False, {"ok": False, "error": str(exc), "verdict": exc.verdict.to_dict()}
    kind = inst.checks[name]["kind"]
    human = f"check {name} ({kind}): {'PASS' if ok else 'FAIL'}"
    if kind == "embedding_lemma" and "status" in body:
        human += " [" + ", ".join(body["status"].values()) + "]"
    out.emit({"command": "check", "check": name, "kind": kind, "ok": ok, "result": body}, human)
    return EXIT_PASS if ok else EXIT_FAIL


def fuzz_summary(seed: int, count: int, budget: Budget) -> tuple[dict, list]:
    """Run ``count`` seeded instances; returns (summary, violating reports)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    budget.validate()
    statuses = {}
    violations = []
    bad_witnesses = []
    hyp = concl = 0
    for index in range(count):
        space, spaces, maps = random_instance(f"{seed}/{index}", budget)
        report = check_embedding_lemma(space, spaces, maps, budget)
        hyp += report.hypotheses_hold
        concl += report.conclusion_holds
        key = "/".join(report.status)
        statuses[key] = statuses.get(key, 0) + 1
        if not report.self_check():
            bad_witnesses.append(index)
        if report.is_violation:
            violations.append((index, report))
    summary = {
        "command": "fuzz",
        "seed": seed,
        "count": count,
        "budget": budget.to_dict(),
        "instances": count,
        "hypotheses_hold": hyp,
        "hypothesis_rate": hyp / count,
        "conclusion_holds": concl,
        "outcomes": dict(sorted(statuses.items())),
        "violations": [i for i, _ in violations],
        "witness_failures": bad_witnesses,
    }
    return summary, violations


def cmd_fuzz(seed: int, count: int, budget: Budget, out: _Output) -> int:
    start = time.perf_counter()
    try:
        summary, violations = fuzz_summary(seed, count, budget)
    except BudgetExceededError as exc:
        # no instance can be drawn at all: an input problem, not an overflow
        print(f"unsatisfiable budget: {exc}", file=out.err)
        return EXIT_INPUT
    summary["elapsed_seconds"] = round(time.perf_counter() - start, 3)
    for _, report in violations:
        print(render_counterexample(report), file=out.err)
    human = (f"fuzz seed={seed}: {count} instances, hypotheses held in "
             f"{summary['hypotheses_hold']}, lemma violations: {len(violations)}, "
             f"{summary['elapsed_seconds']}s")
    out.emit(summary, human)
    ok = not violations and not summary["witness_failures"]
    return EXIT_PASS if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="softtopo",
        description="Check soft topologies and the embedding lemma on finite instances.")
    p.add_argument("--input", metavar="FILE", help="JSON instance document")
    action = p.add_mutually_exclusive_group()
    action.add_argument("--check", metavar="NAME", help="run a named check")
    action.add_argument("--generate", metavar="NAME", help="generate from a named subbase")
    action.add_argument("--fuzz", action="store_true", help="random embedding lemma instances")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--budget", default="", metavar="LIMITS",
                   help="e.g. bits=64,opens=4096,universe=3,parameters=2,factors=3")
    p.add_argument("--json", action="store_true", help="pretty-print the JSON report")
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Output(args.json, stdout, stderr)
    try:
        budget = Budget.parse(args.budget)
        if args.fuzz:
            return cmd_fuzz(args.seed, args.count, budget, out)
        if not args.input:
            print("error: --input is required unless --fuzz is given", file=out.err)
            return EXIT_INPUT
        inst = load_instance(args.input)
        if args.generate:
            return cmd_generate(inst, args.generate, budget, out)
        if args.check:
            return cmd_check(inst, args.check, budget, out)
        return cmd_validate(inst, budget, out)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=out.err)
        return EXIT_BUDGET
    except (InstanceError, OSError, ValueError, SoftTopologyError) as exc:
        print(f"input error: {exc}", file=out.err)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
