"""Command-line front end.

Exit codes: 0 success or predicate true, 1 predicate false, 2 usage, input or
budget error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from collections.abc import Sequence

from .gal import BothPick, ContestedResolved, ContestedToC, GalResult, LastToC, run_gal
from .oracle import (
    BudgetExceeded,
    OracleBudget,
    find_ef_dominator,
    find_ef_extension,
    find_local_improvement,
    oracle_complete_ef_exists,
)
from .prefs import InstanceError, Profile, parse_profile, random_profile, serialize_profile
from .sd import Assignment, envy_witness, is_ef, is_lpo, lpo_violation

OK, FALSE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def load_profile(path: str) -> Profile:
    try:
        return parse_profile(_read(path))
    except InstanceError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _labels_from(value, field: str, profile: Profile) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise UsageError(f"{field}: must be a list of labels")
    out = []
    for lab in value:
        if lab not in profile.labels:
            raise UsageError(f"{field}: unknown object {lab!r}")
        o = profile.labels.index(lab)
        if o in out:
            raise UsageError(f"{field}: object {lab!r} listed twice")
        out.append(o)
    return out


def load_assignment(path: str, profile: Profile) -> Assignment:
    """Read ``{"p1": [...], "p2": [...]}`` or ``p1: ...`` / ``p2: ...`` lines."""
    text = _read(path)
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: line {exc.lineno}: {exc.msg}") from None
        if not isinstance(data, dict) or "p1" not in data or "p2" not in data:
            raise UsageError(f"{path}: expected an object with 'p1' and 'p2'")
    else:
        data = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, rest = line.partition(":")
            key = key.strip()
            if not sep or key not in ("p1", "p2") or key in data:
                raise UsageError(f"{path}: line {lineno}: expected one 'p1:' and one 'p2:' line")
            data[key] = rest.replace("[", " ").replace("]", " ").replace(",", " ").split()
        if set(data) != {"p1", "p2"}:
            raise UsageError(f"{path}: expected 'p1:' and 'p2:' lines")
    p1 = _labels_from(data["p1"], "p1", profile)
    p2 = _labels_from(data["p2"], "p2", profile)
    both = sorted(set(p1) & set(p2))
    if both:
        names = ", ".join(profile.labels[o] for o in both)
        raise UsageError(f"{path}: p1 and p2 overlap on {names}")
    return Assignment.of(profile.m, p1, p2)


# -- rendering ---------------------------------------------------------------


def _names(profile: Profile, objs) -> list[str]:
    return [profile.labels[o] for o in objs]


def _action_json(profile: Profile, act) -> dict:
    lab = profile.labels
    if isinstance(act, BothPick):
        return {"type": "both-pick", "to_agent1": lab[act.to_agent1], "to_agent2": lab[act.to_agent2]}
    if isinstance(act, ContestedResolved):
        return {
            "type": "contested-resolved",
            "contested": lab[act.contested],
            "receiver": act.receiver,
            "other_object": lab[act.other_object],
        }
    if isinstance(act, ContestedToC):
        return {"type": "contested-to-pile", "contested": lab[act.contested]}
    return {"type": "last-to-pile", "object": lab[act.obj]}


def _action_text(profile: Profile, act) -> str:
    lab = profile.labels
    if isinstance(act, BothPick):
        return f"agent 1 takes {lab[act.to_agent1]}, agent 2 takes {lab[act.to_agent2]}"
    if isinstance(act, ContestedResolved):
        other = 3 - act.receiver
        return (
            f"contested {lab[act.contested]} goes to agent {act.receiver}, "
            f"agent {other} takes {lab[act.other_object]}"
        )
    if isinstance(act, ContestedToC):
        return f"contested {lab[act.contested]} goes to the pile"
    assert isinstance(act, LastToC)
    return f"last object {lab[act.obj]} goes to the pile"


def _sequences(result: GalResult) -> list[tuple[list[int], list[int]]]:
    """Per-round prefixes of each agent's objects in order of receipt."""
    s1, s2, out = [], [], []
    for rec in result.trace:
        act = rec.action
        if isinstance(act, BothPick):
            s1.append(act.to_agent1)
            s2.append(act.to_agent2)
        elif isinstance(act, ContestedResolved):
            mine, other = (s1, s2) if act.receiver == 1 else (s2, s1)
            mine.append(act.contested)
            other.append(act.other_object)
        out.append((list(s1), list(s2)))
    return out


def result_json(profile: Profile, result: GalResult, trace: bool) -> dict:
    seqs = _sequences(result)
    s1, s2 = seqs[-1]
    a = result.assignment
    doc = {
        "p1": _names(profile, s1),
        "p2": _names(profile, s2),
        "contested": _names(profile, result.contested),
        "complete": result.complete,
        "favor": result.favor,
        "checks": {"ef": is_ef(profile, a), "lpo": is_lpo(profile, a)},
    }
    if trace:
        doc["trace"] = [
            {
                "round": rec.round,
                "action": _action_json(profile, rec.action),
                "p1": _names(profile, q1),
                "p2": _names(profile, q2),
                "contested": _names(profile, rec.contested),
            }
            for rec, (q1, q2) in zip(result.trace, seqs)
        ]
    return doc


def _fmt(profile: Profile, objs) -> str:
    return "{" + ", ".join(_names(profile, objs)) + "}"


def _describe_assignment(profile: Profile, a: Assignment) -> str:
    return f"p1={_fmt(profile, sorted(a.p1))} p2={_fmt(profile, sorted(a.p2))}"


# -- commands ----------------------------------------------------------------


def cmd_allocate(args) -> int:
    profile = load_profile(args.input)
    result = run_gal(profile, args.favor)
    doc = result_json(profile, result, args.trace)
    if args.json:
        print(json.dumps(doc))
        return OK
    if args.trace:
        for rec, step in zip(result.trace, doc["trace"]):
            print(
                f"round {rec.round}: {_action_text(profile, rec.action)}; "
                f"p1={{{', '.join(step['p1'])}}} p2={{{', '.join(step['p2'])}}} "
                f"C={{{', '.join(step['contested'])}}}"
            )
    for key in ("p1", "p2", "contested"):
        print(" ".join([f"{key}:"] + doc[key]))
    print(f"complete: {str(doc['complete']).lower()}")
    return OK


def _budget(args) -> OracleBudget:
    return OracleBudget(max_objects=args.max_oracle_objects, max_enumerations=args.max_enumerations)


def cmd_check(args) -> int:
    profile = load_profile(args.input)
    a = load_assignment(args.assignment, profile)
    lab = profile.labels
    if args.kind == "ef":
        w = envy_witness(profile, a)
        if w is None:
            print("EF: yes")
            return OK
        agent, j = w
        print(
            f"EF: no; agent {agent} envies agent {3 - agent}: "
            f"in its top {j + 1} indifference classes it holds fewer objects"
        )
        return FALSE
    if args.kind == "lpo":
        v = lpo_violation(profile, a)
        if v is None:
            print("LPO: yes")
            return OK
        agent, o, better = v
        print(
            f"LPO: no; witness pair ({lab[better]}, {lab[o]}): agent {agent} strictly "
            f"prefers {lab[better]} to its {lab[o]}, agent {3 - agent} weakly prefers "
            f"{lab[o]} to its {lab[better]}"
        )
        return FALSE
    # maximal
    if not is_ef(profile, a):
        print("maximal EF: no; the assignment is not EF")
        return FALSE
    ext = find_ef_extension(profile, a, _budget(args))
    if ext is None:
        print("maximal EF: yes")
        return OK
    print(f"maximal EF: no; EF extension {_describe_assignment(profile, ext)}")
    return FALSE


def cmd_exists_complete_ef(args) -> int:
    profile = load_profile(args.input)
    result = run_gal(profile)
    if result.complete:
        print("complete EF assignment: exists")
        return OK
    print("complete EF assignment: none")
    return FALSE


def cmd_verify(args) -> int:
    profile = load_profile(args.input)
    budget = _budget(args)
    budget.check(profile.m, 0)
    result = run_gal(profile, args.favor)
    a = result.assignment
    improvement = find_local_improvement(profile, a, budget)
    checks = [
        ("EF", is_ef(profile, a)),
        ("LPO", is_lpo(profile, a) and improvement is None),
        ("maximal", find_ef_extension(profile, a, budget) is None),
        ("no-EF-dominator", find_ef_dominator(profile, a, budget) is None),
        ("complete-iff-oracle", result.complete == oracle_complete_ef_exists(profile, budget)),
    ]
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return OK if all(ok for _, ok in checks) else FALSE


def cmd_gen(args) -> int:
    m = args.objects
    if m < 1:
        raise UsageError("--objects must be at least 1")
    k = m if args.max_classes is None else args.max_classes
    if not 1 <= k <= m:
        raise UsageError(f"--max-classes must lie in 1..{m}")
    profile = random_profile(m, random.Random(args.seed), strict=args.strict, max_classes=k)
    sys.stdout.write(serialize_profile(profile))
    return OK


def bench_ladder(start: int, max_m: int) -> list[int]:
    ladder = []
    m = start
    while m <= max_m:
        ladder.append(m)
        m *= 2
    return ladder


def loglog_slope(ms: Sequence[int], times: Sequence[float]) -> float:
    xs = [math.log(m) for m in ms]
    ys = [math.log(t) for t in times]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


def run_bench(max_m: int, repeats: int, start: int = 250, seed: int = 0) -> list[tuple[int, float]]:
    """Mean ``run_gal`` wall time for each size of the doubling ladder."""
    if repeats <= 0:
        return []
    rows = []
    for m in bench_ladder(start, max_m):
        instances = [random_profile(m, random.Random(seed * 1_000_003 + m * 101 + r)) for r in range(repeats)]
        run_gal(instances[0])  # warm-up
        total = 0.0
        for p in instances:
            t0 = time.perf_counter()
            run_gal(p)
            total += time.perf_counter() - t0
        rows.append((m, total / repeats))
    return rows


def cmd_bench(args) -> int:
    if args.start < 1:
        raise UsageError("--start must be at least 1")
    rows = run_bench(args.max_m, args.repeats, args.start, args.seed)
    print("m,mean_seconds")
    for m, t in rows:
        print(f"{m},{t:.6f}")
    if len(rows) >= 2:
        print(f"slope,{loglog_slope([m for m, _ in rows], [t for _, t in rows]):.3f}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="galfair", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def oracle_flags(p):
        p.add_argument("--max-oracle-objects", type=int, default=12)
        p.add_argument("--max-enumerations", type=int, default=10**7)

    p = sub.add_parser("allocate", help="run GAL on an instance")
    p.add_argument("--input", required=True)
    p.add_argument("--favor", type=int, choices=(1, 2), default=1)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("check", help="test an assignment for EF, LPO or maximal EF")
    p.add_argument("kind", choices=("ef", "lpo", "maximal"))
    p.add_argument("--input", required=True)
    p.add_argument("--assignment", required=True)
    oracle_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("exists-complete-ef", help="decide whether a complete EF assignment exists")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_exists_complete_ef)

    p = sub.add_parser("verify", help="run GAL and confirm its guarantees by brute force")
    p.add_argument("--input", required=True)
    p.add_argument("--favor", type=int, choices=(1, 2), default=1)
    oracle_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="print a seeded random instance")
    p.add_argument("--objects", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--max-classes", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time GAL over a doubling ladder of sizes")
    p.add_argument("--max-m", type=int, default=2000)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--start", type=int, default=250)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    try:
        return args.func(args)
    except (UsageError, BudgetExceeded) as exc:
        print(f"galfair: error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
