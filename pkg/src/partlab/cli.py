"""Command-line front door for the partition laboratory.

Exit codes: 0 verified/pass, 1 counterexample found, 2 usage error,
3 budget or threshold error.  Counterexamples are successes of the tool
but exit nonzero so scripts can branch on them.  Every JSON report
embeds the full run configuration, and identical configurations produce
identical reports up to the elapsed-time field.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Optional

from .counting import entropy_bounds, ratio_R
from .e1 import BinaryGrid, blowup_iso, cs_decode, cs_encode, reduce_f
from .errors import BudgetError, DomainError, PartlabError, ThresholdError
from .partitions import (
    SetPartition,
    count_equipartitions,
    count_partitions,
    enumerate_equipartitions,
    enumerate_partitions,
)
from .prefixes import PartitionPrefix, induced_coarsening_h
from .reports import WitnessReport
from .tree import verify_tree
from .witness import (
    Adversarial,
    EMapTable,
    Exhaustive,
    Sampled,
    bad_pairs,
    fusion_conditions_hold,
    fusion_step,
    partition_space,
    verify_comb,
)

__all__ = ["main"]

EXIT_PASS = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

CHECKPOINT_EVERY = 10_000


def _parse_strategy(text: str, samples: int, seed: int):
    """Strategy syntax: exhaustive[:CAP] | sampled[:COUNT[:SEED]] | adversarial[:BUDGET[:SEED]]."""
    parts = text.split(":")
    name = parts[0]
    if name == "exhaustive":
        cap = int(parts[1]) if len(parts) > 1 else None
        return Exhaustive(cap=cap)
    if name == "sampled":
        count = int(parts[1]) if len(parts) > 1 else samples
        sd = int(parts[2]) if len(parts) > 2 else seed
        return Sampled(count, sd)
    if name == "adversarial":
        budget = int(parts[1]) if len(parts) > 1 else samples
        sd = int(parts[2]) if len(parts) > 2 else seed
        return Adversarial(budget, sd)
    raise DomainError(f"unknown strategy {text!r}")


def _config_dict(args: argparse.Namespace) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(args, payload: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(payload)
            if not payload.endswith("\n"):
                fh.write("\n")
    else:
        print(payload)


def _emit_report(args, report: WitnessReport) -> None:
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        doc = {"config": _config_dict(args), "report": report.to_json_dict()}
        _emit(args, json.dumps(doc, indent=2, sort_keys=True))
    elif fmt == "csv":
        _emit(args, report.to_csv())
    elif fmt == "table":
        d = report.to_json_dict()
        lines = [f"{name:18} {d[name]}" for name in ("params", "strategy", "seed") + WitnessReport.CSV_FIELDS[2:]]
        _emit(args, "\n".join(lines))
    else:
        raise DomainError(f"unknown format {fmt!r}")


def _parse_partition(text: str) -> SetPartition:
    if text.startswith("L="):
        return PartitionPrefix.from_text(text).as_partition()
    return SetPartition.from_text(text)


def _parse_prefix(text: str) -> PartitionPrefix:
    if text.startswith("L="):
        return PartitionPrefix.from_text(text)
    return PartitionPrefix(SetPartition.from_text(text).rgs)


# -- subcommands --------------------------------------------------------------


def cmd_enumerate(args) -> int:
    if args.k is not None:
        if args.N is None:
            raise DomainError("equipartition enumeration needs --k and --N")
        stream = enumerate_equipartitions(args.k, args.N, args.m)
    else:
        if args.n is None:
            raise DomainError("enumerate needs --n (or --k with --N)")
        stream = enumerate_partitions(args.n, args.m)
    lines = [p.to_text() for p in stream]
    _emit(args, "\n".join(lines))
    return EXIT_PASS


def cmd_count(args) -> int:
    if args.bell is not None:
        value = count_partitions(args.bell)
    elif args.k is not None and args.N is not None:
        value = count_equipartitions(args.k, args.N)
        if args.m:
            value = sum(1 for _ in enumerate_equipartitions(args.k, args.N, args.m))
    elif args.n is not None:
        if args.m:
            value = sum(1 for _ in enumerate_partitions(args.n, args.m))
        else:
            value = count_partitions(args.n)
    else:
        raise DomainError("count needs --bell, --n, or --k with --N")
    _emit(args, str(value))
    return EXIT_PASS


def cmd_verify_comb(args) -> int:
    strategy = _parse_strategy(args.strategy, args.samples, args.seed)
    if isinstance(strategy, Sampled) and (args.jobs > 1 or strategy.count > CHECKPOINT_EVERY):
        report = _chunked_verify_comb(args, strategy)
    else:
        report = verify_comb(args.k, args.m, args.N, strategy)
    _emit_report(args, report)
    return EXIT_PASS if report.details["all_witnessed"] else EXIT_COUNTEREXAMPLE


def _merge_campaign(parts: list[WitnessReport], strategy) -> WitnessReport:
    """Combine chunked campaign reports into one, keeping the worst map."""
    worst = max(parts, key=lambda r: r.bad_pair_count)
    out = WitnessReport(
        params=worst.params,
        strategy=strategy.label(),
        seed=strategy.seed,
        witness=None,
        bad_pair_count=worst.bad_pair_count,
        candidate_count=worst.candidate_count,
        census=worst.census,
        ratio=max(r.ratio for r in parts),
        elapsed_ms=sum(r.elapsed_ms for r in parts),
        details=dict(worst.details),
    )
    out.details["tested"] = sum(r.details["tested"] for r in parts)
    out.details["failures"] = sum(r.details["failures"] for r in parts)
    out.details["all_witnessed"] = all(r.details["all_witnessed"] for r in parts)
    shapes = []
    for r in parts:
        shapes.extend(r.details.get("counterexample_shapes", []))
    out.details["counterexample_shapes"] = shapes
    return out


def _chunk_worker(task):
    k, m, N, count, seed, start = task
    return verify_comb(k, m, N, Sampled(count, seed, start))


def _chunked_verify_comb(args, strategy: Sampled) -> WitnessReport:
    """Split a sampled campaign into chunks; checkpoint progress if --out is set."""
    tasks = []
    pos = strategy.start
    remaining = strategy.count
    while remaining > 0:
        size = min(CHECKPOINT_EVERY, remaining)
        tasks.append((args.k, args.m, args.N, size, strategy.seed, pos))
        pos += size
        remaining -= size
    state_path = args.out + ".state" if args.out else None
    done: dict[str, dict] = {}
    if state_path and os.path.exists(state_path):
        with open(state_path) as fh:
            done = json.load(fh)
    parts = []
    pending = [t for t in tasks if str(t[5]) not in done]
    for t in tasks:
        if str(t[5]) in done:
            parts.append(_report_from_state(done[str(t[5])], args))
    if args.jobs > 1 and len(pending) > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for t, rep in zip(pending, pool.map(_chunk_worker, pending)):
                parts.append(rep)
                _checkpoint(state_path, done, t[5], rep)
    else:
        for t in pending:
            rep = _chunk_worker(t)
            parts.append(rep)
            _checkpoint(state_path, done, t[5], rep)
    return _merge_campaign(parts, strategy)


def _checkpoint(state_path: Optional[str], done: dict, start: int, rep: WitnessReport) -> None:
    if state_path is None:
        return
    done[str(start)] = rep.to_json_dict()
    tmp = state_path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(done, fh)
    os.replace(tmp, state_path)


def _report_from_state(d: dict, args) -> WitnessReport:
    from fractions import Fraction

    return WitnessReport(
        params=d["params"],
        strategy=d["strategy"],
        seed=d["seed"],
        witness=None,
        bad_pair_count=int(d["bad_pair_count"]),
        candidate_count=int(d["candidate_count"]),
        census=d["census"],
        ratio=Fraction(d["ratio"]) if d["ratio"] is not None else None,
        elapsed_ms=d["elapsed_ms"],
        details=d["details"],
    )


def cmd_verify_tree(args) -> int:
    strategy = _parse_strategy(args.strategy, args.samples, args.seed)
    if isinstance(strategy, Adversarial):
        raise DomainError("verify-tree supports exhaustive and sampled strategies")
    report = verify_tree(args.k, args.N, strategy)
    _emit_report(args, report)
    return EXIT_PASS if report.details["all_witnessed"] else EXIT_COUNTEREXAMPLE


def _build_emap(text: str, n: int) -> EMapTable:
    parts = text.split(":")
    if parts[0] == "identity":
        return EMapTable.identity(n)
    if parts[0] == "constant":
        return EMapTable.constant(n, SetPartition.from_text(parts[1]))
    if parts[0] == "random":
        seed = int(parts[1]) if len(parts) > 1 else 0
        rng = random.Random(seed)
        size = len(partition_space(n))
        return EMapTable(n, tuple(rng.randrange(size) for _ in range(size)))
    raise DomainError(f"unknown e-map form {text!r}")


def cmd_bad_pairs(args) -> int:
    e = _build_emap(args.e_map, args.k * args.N)
    report = bad_pairs(e, args.k, args.m, args.N)
    _emit_report(args, report)
    return EXIT_PASS


def cmd_find_threshold(args) -> int:
    search = Sampled(args.samples, args.seed)
    state_path = args.out + ".state" if args.out else None
    done: dict[str, dict] = {}
    if state_path and os.path.exists(state_path):
        with open(state_path) as fh:
            done = json.load(fh)
    found = None
    reports = []
    for N in range(1, args.n_max + 1):
        if str(N) in done:
            rep = _report_from_state(done[str(N)], args)
        else:
            rep = verify_comb(args.k, args.m, N, search)
            rep.details["empirical"] = True
            _checkpoint(state_path, done, N, rep)
        reports.append(rep)
        if rep.details["all_witnessed"] and rep.ratio < 1:
            found = N
            break
    doc = {
        "config": _config_dict(args),
        "threshold": found,
        "empirical": True,
        "reports": [r.to_json_dict() for r in reports],
    }
    _emit(args, json.dumps(doc, indent=2, sort_keys=True))
    if found is None:
        return EXIT_BUDGET
    return EXIT_PASS


def cmd_entropy_check(args) -> int:
    bad = []
    for b in range(1, args.b_max + 1):
        for a in range(b + 1):
            lower, binom, upper = entropy_bounds(a, b)
            if not lower <= binom <= upper:
                bad.append((a, b))
    doc = {"config": _config_dict(args), "checked": True, "violations": bad}
    _emit(args, json.dumps(doc, indent=2, sort_keys=True))
    return EXIT_PASS if not bad else EXIT_COUNTEREXAMPLE


def cmd_ratio(args) -> int:
    value = ratio_R(args.a1, args.a2, args.b1, args.b2, args.N)
    _emit(args, str(value))
    return EXIT_PASS


def cmd_fusion_demo(args) -> int:
    rng = random.Random(args.seed)
    B = PartitionPrefix.discrete(args.L)
    mprime = args.Mprime
    space = partition_space(mprime)
    table = {}
    for t in space:
        key = induced_coarsening_h(SetPartition(t), B, mprime)
        value = induced_coarsening_h(SetPartition(rng.choice(space)), B, mprime)
        table[key.to_text()] = value
    B_new = fusion_step(B, table, args.n0, args.ell, mprime)
    cond1, cond2 = fusion_conditions_hold(B, B_new, table, args.n0, args.ell)
    doc = {
        "config": _config_dict(args),
        "input": B.to_text(),
        "output": B_new.to_text(),
        "approximation_kept": cond1,
        "trace_disjunction": cond2,
    }
    _emit(args, json.dumps(doc, indent=2, sort_keys=True))
    return EXIT_PASS if cond1 and cond2 else EXIT_COUNTEREXAMPLE


def cmd_reduce_e1(args) -> int:
    if args.grid:
        with open(args.grid) as fh:
            x = BinaryGrid.from_text(fh.read())
    else:
        rng = random.Random(args.seed)
        x = BinaryGrid(
            tuple(tuple(rng.randrange(2) for _ in range(args.cols)) for _ in range(args.rows))
        )
    p = reduce_f(x, args.L)
    _emit(args, p.to_text())
    return EXIT_PASS


def cmd_blowup(args) -> int:
    A = _parse_prefix(args.a)
    D = _parse_prefix(args.d)
    _emit(args, blowup_iso(A, D).to_text())
    return EXIT_PASS


def cmd_encode(args) -> int:
    if args.decode:
        with open(args.decode) as fh:
            grid = BinaryGrid.from_text(fh.read())
        _emit(args, cs_decode(grid).to_text())
    else:
        if not args.p:
            raise DomainError("encode needs --p or --decode")
        _emit(args, cs_encode(_parse_prefix(args.p)).to_text().rstrip("\n"))
    return EXIT_PASS


# -- parser -------------------------------------------------------------------


def _add_common(sub, *names):
    if "k" in names:
        sub.add_argument("--k", type=int)
    if "m" in names:
        sub.add_argument("--m", type=int, default=0)
    if "N" in names:
        sub.add_argument("--N", type=int)
    if "strategy" in names:
        sub.add_argument("--strategy", default="sampled")
        sub.add_argument("--samples", type=int, default=1000)
        sub.add_argument("--seed", type=int, default=0)
        sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--out")
    sub.add_argument("--format", choices=("json", "csv", "table"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="partlab",
        description="Verification laboratory for finite partition combinatorics.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("enumerate", help="list partitions or equipartitions")
    p.add_argument("--n", type=int)
    _add_common(p, "k", "m", "N")
    p.set_defaults(func=cmd_enumerate)

    p = subs.add_parser("count", help="count partitions without listing them")
    p.add_argument("--n", type=int)
    p.add_argument("--bell", type=int)
    _add_common(p, "k", "m", "N")
    p.set_defaults(func=cmd_count)

    p = subs.add_parser("verify-comb", help="witness campaign for the coarsening lemma")
    _add_common(p, "k", "m", "N", "strategy")
    p.set_defaults(func=cmd_verify_comb)

    p = subs.add_parser("verify-tree", help="witness campaign for the section lemma")
    _add_common(p, "k", "N", "strategy")
    p.set_defaults(func=cmd_verify_tree)

    p = subs.add_parser("bad-pairs", help="census of lemma violations for one map")
    p.add_argument("--e-map", default="identity")
    _add_common(p, "k", "m", "N")
    p.set_defaults(func=cmd_bad_pairs)

    p = subs.add_parser("find-threshold", help="least N with a clean sampled campaign")
    p.add_argument("--n-max", type=int, default=6)
    _add_common(p, "k", "m", "strategy")
    p.set_defaults(func=cmd_find_threshold)

    p = subs.add_parser("entropy-check", help="exact entropy sandwich sweep")
    p.add_argument("--b-max", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=cmd_entropy_check)

    p = subs.add_parser("ratio", help="exact factorial-combination ratio")
    p.add_argument("--a1", type=int, required=True)
    p.add_argument("--a2", type=int, required=True)
    p.add_argument("--b1", type=int, required=True)
    p.add_argument("--b2", type=int, required=True)
    _add_common(p, "N")
    p.set_defaults(func=cmd_ratio)

    p = subs.add_parser("fusion-demo", help="one fusion step on a random table")
    p.add_argument("--L", type=int, default=8)
    p.add_argument("--n0", type=int, default=0)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--Mprime", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_fusion_demo)

    p = subs.add_parser("reduce-e1", help="grid-to-partition reduction")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--grid", help="path to a grid file; omit for a seeded random grid")
    p.add_argument("--rows", type=int, default=8)
    p.add_argument("--cols", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_reduce_e1)

    p = subs.add_parser("blowup", help="inflate one partition prefix along another")
    p.add_argument("--a", required=True, help="partition text, e.g. 'L=4;0,0,1,2'")
    p.add_argument("--d", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_blowup)

    p = subs.add_parser("encode", help="block indicator grid of a partition prefix")
    p.add_argument("--p", help="partition text to encode")
    p.add_argument("--decode", help="grid file to decode instead")
    _add_common(p)
    p.set_defaults(func=cmd_encode)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BudgetError, ThresholdError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, PartlabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
