"""Command-line surface: reproducible experiments over colourings and triple
systems with JSON output on stdout and diagnostics on stderr.

Exit codes: 0 success, 1 invalid input, 2 budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .core import (
    Colouring,
    TripleSystem,
    colour_profile,
    discrepancy,
    read_colouring,
    read_triple_system,
    write_colouring,
    write_triple_system,
)
from .decompose import (
    DecompositionExhausted,
    SimpleGraph,
    shadow,
    triangle_decompose,
    decomposition_system,
    verify_decomposition,
)
from .gadgets import (
    K222Copy,
    collect_gadgets,
    count_gadgets_exact,
    estimate_gadget_density,
    total_copies,
)
from .generators import (
    SplitSpec,
    balanced_split_size,
    example1_colouring,
    perturb,
    random_colouring,
)
from .pipeline import (
    AnalyzeParams,
    SelectionParams,
    analyze_r_colouring,
    baseline_random_embedding,
    boost,
    pasch_trade_search,
)
from .structure import recover_partition
from .sts import (
    ENUMERABLE_ORDERS,
    construct_sts,
    enumerate_all_sts,
    min_max_discrepancy_oracle,
    validate_sts,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_EXHAUSTED = 2


def _emit(payload: dict, args, started: float) -> None:
    out = {"schema": 1, "command": args.command}
    config = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("command", "func", "no_timing") and v is not None
    }
    out["config"] = config
    out.update(payload)
    if not args.no_timing:
        out["elapsed"] = round(time.perf_counter() - started, 6)
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _fraction_str(x: Fraction) -> str:
    return str(x)


def cmd_generate(args) -> int:
    if args.kind == "random":
        chi = random_colouring(args.n, args.r, args.seed)
    elif args.kind == "example1":
        x = args.x_size if args.x_size is not None else balanced_split_size(args.n)
        chi = example1_colouring(SplitSpec(args.n, x))
    elif args.kind == "monochromatic":
        chi = Colouring.constant(args.n, args.r, args.colour)
    else:
        raise ValueError(f"unknown kind {args.kind!r}")
    if args.flips:
        chi = perturb(chi, args.flips, args.seed)
    write_colouring(chi, args.out)
    return EXIT_OK


def cmd_construct(args) -> int:
    s = construct_sts(args.n)
    write_triple_system(s, args.out)
    return EXIT_OK


def cmd_discrepancy(args, started) -> int:
    s = read_triple_system(args.system)
    chi = read_colouring(args.colouring)
    ok, violation = validate_sts(s)
    if not ok:
        raise ValueError(f"system is not an STS: pair {violation[:2]} covered {violation[2]} times")
    _emit(
        {
            "n": s.n,
            "r": chi.r,
            "profile": list(colour_profile(s, chi)),
            "discrepancy": _fraction_str(discrepancy(s, chi)),
        },
        args,
        started,
    )
    return EXIT_OK


def cmd_count_gadgets(args, started) -> int:
    chi = read_colouring(args.colouring)
    if args.sampled:
        density, se = estimate_gadget_density(chi, args.samples, args.seed)
        payload = {
            "n": chi.n,
            "r": chi.r,
            "mode": "sampled",
            "density": density,
            "density_se": se,
            "samples": args.samples,
        }
    else:
        count = count_gadgets_exact(chi, cap=args.cap)
        payload = {
            "n": chi.n,
            "r": chi.r,
            "mode": "exact",
            "count": count,
            "total_copies": total_copies(chi.n),
        }
    _emit(payload, args, started)
    return EXIT_OK


def cmd_collect_gadgets(args, started) -> int:
    chi = read_colouring(args.colouring)
    records = collect_gadgets(chi, args.max_count, args.budget, args.seed)
    _emit(
        {
            "n": chi.n,
            "r": chi.r,
            "found": len(records),
            "gadgets": [
                {
                    "parts": [list(p) for p in rec.copy.parts],
                    "profile1": list(rec.profile1),
                    "profile2": list(rec.profile2),
                    "diff_colours": list(rec.diff_colours),
                }
                for rec in records
            ],
        },
        args,
        started,
    )
    return EXIT_OK


def cmd_recover_structure(args, started) -> int:
    chi = read_colouring(args.colouring)
    report = recover_partition(chi, seed=args.seed)
    _emit(
        {
            "n": chi.n,
            "x_size": len(report.x_part),
            "y_size": len(report.y_part),
            "x_part": sorted(report.x_part),
            "inside_colour": report.inside_colour,
            "cross_colour": report.cross_colour,
            "mismatch_count": report.mismatch_count,
            "mismatch_fraction": report.mismatch_fraction,
        },
        args,
        started,
    )
    return EXIT_OK


def _read_shadow_copies(path) -> list:
    copies = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            vals = list(map(int, line.split()))
            if len(vals) != 6:
                raise ValueError(f"shadow copy line needs 6 vertices, got {line!r}")
            copies.append(
                K222Copy.canonical((vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5]))
            )
    return copies


def cmd_decompose(args) -> int:
    if args.edges:
        pairs = []
        with open(args.edges) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                a, b = map(int, line.split())
                pairs.append((a, b))
        n = max(max(p) for p in pairs)
        g = SimpleGraph.from_edges(n, pairs)
    else:
        g = SimpleGraph.complete(args.complete)
        if args.minus_shadows:
            for u, v in shadow(_read_shadow_copies(args.minus_shadows)).edges():
                g.remove_edge(u, v)
    triangles = triangle_decompose(g, budget=args.budget, random_order_seed=args.random_order_seed)
    assert verify_decomposition(g, triangles)
    write_triple_system(decomposition_system(g.n, triangles), args.out)
    return EXIT_OK


def cmd_boost(args, started) -> int:
    chi = read_colouring(args.colouring)
    params = SelectionParams(
        target_count=args.target,
        vertex_cap=args.vertex_cap,
        mode=args.mode,
        p=args.p,
        seed=args.seed,
    )
    report = boost(chi, params, budget=args.budget, collect_budget=args.collect_budget)
    if report.status != "ok":
        print("boost: decomposition budget exhausted", file=sys.stderr)
        return EXIT_EXHAUSTED
    if args.out:
        write_triple_system(report.final_system, args.out)
    _emit(
        {
            "n": report.n,
            "r": report.r,
            "gadget_count_found": report.gadgets_found,
            "selected": report.selected,
            "T_vector": list(report.t_counts),
            "I_vector": list(report.i_sums),
            "S_vector": list(report.s_counts),
            "chosen_colour": report.chosen_colour,
            "discrepancy": _fraction_str(report.discrepancy),
            "decomposition_nodes": report.decomposition_nodes,
        },
        args,
        started,
    )
    return EXIT_OK


def cmd_trade_search(args, started) -> int:
    s = read_triple_system(args.system)
    chi = read_colouring(args.colouring)
    before = discrepancy(s, chi)
    improved = pasch_trade_search(s, chi, args.iterations, args.seed)
    after = discrepancy(improved, chi)
    if args.out:
        write_triple_system(improved, args.out)
    _emit(
        {
            "n": s.n,
            "r": chi.r,
            "discrepancy_before": _fraction_str(before),
            "discrepancy_after": _fraction_str(after),
        },
        args,
        started,
    )
    return EXIT_OK


def cmd_baseline(args, started) -> int:
    chi = read_colouring(args.colouring)
    best, best_disc = baseline_random_embedding(chi, args.trials, args.seed)
    if args.out:
        write_triple_system(best, args.out)
    _emit(
        {
            "n": chi.n,
            "r": chi.r,
            "trials": args.trials,
            "discrepancy": _fraction_str(best_disc),
        },
        args,
        started,
    )
    return EXIT_OK


def cmd_enumerate(args, started) -> int:
    if args.n not in ENUMERABLE_ORDERS:
        raise ValueError(f"enumeration supports n in {ENUMERABLE_ORDERS}, got {args.n}")
    if args.count_only:
        count = sum(1 for _ in enumerate_all_sts(args.n))
        _emit({"n": args.n, "count": count}, args, started)
        return EXIT_OK
    lines = (
        " ".join(",".join(map(str, t)) for t in s.triples) for s in enumerate_all_sts(args.n)
    )
    if args.out:
        with open(args.out, "w") as fh:
            for line in lines:
                fh.write(line + "\n")
    else:
        for line in lines:
            print(line)
    return EXIT_OK


def cmd_oracle(args, started) -> int:
    chi = read_colouring(args.colouring)
    lo, hi = min_max_discrepancy_oracle(chi)
    _emit(
        {
            "n": chi.n,
            "r": chi.r,
            "min_discrepancy": _fraction_str(lo),
            "max_discrepancy": _fraction_str(hi),
        },
        args,
        started,
    )
    return EXIT_OK


def cmd_analyze(args, started) -> int:
    chi = read_colouring(args.colouring)
    params = AnalyzeParams(samples=args.samples, seed=args.seed)
    report = analyze_r_colouring(chi, params)
    per_colour = {}
    for c, info in report.per_colour.items():
        st = info["structure"]
        per_colour[str(c)] = {
            "gadget_density": info["gadget_density"],
            "density_se": info["density_se"],
            "mode": info["mode"],
            "x_size": len(st.x_part),
            "mismatch_fraction": st.mismatch_fraction,
        }
    verdict = {"kind": report.verdict.kind}
    if report.verdict.colour is not None:
        verdict["colour"] = report.verdict.colour
    if report.verdict.dominant is not None:
        verdict["dominant"] = list(report.verdict.dominant)
        verdict["residual_count"] = report.verdict.residual_count
    _emit(
        {"n": report.n, "r": report.r, "per_colour": per_colour, "verdict": verdict},
        args,
        started,
    )
    return EXIT_OK


def cmd_verify(args, started) -> int:
    s = read_triple_system(args.system)
    ok, violation = validate_sts(s)
    payload = {"n": s.n, "valid": ok, "triples": len(s.triples)}
    if not ok:
        payload["violation"] = {"pair": list(violation[:2]), "covered": violation[2]}
    if args.colouring:
        chi = read_colouring(args.colouring)
        if chi.n != s.n:
            raise ValueError(f"order mismatch: system n={s.n}, colouring n={chi.n}")
        if ok:
            payload["r"] = chi.r
            payload["profile"] = list(colour_profile(s, chi))
            payload["discrepancy"] = _fraction_str(discrepancy(s, chi))
    _emit(payload, args, started)
    return EXIT_OK if ok else EXIT_BAD_INPUT


def cmd_report(args) -> int:
    from .report import ReportParams, run_report

    params = ReportParams(
        orders=tuple(args.n),
        colours=tuple(args.r),
        runs=args.runs,
        trials=args.trials,
        seed=args.seed,
        target=args.target,
        vertex_cap=args.vertex_cap,
    )
    paths = run_report(params, args.outdir)
    for p in paths:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stsdisc",
        description="Steiner triple systems under hypergraph edge colourings: "
        "discrepancy boosting, gadget counting, and structure recovery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--no-timing", action="store_true", help="omit elapsed time from JSON")
        p.add_argument("--workers", type=int, default=1, help="worker count (results are worker-independent)")
        return p

    p = add("generate", cmd_generate, "write a colouring file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--kind", choices=("random", "example1", "monochromatic"), default="random")
    p.add_argument("--x-size", type=int, default=None, help="split size for example1 (default: balanced)")
    p.add_argument("--colour", type=int, default=1, help="colour for monochromatic")
    p.add_argument("--flips", type=int, default=0, help="perturb this many triples after generating")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = add("construct", cmd_construct, "write a Steiner triple system file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)

    p = add("discrepancy", cmd_discrepancy, "evaluate a system against a colouring")
    p.add_argument("--system", required=True)
    p.add_argument("--colouring", required=True)

    p = add("count-gadgets", cmd_count_gadgets, "count gadgets exactly or by sampling")
    p.add_argument("--colouring", required=True)
    p.add_argument("--sampled", action="store_true")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--cap", type=int, default=21, help="largest n for exact mode")
    p.add_argument("--seed", type=int, default=0)

    p = add("collect-gadgets", cmd_collect_gadgets, "collect gadget records by random probing")
    p.add_argument("--colouring", required=True)
    p.add_argument("--max-count", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = add("recover-structure", cmd_recover_structure, "recover the split partition of a 2-colouring")
    p.add_argument("--colouring", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = add("decompose", cmd_decompose, "triangle-decompose a graph")
    p.add_argument("--edges", help="edge list file, one 'a b' pair per line")
    p.add_argument("--complete", type=int, help="use the complete graph K_n")
    p.add_argument("--minus-shadows", help="file of K222 copies (6 vertices per line) whose shadows are removed")
    p.add_argument("--budget", type=int, default=10**8)
    p.add_argument("--random-order-seed", type=int, default=None)
    p.add_argument("--out", required=True)

    p = add("boost", cmd_boost, "run the gadget discrepancy-boosting pipeline")
    p.add_argument("--colouring", required=True)
    p.add_argument("--target", type=int, default=50, help="desired number of selected gadgets")
    p.add_argument("--vertex-cap", type=int, default=None)
    p.add_argument("--mode", choices=("greedy", "sampled"), default="greedy")
    p.add_argument("--p", type=float, default=None, help="sampled-mode inclusion probability")
    p.add_argument("--budget", type=int, default=10**8)
    p.add_argument("--collect-budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the boosted system here")

    p = add("trade-search", cmd_trade_search, "hill-climb by Pasch trades")
    p.add_argument("--system", required=True)
    p.add_argument("--colouring", required=True)
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = add("baseline", cmd_baseline, "best-of-k random embedding baseline")
    p.add_argument("--colouring", required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = add("enumerate", cmd_enumerate, "enumerate all labeled systems (n in 3, 7, 9)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--out")

    p = add("oracle", cmd_oracle, "exact min/max discrepancy over all systems (n in 7, 9)")
    p.add_argument("--colouring", required=True)

    p = add("analyze", cmd_analyze, "multicolour analysis via colour merging")
    p.add_argument("--colouring", required=True)
    p.add_argument("--samples", type=int, default=4000)
    p.add_argument("--seed", type=int, default=0)

    p = add("verify", cmd_verify, "validate a system file, optionally against a colouring")
    p.add_argument("--system", required=True)
    p.add_argument("--colouring")

    p = add("report", cmd_report, "boost-vs-baseline sweep: CSV plus figures")
    p.add_argument("--n", type=int, action="append", required=True, help="order (repeatable)")
    p.add_argument("--r", type=int, action="append", required=True, help="colour count (repeatable)")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--target", type=int, default=50)
    p.add_argument("--vertex-cap", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--outdir", required=True)

    return parser


_TIMED = {
    "discrepancy": cmd_discrepancy,
    "count-gadgets": cmd_count_gadgets,
    "collect-gadgets": cmd_collect_gadgets,
    "recover-structure": cmd_recover_structure,
    "boost": cmd_boost,
    "trade-search": cmd_trade_search,
    "baseline": cmd_baseline,
    "enumerate": cmd_enumerate,
    "oracle": cmd_oracle,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    started = time.perf_counter()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command in _TIMED:
            return args.func(args, started)
        return args.func(args)
    except DecompositionExhausted:
        print("error: search budget exhausted", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
