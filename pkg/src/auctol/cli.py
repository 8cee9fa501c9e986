"""Batch command-line surface.

Subcommands: ``solve`` (run one algorithm on one instance), ``order``
(compute and embed an ordering plus any certifiable beta bound), ``gen``
(write generator output), ``verify`` (run solvers, oracle and exact beta on
a corpus and assert every claimed inequality), ``bench`` (assert the
per-element cost of the linear-time solvers stays flat across sizes).

Exit codes: 0 success, 2 validation failure, 3 capacity refusal, 4
chordality recognition failure (witness on stderr), 5 verification
violation.
"""

from __future__ import annotations

import argparse
import gc
import json
import sys
import time
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from . import budgets, instances, solvers
from .errors import CapacityError, NotChordalError, SchemaError, ValidationError
from .graphs import beta_bound_frontier, beta_exact, build_bid_graph, orient
from .orderings import (
    NotChordal,
    decreasing_weight_ordering,
    grid_ordering,
    lexbfs_peo,
    min_degree_heuristic_decomposition,
    tree_decomposition_ordering,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAPACITY = 3
EXIT_NOT_CHORDAL = 4
EXIT_VIOLATION = 5


def _write_output(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _solve_dispatch(inst, g, algo: str, use_constraints: bool, oracle_cap: int, include_zero_value: bool = False):
    cs = inst.constraints if use_constraints else None
    if cs is None:
        if algo == "opcost":
            return solvers.opcost(g, include_zero_value=include_zero_value)[0]
        if algo == "lropcost":
            return solvers.lropcost(g)
        if algo == "greedy":
            return solvers.greedy(g, g.ordering)
        return solvers.exact_mwis(g, node_cap=oracle_cap if oracle_cap else 30)
    if algo == "greedy":
        raise ValidationError("greedy has no budget-aware mode; pass --constraints ignore")
    if algo == "exact":
        revenue, chosen = budgets.exact_feasible(g, cs, node_cap=oracle_cap if oracle_cap else 20)
        return solvers.Solution(chosen, revenue, solvers.Certificate("exact", claimed_ratio=Fraction(1)))
    if cs.kind == "unweighted":
        return budgets.solve_unweighted(g, cs)[0] if algo == "opcost" else budgets.solve_unweighted_lr(g, cs)
    if cs.kind == "overlapping":
        return budgets.solve_overlapping(g, cs) if algo == "opcost" else budgets.solve_overlapping_lr(g, cs)
    return budgets.solve_weighted(g, cs, light_mode="lazy" if algo == "opcost" else "direct")


def cmd_solve(args) -> int:
    inst = instances.load_instance(args.input)
    g = instances.oriented_graph(inst)
    sol = _solve_dispatch(inst, g, args.algo, args.constraints == "auto", args.cap, args.include_zero_value)
    bound, _method = instances.beta_bound_info(inst, g.ordering, g)
    if bound is not None and sol.certificate.beta_bound is None:
        ratio = None
        if args.constraints == "auto" and inst.constraints is not None:
            kind = inst.constraints.kind
            if kind == "unweighted":
                ratio = Fraction(bound + 1)
            elif kind == "overlapping":
                ratio = Fraction(bound + inst.constraints.overlap())
            else:
                ratio = Fraction(2 * bound + 3)
        elif sol.certificate.algorithm in ("opcost", "lropcost"):
            ratio = Fraction(bound)
        sol = replace(
            sol,
            certificate=replace(sol.certificate, beta_bound=bound, claimed_ratio=ratio),
        )
    _write_output(instances.dumps_solution(sol), args.output)
    return EXIT_OK


def cmd_order(args) -> int:
    inst = instances.load_instance(args.input)
    g = instances.bid_graph(inst)
    spec = None
    if args.method == "chordal":
        result = lexbfs_peo(g)
        if isinstance(result, NotChordal):
            raise NotChordalError((result.node, result.a, result.b))
        spec = instances.OrderingSpec("chordal", beta_bound=1)
    elif args.method == "tree-decomposition":
        td = inst.ordering_spec.tree_decomposition if inst.ordering_spec else None
        if td is None:
            if inst.object_graph is None:
                raise ValidationError("tree-decomposition ordering needs an object graph or an embedded decomposition")
            td = min_degree_heuristic_decomposition(inst.object_graph)
        ordering = tree_decomposition_ordering(td, inst.bids, inst.object_graph)
        spec = instances.OrderingSpec("tree-decomposition", tree_decomposition=td, beta_bound=beta_bound_frontier(ordering))
    elif args.method == "grid":
        if inst.ordering_spec is None or inst.ordering_spec.coords is None:
            raise ValidationError("grid ordering needs coordinates in the instance")
        ordering = grid_ordering(inst.ordering_spec.coords)
        g2 = orient(g, ordering)
        bound, _ = instances.beta_bound_info(inst, ordering, g2)
        spec = instances.OrderingSpec("grid", coords=inst.ordering_spec.coords, beta_bound=bound)
    else:
        decreasing_weight_ordering(g)
        spec = instances.OrderingSpec("decreasing-weight")
    out = instances.Instance(inst.bids, inst.object_graph, inst.constraints, spec, inst.metadata)
    _write_output(instances.dumps_instance(out), args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.family == "interval":
        inst = instances.gen_interval(args.n, (args.wmin, args.wmax), args.seed)
    elif args.family == "interval-selection":
        inst = instances.gen_interval_selection(args.groups, args.per_group, args.seed, (args.wmin, args.wmax))
    elif args.family == "subtrees":
        inst = instances.gen_subtrees(args.tree_size, args.n, args.seed, (args.wmin, args.wmax))
    elif args.family == "grid":
        dims = tuple(int(d) for d in args.dims.split("x"))
        inst = instances.gen_grid(dims, args.density_milli, (args.wmin, args.wmax), args.seed)
    elif args.family == "tight":
        inst = instances.gen_tight(args.beta, args.epsilon_milli, args.seed)
    else:
        params = {
            "n": args.n,
            "group_size": args.group_size,
            "k_max": args.k_max,
            "t": args.t,
            "weight_range": (args.wmin, args.wmax),
        }
        inst = instances.gen_budget(args.base_family, args.kind, params, args.seed)
    _write_output(instances.dumps_instance(inst), args.output)
    return EXIT_OK


def _check_solution_file(args) -> int:
    inst = instances.load_instance(args.input)
    g = instances.oriented_graph(inst)
    with open(args.solution, encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or not isinstance(obj.get("selected"), list):
        raise SchemaError("/selected", "solution file needs a selected array")
    sol = solvers.Solution(
        frozenset(obj["selected"]),
        obj.get("revenue", 0),
        solvers.Certificate(obj.get("algorithm", "unknown")),
    )
    ok, violations = budgets.check_feasible(sol, g, inst.constraints)
    for v in violations:
        print(f"violation: {v}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VIOLATION


def verify_instance(path: Path, oracle_cap: int, timings: bool = False) -> dict:
    """Run every applicable solver plus the oracles on one instance and
    check each claimed inequality. Returns a RunReport dict."""
    report: dict = {"instance": path.name, "ok": True, "violations": []}

    def violate(msg: str) -> None:
        report["ok"] = False
        report["violations"].append(msg)

    try:
        inst = instances.load_instance(path)
        g = instances.oriented_graph(inst)
    except (ValidationError, NotChordalError, CapacityError) as exc:
        violate(f"setup failed: {exc}")
        return report

    report["family"] = str(inst.metadata.get("family", "unknown"))
    report["n"] = g.n
    report["m"] = g.m
    algos: dict[str, dict] = {}
    report["algorithms"] = algos

    def run(name, fn):
        t0 = time.perf_counter()
        sol = fn()
        dt = time.perf_counter() - t0
        entry = {"revenue": sol.revenue, "selected": len(sol.selected)}
        if timings:
            entry["wall_ms"] = round(dt * 1000.0, 3)
        algos[name] = entry
        return sol

    table = None

    def run_opcost():
        nonlocal table
        sol, table = solvers.opcost(g)
        return sol

    op = run("opcost", run_opcost)
    lr = run("lropcost", lambda: solvers.lropcost(g))
    if op.selected != lr.selected:
        violate("opcost and lropcost selected different sets")
    if not solvers.verify_value_table(g, table):
        violate("value table fails recomputation")
    run("greedy", lambda: solvers.greedy(g, g.ordering))
    for name, sol in (("opcost", op), ("lropcost", lr)):
        ok, violations = budgets.check_feasible(sol, g, None)
        for v in violations:
            violate(f"{name}: {v}")

    cs = inst.constraints
    primary = op
    claimed_of_beta = lambda b: Fraction(b)
    if cs is not None:
        if cs.kind == "unweighted":
            bsol, _ = budgets.solve_unweighted(g, cs)
            cross = budgets.solve_unweighted_lr(g, cs)
            claimed_of_beta = lambda b: Fraction(b + 1)
        elif cs.kind == "overlapping":
            bsol = budgets.solve_overlapping(g, cs)
            cross = budgets.solve_overlapping_lr(g, cs)
            t = cs.overlap()
            claimed_of_beta = lambda b: Fraction(b + t)
        else:
            bsol = budgets.solve_weighted(g, cs, light_mode="lazy")
            cross = budgets.solve_weighted(g, cs, light_mode="direct")
            claimed_of_beta = lambda b: Fraction(2 * b + 3)
        algos[cs.kind] = {"revenue": bsol.revenue, "selected": len(bsol.selected)}
        if bsol.selected != cross.selected:
            violate(f"{cs.kind}: one-pass and local-ratio modes disagree")
        ok, violations = budgets.check_feasible(bsol, g, cs)
        for v in violations:
            violate(f"{cs.kind}: {v}")
        primary = bsol

    bound, method = instances.beta_bound_info(inst, g.ordering, g)
    if bound is not None:
        report["beta_bound"] = bound
        report["beta_bound_method"] = method

    if g.n <= oracle_cap:
        try:
            beta = beta_exact(g).beta_graph
        except CapacityError:
            beta = None
        if cs is None:
            opt = solvers.exact_mwis(g, node_cap=max(30, oracle_cap)).revenue
        else:
            opt, _ = budgets.exact_feasible(g, cs, node_cap=oracle_cap)
        report["oracle_revenue"] = opt
        if beta is not None:
            report["beta_exact"] = beta
            if bound is not None and beta > bound:
                violate(f"certified bound {bound} below exact beta {beta}")
            claimed = claimed_of_beta(beta)
            report["claimed_ratio"] = _ratio_str(claimed)
            if primary.revenue == 0:
                if opt > 0:
                    violate("approximation returned zero revenue against positive optimum")
                report["observed_ratio"] = "1"
            else:
                observed = Fraction(opt, primary.revenue)
                report["observed_ratio"] = _ratio_str(observed)
                if observed > claimed:
                    violate(f"observed ratio {observed} exceeds claimed {claimed}")
    return report


def _ratio_str(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def cmd_verify(args) -> int:
    if args.solution is not None:
        return _check_solution_file(args)
    root = Path(args.input)
    paths = sorted(root.glob("*.json")) if root.is_dir() else [root]
    if not paths:
        raise ValidationError(f"no instance files under {root}")
    any_bad = False
    for p in paths:
        report = verify_instance(p, args.oracle_cap, timings=args.timings)
        sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
        if not report["ok"]:
            any_bad = True
            for v in report["violations"]:
                print(f"{p.name}: {v}", file=sys.stderr)
    return EXIT_VIOLATION if any_bad else EXIT_OK


BENCH_FAMILIES = ("interval", "budget-unweighted", "budget-overlapping")


def _bench_instance(family: str, target: int, seed: int):
    # interval bids average ~1.5 conflicts each, so |V|+|E| lands near 2.5n
    n = max(10, int(target / 2.5))
    if family == "interval":
        inst = instances.gen_interval(n, (1, 1000), seed, include_object_graph=False)
    else:
        kind = "unweighted" if family == "budget-unweighted" else "overlapping"
        params = {"n": n, "group_size": 3, "k_max": 1, "t": 1, "include_object_graph": False}
        inst = instances.gen_budget("interval", kind, params, seed)
    g = build_bid_graph(inst.bids)
    g = orient(g, decreasing_weight_ordering(g))
    return inst, g


def _bench_solvers(family: str, inst):
    if family == "interval":
        return {
            "opcost": lambda g: solvers.opcost(g)[0],
            "lropcost": lambda g: solvers.lropcost(g),
        }
    if family == "budget-unweighted":
        return {"unweighted": lambda g, cs=inst.constraints: budgets.solve_unweighted(g, cs)[0]}
    return {"overlapping": lambda g, cs=inst.constraints: budgets.solve_overlapping(g, cs)}


def run_bench(family: str, sizes, seed: int = 0, repeats: int = 3, max_ratio: float = 3.0) -> dict:
    """Time the linear-time solvers at each target |V|+|E| and assert the
    per-element cost at the largest size is within ``max_ratio`` of the
    smallest. Each solver gets one untimed warmup (which also pays the
    one-off graph compilation); the reported time is the minimum over
    ``repeats`` runs. Returns the full measurement report."""
    if family not in BENCH_FAMILIES:
        raise ValidationError(f"unknown bench family {family!r}")
    rows = []
    for target in sizes:
        inst, g = _bench_instance(family, target, seed)
        fns = _bench_solvers(family, inst)
        del inst
        gc.collect()
        elements = g.n + g.m
        solvers_row = {}
        for name, fn in fns.items():
            fn(g)
            best = None
            for _ in range(max(1, repeats)):
                t0 = time.perf_counter()
                fn(g)
                dt = time.perf_counter() - t0
                best = dt if best is None else min(best, dt)
            solvers_row[name] = {
                "seconds": round(best, 6),
                "per_element_ns": round(best / elements * 1e9, 3),
            }
        rows.append({"target": target, "n": g.n, "m": g.m, "elements": elements, "solvers": solvers_row})
    smallest = min(rows, key=lambda r: r["elements"])
    largest = max(rows, key=lambda r: r["elements"])
    checks = {}
    ok = True
    for name in rows[0]["solvers"]:
        lo = smallest["solvers"][name]["per_element_ns"]
        hi = largest["solvers"][name]["per_element_ns"]
        ratio = hi / lo if lo > 0 else float("inf")
        passed = ratio <= max_ratio or largest is smallest
        checks[name] = {"cost_ratio": round(ratio, 3), "ok": passed}
        ok = ok and passed
    return {"family": family, "rows": rows, "checks": checks, "max_ratio": max_ratio, "ok": ok}


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    report = run_bench(args.family, sizes, args.seed, args.repeats)
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report["ok"] else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="auctol", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one algorithm on one instance")
    p.add_argument("--input", required=True)
    p.add_argument("--algo", choices=("opcost", "lropcost", "greedy", "exact"), default="opcost")
    p.add_argument("--constraints", choices=("auto", "ignore"), default="auto")
    p.add_argument("--cap", type=int, default=0, help="node cap for the exact solver")
    p.add_argument("--include-zero-value", action="store_true")
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("order", help="embed an ordering and its beta bound")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=("chordal", "tree-decomposition", "grid", "decreasing-weight"), required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_order)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument(
        "--family",
        choices=("interval", "interval-selection", "subtrees", "grid", "tight", "budget"),
        required=True,
    )
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--groups", type=int, default=4)
    p.add_argument("--per-group", dest="per_group", type=int, default=3)
    p.add_argument("--tree-size", dest="tree_size", type=int, default=10)
    p.add_argument("--dims", default="4x4")
    p.add_argument("--density-milli", dest="density_milli", type=int, default=1000)
    p.add_argument("--beta", type=int, default=3)
    p.add_argument("--epsilon-milli", dest="epsilon_milli", type=int, default=100)
    p.add_argument("--base-family", dest="base_family", default="interval")
    p.add_argument("--kind", choices=("unweighted", "overlapping", "weighted"), default="unweighted")
    p.add_argument("--group-size", dest="group_size", type=int, default=3)
    p.add_argument("--k-max", dest="k_max", type=int, default=2)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--wmin", type=int, default=1)
    p.add_argument("--wmax", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("verify", help="check solver guarantees over instances")
    p.add_argument("--input", required=True, help="instance file or directory")
    p.add_argument("--oracle-cap", dest="oracle_cap", type=int, default=20)
    p.add_argument("--solution", default=None, help="check one solution file instead")
    p.add_argument("--timings", action="store_true", help="include wall times in reports")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="per-element cost flatness check")
    p.add_argument("--family", choices=BENCH_FAMILIES, default="interval")
    p.add_argument("--sizes", default="10000,100000,1000000")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=2)
    p.set_defaults(fn=cmd_bench)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NotChordalError as exc:
        v, a, b = exc.witness
        print(f"not chordal: witness node {v} with non-adjacent later neighbors {a}, {b}", file=sys.stderr)
        return EXIT_NOT_CHORDAL
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main(argv=None) -> None:
    raise SystemExit(run(argv))


if __name__ == "__main__":
    main()
