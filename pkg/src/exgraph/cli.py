"""exgraph command line.

    exgraph encode --n 10 --m 16 --forbid 3,4 --sbp bfs-star --out f.cnf
    exgraph solve --n 10 --m 15 --forbid 3,4 --sbp bfs-star --garnick --ex-prev 12
    exgraph check --predicate bfs* --certificate graph.txt
    exgraph ex --n 10 --forbid 3,4 --sbp bfs-star --bounds garnick
    exgraph verify-sbp --max-n 6
    exgraph brute-ex --n 7 --forbid 4
    exgraph cross-check --n 5 --mode bfs-star
    exgraph bench --n 10-12 --forbid 3,4 --case unsat --modes none,bfs,bfs+,bfs-star

Graphs are read and written in the "n m" + edge-list format (an adjacency
matrix is also accepted on input). Vertex labels are 1-based everywhere.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .bench import UNSAT_RUNS, bench, grid
from .cnf import read_dimacs, write_dimacs
from .encoder import CYCLE_ENCODINGS, SBP_MODES, ProblemSpec, decode_model, encode, parse_forbid
from .extremal import BOUNDS, Ledger, find_ex, forbid_label, resolve_bounds, validate_witness, write_witness
from .graph import format_graph, parse_graph
from .oracle import (SOUND_PREDICATES, brute_force_ex, cross_validate_encoding, format_report_markdown,
                     mixed_sampler, verify_sbp_soundness)
from .sbp import PREDICATES, certificate, checker
from .solver import EMBEDDED, SAT, SolverConfig, run_solver


def _int_list(text: str) -> list[int]:
    """'10-13' or '10,12,13'."""
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def _read_graph(path: str):
    if path == "-":
        return parse_graph(sys.stdin.read())
    with open(path) as fh:
        return parse_graph(fh.read())


def _solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver", default=None,
                   help=f"solver command (default: $EXGRAPH_SOLVER or the bundled wrapper; '{EMBEDDED}' for the in-process one)")
    p.add_argument("--time-limit", type=float, default=3600.0, help="seconds per solver run")
    p.add_argument("--repeats", type=int, default=1, help="runs per satisfiable instance")
    p.add_argument("--seed-policy", choices=("none", "per-repeat"), default="none")


def _solver_config(args) -> SolverConfig:
    return SolverConfig(args.solver, args.time_limit, args.repeats, args.seed_policy)


def _spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--forbid", default="3,4", help="comma list from {3,4}")
    p.add_argument("--sbp", default="none", help=f"one of {', '.join(SBP_MODES)} (bfs* accepted)")
    p.add_argument("--cycle-enc", default="auxiliary", help=f"one of {', '.join(CYCLE_ENCODINGS)} (aux accepted)")
    p.add_argument("--garnick", action="store_true", help="degree bounds for C3/C4-free extremal graphs")
    p.add_argument("--clapham", action="store_true", help="degree bounds for C4-free extremal graphs")
    p.add_argument("--ex-prev", type=int, default=None, help="ex(n-1), needed by --garnick")
    p.add_argument("--fix", default=None, metavar="GRAPH", help="pin the adjacency to this graph file")


def _spec(args) -> ProblemSpec:
    return ProblemSpec(args.n, args.m, parse_forbid(args.forbid), args.cycle_enc, args.sbp,
                       args.garnick, args.clapham, args.ex_prev)


def cmd_encode(args) -> int:
    enc = encode(_spec(args), fixed=_read_graph(args.fix) if args.fix else None)
    if args.out in (None, "-"):
        write_dimacs(enc.formula, sys.stdout)
    else:
        with open(args.out, "w") as fh:
            write_dimacs(enc.formula, fh)
        print(f"wrote {args.out}: {enc.formula.num_vars} vars, {enc.formula.num_clauses} clauses",
              file=sys.stderr)
    return 0


def cmd_solve(args) -> int:
    if args.cnf:
        with open(args.cnf) as fh:
            formula = read_dimacs(fh.read())
        spec = None
    else:
        if args.n is None or args.m is None:
            print("solve needs either a CNF file or --n and --m", file=sys.stderr)
            return 2
        spec = _spec(args)
        formula = encode(spec, fixed=_read_graph(args.fix) if args.fix else None).formula
    out = run_solver(formula, _solver_config(args))
    print(f"status: {out.status}")
    print(f"seconds: {out.wall_seconds:.3f}")
    if out.status == SAT and formula.meta.get("n"):
        decoded = decode_model(formula, out.model)
        if spec is not None:
            validate_witness(decoded.graph, spec, decoded)
        sys.stdout.write(format_graph(decoded.graph))
        if args.witness:
            with open(args.witness, "w") as fh:
                fh.write(format_graph(decoded.graph))
    return {"sat": 10, "unsat": 20}.get(out.status, 0)


def cmd_check(args) -> int:
    g = _read_graph(args.graph)
    ok = checker(args.predicate)(g)
    print("true" if ok else "false")
    if args.certificate:
        cert = certificate(g)
        if cert is None:
            print("no BFS certificate: some vertex after 1 has no smaller neighbour")
        else:
            print(cert.format())
    return 0


def cmd_ex(args) -> int:
    forbid = parse_forbid(args.forbid)
    ledger = Ledger(args.ledger)
    res = find_ex(args.n, forbid, args.sbp, args.bounds, _solver_config(args), args.cycle_enc,
                  ledger=ledger)
    for step in res.timings:
        print(f"  m={step.m:<3} sbp={step.sbp:<8} {step.status:<7} {step.seconds:8.3f}s", file=sys.stderr)
    if res.ex_value is None:
        print(f"n={args.n} forbid={forbid_label(forbid)}: no result (solver gave up)")
        return 1
    witness = args.witness or f"ex_n{args.n}_c{forbid_label(forbid).replace(',', '')}.txt"
    write_witness(res, witness)
    state = "confirmed" if res.unsat_confirmed else "lower bound only"
    print(f"ex({args.n}; {forbid_label(forbid)}) = {res.ex_value} [{state}] "
          f"bounds={res.bounds} sbp={res.sbp} {res.seconds:.2f}s witness={witness}")
    return 0 if res.complete else 1


def cmd_verify_sbp(args) -> int:
    preds = tuple(args.predicate) if args.predicate else PREDICATES
    lines = ["| n | classes | labeled | " + " | ".join(f"violations {p}" for p in preds) + " |",
             "|" + "---|" * (3 + len(preds))]
    csv_rows = ["n,class,predicate,allowed"]
    failed = False
    for n in range(args.min_n, args.max_n + 1):
        rep = verify_sbp_soundness(n, preds)
        if rep.orbit_sum() != rep.labeled_count:
            print(f"n={n}: orbit sizes sum to {rep.orbit_sum()}, expected {rep.labeled_count}", file=sys.stderr)
            failed = True
        lines.append(f"| {n} | {rep.class_count} | {rep.labeled_count} | "
                     + " | ".join(str(len(rep.violations[p])) for p in preds) + " |")
        failed |= any(rep.violations[p] for p in preds if p in SOUND_PREDICATES)
        for g, counts in rep.per_class.items():
            code = " ".join(f"{i}-{j}" for i, j in g.sorted_edges())
            csv_rows.extend(f"{n},{code},{p},{counts[p]}" for p in preds)
        if args.classes:
            print(f"\nn = {n}\n")
            print(format_report_markdown(rep))
    print("\n".join(lines))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("\n".join(csv_rows) + "\n")
    return 1 if failed else 0


def cmd_brute_ex(args) -> int:
    res = brute_force_ex(args.n, parse_forbid(args.forbid))
    print(f"ex({args.n}; {forbid_label(res.forbid)}) = {res.ex_value}")
    print(f"connected extremal graph: {'yes' if res.connected_witness else 'no'}")
    sys.stdout.write(format_graph(res.witness))
    return 0


def cmd_cross_check(args) -> int:
    modes = [m for m in SBP_MODES if m != "none"] if args.mode == "all" else [args.mode]
    failed = False
    print("| n | mode | graphs | predicate true | disagreements |")
    print("|---|---|---|---|---|")
    for mode in modes:
        if args.samples:
            cfg = None if args.solver == EMBEDDED else _solver_config(args)
            rep = cross_validate_encoding(args.n, mode, sampler=mixed_sampler(args.n, args.seed),
                                          samples=args.samples, solver=cfg)
        else:
            rep = cross_validate_encoding(args.n, mode)
        print(f"| {args.n} | {mode} | {rep.checked} | {rep.positives} | {len(rep.disagreements)} |")
        for g, want, got in rep.disagreements[:5]:
            print(f"  disagreement: predicate={want} cnf={got} edges={g.sorted_edges()}", file=sys.stderr)
        failed |= not rep.ok
    return 1 if failed else 0


def cmd_bench(args) -> int:
    forbid = parse_forbid(args.forbid)
    ns = _int_list(args.n)
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    cfg = _solver_config(args)
    ledger = Ledger(args.ledger)
    known = ledger.known(forbid)
    bounds = resolve_bounds(forbid, args.bounds)
    need = set(ns) | ({n - 1 for n in ns} if bounds == "garnick" else set())
    for n in sorted(need):
        if n >= 1 and n not in known:
            find_ex(n, forbid, "bfs-star", "auto", SolverConfig(args.solver), known=known, ledger=ledger)
    specs = grid(ns, forbid, modes, known, args.case == "unsat", bounds)
    title = f"{args.case.upper()} case, forbid {forbid_label(forbid)}, bounds {bounds}, m = ex" + \
        ("+1" if args.case == "unsat" else "")
    table = bench(specs, cfg, args.unsat_runs, title)
    print(table.markdown())
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(table.csv())
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="exgraph", description="BFS symmetry breaking for SAT-based graph search")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="write the DIMACS CNF of one instance")
    _spec_args(p)
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="encode and solve one instance, print the decoded graph")
    p.add_argument("cnf", nargs="?", default=None, help="DIMACS file written by 'encode'")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--forbid", default="3,4")
    p.add_argument("--sbp", default="none")
    p.add_argument("--cycle-enc", default="auxiliary")
    p.add_argument("--garnick", action="store_true")
    p.add_argument("--clapham", action="store_true")
    p.add_argument("--ex-prev", type=int, default=None)
    p.add_argument("--fix", default=None, metavar="GRAPH")
    p.add_argument("--witness", default=None, help="also write the decoded graph here")
    _solver_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="evaluate a predicate on a graph file")
    p.add_argument("graph", help="graph file, '-' for stdin")
    p.add_argument("--predicate", choices=list(PREDICATES) + ["bfs-star"], default="bfs*")
    p.add_argument("--certificate", action="store_true", help="print the p/deg/w arrays")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("ex", help="compute ex(n; forbid) by an ascending SAT sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--forbid", default="3,4")
    p.add_argument("--sbp", default="bfs-star")
    p.add_argument("--bounds", choices=BOUNDS, default="auto")
    p.add_argument("--cycle-enc", default="auxiliary")
    p.add_argument("--ledger", default="ex_ledger.csv", help="CSV of results, also read as a cache")
    p.add_argument("--witness", default=None, help="witness graph file")
    _solver_args(p)
    p.set_defaults(func=cmd_ex)

    p = sub.add_parser("verify-sbp", help="exhaustive soundness check of the predicates")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--min-n", type=int, default=1)
    p.add_argument("--predicate", action="append", choices=list(PREDICATES), default=None)
    p.add_argument("--classes", action="store_true", help="also print per-class counts")
    p.add_argument("--csv", default=None, help="per-class counts as CSV")
    p.set_defaults(func=cmd_verify_sbp)

    p = sub.add_parser("brute-ex", help="ex(n; forbid) by exhaustive scan (n <= 7)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--forbid", default="3,4")
    p.set_defaults(func=cmd_brute_ex)

    p = sub.add_parser("cross-check", help="compare the CNF of a mode with its semantic predicate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", default="all", help="bfs, bfs+, bfs-star or all")
    p.add_argument("--samples", type=int, default=0, help="random connected graphs instead of all graphs")
    p.add_argument("--seed", type=int, default=0)
    _solver_args(p)
    p.set_defaults(func=cmd_cross_check)

    p = sub.add_parser("bench", help="median solver times over n and SBP modes")
    p.add_argument("--n", default="10-12", help="e.g. 10-13 or 10,12")
    p.add_argument("--forbid", default="3,4")
    p.add_argument("--case", choices=("sat", "unsat"), default="unsat")
    p.add_argument("--modes", default="none,bfs,bfs+,bfs-star")
    p.add_argument("--bounds", choices=BOUNDS, default="none")
    p.add_argument("--unsat-runs", type=int, default=UNSAT_RUNS)
    p.add_argument("--ledger", default="ex_ledger.csv", help="source of ex values (filled if missing)")
    p.add_argument("--csv", default=None, help="raw timings as CSV")
    _solver_args(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
