"""Command-line SAT solver with SAT-competition I/O, backed by pysat.

    exgraph-sat [--solver cadical195] [--seed N] FILE.cnf

Prints ``s SATISFIABLE`` / ``s UNSATISFIABLE`` and ``v`` lines, exits with 10
or 20. A seed shuffles clause and literal order, which is the only way to vary
the search of the bundled backends.
"""

from __future__ import annotations

import argparse
import random
import sys


def read_clauses(path: str) -> tuple[int, list[list[int]]]:
    num_vars = 0
    clauses, cur = [], []
    with open(path) as fh:
        for line in fh:
            if not line or line[0] in "c%":
                continue
            if line[0] == "p":
                num_vars = int(line.split()[2])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit:
                    cur.append(lit)
                else:
                    clauses.append(cur)
                    cur = []
    if cur:
        clauses.append(cur)
    return num_vars, clauses


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="exgraph-sat", description=__doc__.splitlines()[0])
    ap.add_argument("cnf")
    ap.add_argument("--solver", default="cadical195")
    ap.add_argument("--seed", type=int, default=None)
    args = ap.parse_args(argv)

    from pysat.solvers import Solver

    num_vars, clauses = read_clauses(args.cnf)
    if args.seed is not None:
        rng = random.Random(args.seed)
        rng.shuffle(clauses)
        for c in clauses:
            rng.shuffle(c)
    with Solver(name=args.solver, bootstrap_with=clauses) as s:
        sat = s.solve()
        model = s.get_model() if sat else None
    out = sys.stdout
    if not sat:
        out.write("s UNSATISFIABLE\n")
        out.flush()
        return 20
    out.write("s SATISFIABLE\n")
    seen = {abs(x) for x in model}
    lits = list(model) + [-v for v in range(1, num_vars + 1) if v not in seen]
    for k in range(0, len(lits), 20):
        out.write("v " + " ".join(map(str, lits[k:k + 20])) + "\n")
    out.write("v 0\n")
    out.flush()
    return 10


if __name__ == "__main__":
    sys.exit(main())
