"""Repeated solver runs and median timing tables.

A cell is one (n, mode) instance. Satisfiable instances run ``cfg.repeats``
times and unsatisfiable ones a fixed small count; the table shows the median,
or ``---`` when any run hit the time limit.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .encoder import ProblemSpec, decode_model, encode
from .extremal import validate_witness
from .solver import SAT, UNKNOWN, SolverConfig, run_solver

TIMEOUT_MARK = "---"
UNSAT_RUNS = 5


@dataclass
class BenchCell:
    spec: ProblemSpec
    times: list[float] = field(default_factory=list)
    statuses: list[str] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def status(self) -> str:
        if self.error or not self.statuses or UNKNOWN in self.statuses:
            return UNKNOWN
        return self.statuses[0]

    @property
    def median(self) -> Optional[float]:
        if self.status == UNKNOWN:
            return None
        return statistics.median(self.times)

    def text(self) -> str:
        med = self.median
        return TIMEOUT_MARK if med is None else f"{med:.2f}"


def run_cell(spec: ProblemSpec, cfg: SolverConfig, unsat_runs: int = UNSAT_RUNS) -> BenchCell:
    """Solve one instance repeatedly; the run count follows the first answer."""
    cell = BenchCell(spec)
    enc = encode(spec)
    runs = 1
    k = 0
    while k < runs:
        try:
            out = run_solver(enc.formula, cfg, seed=k)
            if out.status == SAT:
                validate_witness(decode_model(enc.formula, out.model).graph, spec)
        except Exception as exc:  # reported in the cell, the table is still produced
            cell.error = f"{type(exc).__name__}: {exc}"
            break
        cell.times.append(out.wall_seconds)
        cell.statuses.append(out.status)
        if out.status == UNKNOWN:
            break  # further runs cannot turn the cell into a number
        if k == 0:
            runs = cfg.repeats if out.status == SAT else unsat_runs
        elif out.status != cell.statuses[0]:
            cell.error = "runs disagree on satisfiability"
            break
        k += 1
    return cell


@dataclass
class BenchTable:
    title: str
    modes: tuple[str, ...]
    rows: dict[int, dict[str, BenchCell]] = field(default_factory=dict)

    def cell(self, n: int, mode: str) -> BenchCell:
        return self.rows[n][mode]

    def markdown(self) -> str:
        head = ["n"] + list(self.modes)
        out = [f"**{self.title}**", "", "| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        for n in sorted(self.rows):
            out.append("| " + " | ".join([str(n)] + [self.rows[n][m].text() for m in self.modes]) + " |")
        return "\n".join(out) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["n", "m", "mode", "status", "median", "runs", "error"])
        for n in sorted(self.rows):
            for mode in self.modes:
                c = self.rows[n][mode]
                w.writerow([n, c.spec.m, mode, c.status, "" if c.median is None else f"{c.median:.4f}",
                            " ".join(f"{t:.4f}" for t in c.times), c.error or ""])
        return buf.getvalue()


def bench(specs: Iterable[ProblemSpec], cfg: Optional[SolverConfig] = None,
          unsat_runs: int = UNSAT_RUNS, title: str = "") -> BenchTable:
    """Run every spec; rows are keyed by n and columns by SBP mode."""
    cfg = cfg or SolverConfig()
    specs = list(specs)
    modes = tuple(dict.fromkeys(s.sbp for s in specs))
    table = BenchTable(title, modes)
    for spec in specs:
        table.rows.setdefault(spec.n, {})[spec.sbp] = run_cell(spec, cfg, unsat_runs)
    return table


def grid(ns: Iterable[int], forbid, modes: Iterable[str], ex: dict[int, int], unsat: bool,
         bounds: str = "none", cycle_encoding: str = "auxiliary") -> list[ProblemSpec]:
    """Specs for m = ex(n) (satisfiable) or m = ex(n)+1 (unsatisfiable)."""
    specs = []
    for n in ns:
        m = ex[n] + (1 if unsat else 0)
        for mode in modes:
            specs.append(ProblemSpec(n, m, forbid, cycle_encoding, mode,
                                     garnick=bounds == "garnick", clapham=bounds == "clapham",
                                     ex_prev=ex.get(n - 1) if bounds == "garnick" else None))
    return specs
