"""Extremal numbers ex(n; C3, C4) and ex(n; C4) by a SAT sweep over m.

The sweep starts at m = ex(n-1) (deleting a vertex keeps a graph free of the
forbidden cycles, so ex is monotone in n) and climbs until the first UNSAT.
Every step but the last produces a witness; the last certifies the value.

With a symmetry-breaking predicate the encoding only admits connected graphs.
That loses nothing here: an extremal graph for forbidden cycles is connected
(a bridge between two components adds an edge and no cycle), and deleting
non-bridge edges from it gives connected witnesses for every m between n-1
and ex(n). Below n-1 edges the sweep falls back to no symmetry breaking.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from typing import Optional

from .encoder import ProblemSpec, decode_model, encode, normalize_sbp, parse_forbid
from .graph import Graph, degrees, edge_count, format_graph, has_forbidden_cycle, is_connected
from .sbp import checker
from .solver import SAT, UNSAT, SolverConfig, run_solver

BOUNDS = ("auto", "none", "garnick", "clapham")


class WitnessError(RuntimeError):
    """A solver model failed re-validation against the constraints it was asked for."""


def forbid_label(forbid) -> str:
    return ",".join(str(k) for k in sorted(forbid)) or "-"


def jukna_upper_bound(n: int) -> int:
    """floor(n/4 * (1 + sqrt(4n - 3))), evaluated in exact integer arithmetic."""
    if n < 1:
        raise ValueError("n must be >= 1")
    # largest q with 4q - n <= n*sqrt(4n-3)
    rhs_sq = n * n * (4 * n - 3)
    q = (n + math.isqrt(rhs_sq)) // 4
    while (4 * (q + 1) - n) <= 0 or (4 * (q + 1) - n) ** 2 <= rhs_sq:
        q += 1
    while (4 * q - n) > 0 and (4 * q - n) ** 2 > rhs_sq:
        q -= 1
    return q


def resolve_bounds(forbid, bounds: str) -> str:
    forbid = parse_forbid(forbid)
    if bounds not in BOUNDS:
        raise ValueError(f"unknown bounds {bounds!r}; expected one of {BOUNDS}")
    if bounds == "auto":
        if forbid == {3, 4}:
            return "garnick"
        if 4 in forbid:
            return "clapham"
        return "none"
    return bounds


@dataclass
class StepRecord:
    m: int
    sbp: str
    status: str
    seconds: float


@dataclass
class ExResult:
    n: int
    forbid: frozenset
    ex_value: Optional[int]
    witness: Optional[Graph]
    unsat_confirmed: bool
    timings: list[StepRecord] = field(default_factory=list)
    sbp: str = "none"
    bounds: str = "none"

    @property
    def seconds(self) -> float:
        return sum(s.seconds for s in self.timings)

    @property
    def complete(self) -> bool:
        return self.unsat_confirmed and self.ex_value is not None


def validate_witness(g: Graph, spec: ProblemSpec, decoded=None) -> None:
    """Re-check a solver model with the graph and predicate code; raise on any mismatch."""
    if edge_count(g) != spec.m:
        raise WitnessError(f"witness has {edge_count(g)} edges, expected {spec.m}")
    for k in spec.forbid:
        if has_forbidden_cycle(g, k):
            raise WitnessError(f"witness contains a {k}-cycle")
    if spec.sbp != "none":
        if not is_connected(g):
            raise WitnessError("symmetry-broken witness is disconnected")
        if not checker(spec.sbp)(g):
            raise WitnessError(f"witness violates the {spec.sbp} predicate")
    if decoded is not None:
        degs = tuple(degrees(g))
        if decoded.degrees != degs:
            raise WitnessError(f"decoded degrees {decoded.degrees} != {degs}")
        if decoded.delta != min(degs) or decoded.deg_max != max(degs):
            raise WitnessError("decoded min/max degree disagree with the witness")


class Ledger:
    """CSV of results ``n,forbid,ex,confirmed,seconds``; doubles as a cache of
    known ex values for bootstrapping."""

    HEADER = ["n", "forbid", "ex", "confirmed", "seconds"]

    def __init__(self, path: str):
        self.path = path

    def known(self, forbid) -> dict[int, int]:
        label = forbid_label(forbid)
        out: dict[int, int] = {}
        if not os.path.exists(self.path):
            return out
        with open(self.path, newline="") as fh:
            for row in csv.DictReader(fh):
                if row["forbid"] == label and row["confirmed"].lower() == "true" and row["ex"]:
                    out[int(row["n"])] = int(row["ex"])
        return out

    def append(self, res: ExResult) -> None:
        new = not os.path.exists(self.path) or os.path.getsize(self.path) == 0
        with open(self.path, "a", newline="") as fh:
            w = csv.writer(fh)
            if new:
                w.writerow(self.HEADER)
            w.writerow([res.n, forbid_label(res.forbid),
                        "" if res.ex_value is None else res.ex_value,
                        str(res.unsat_confirmed).lower(), f"{res.seconds:.3f}"])


def find_ex(n: int, forbid, sbp: str = "bfs-star", bounds: str = "auto",
            solver: Optional[SolverConfig] = None, cycle_encoding: str = "auxiliary",
            known: Optional[dict[int, int]] = None, ledger: Optional[Ledger] = None) -> ExResult:
    """Compute ex(n; forbid) by an ascending SAT sweep.

    ``known`` maps smaller n to already certified values and is extended in
    place; missing values are computed recursively with the same settings.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    forbid = parse_forbid(forbid)
    sbp = normalize_sbp(sbp)
    bounds = resolve_bounds(forbid, bounds)
    solver = solver or SolverConfig()
    if known is None:
        known = ledger.known(forbid) if ledger else {}

    if n == 1:
        prev = 0
    else:
        if n - 1 not in known:
            sub = find_ex(n - 1, forbid, sbp, bounds, solver, cycle_encoding, known, ledger)
            if not sub.complete:
                return ExResult(n, forbid, None, None, False, [], sbp, bounds)
        prev = known[n - 1]

    result = ExResult(n, forbid, None, None, False, [], sbp, bounds)
    top = n * (n - 1) // 2
    m = prev
    while True:
        if m > top:
            result.unsat_confirmed = True  # no simple graph has more edges
            break
        mode = sbp if m >= n - 1 else "none"
        spec = ProblemSpec(n, m, forbid, cycle_encoding, mode,
                           garnick=bounds == "garnick", clapham=bounds == "clapham",
                           ex_prev=prev if bounds == "garnick" else None)
        enc = encode(spec)
        out = run_solver(enc.formula, solver)
        result.timings.append(StepRecord(m, mode, out.status, out.wall_seconds))
        if out.status == SAT:
            decoded = decode_model(enc.formula, out.model)
            validate_witness(decoded.graph, spec, decoded)
            result.ex_value, result.witness = m, decoded.graph
            m += 1
        elif out.status == UNSAT:
            result.unsat_confirmed = True
            break
        else:
            break
    if result.ex_value is None and result.unsat_confirmed:
        raise WitnessError(f"no graph with ex({n - 1}) = {prev} edges was found on {n} vertices")
    if result.complete:
        if 4 in forbid and result.ex_value > jukna_upper_bound(n):
            raise WitnessError(f"ex={result.ex_value} exceeds the C4 upper bound {jukna_upper_bound(n)}")
        known[n] = result.ex_value
    if ledger is not None:
        ledger.append(result)
    return result


def write_witness(res: ExResult, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(res.witness))
