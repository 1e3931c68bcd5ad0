"""Exhaustive ground truth for small graphs.

Everything here is a plain scan over all 2^C(n,2) labeled graphs (masks in
increasing order, bit k = k-th pair in (1,2),(1,3),... order). Nothing is
clever on purpose: these routines are what the encoder and the predicates are
checked against.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from . import dpll
from .encoder import ProblemSpec, encode, normalize_sbp, parse_forbid
from .graph import (CapacityError, Graph, _relabel_weights, all_pairs, apply_permutation,
                    canonical_form, edge_count, is_connected, pair_index)
from .sbp import PREDICATES, _bfs_order, _order_to_perm, bfs_star_renumber, checker
from .solver import SAT, UNKNOWN, UNSAT, SolverConfig, run_solver

MAX_ORACLE_N = 7
SOUND_PREDICATES = ("bfs", "bfs+", "bfs*")
MODE_PREDICATE = {"bfs": "bfs", "bfs+": "bfs+", "bfs-star": "bfs*"}


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_ORACLE_N:
        raise CapacityError(f"exhaustive enumeration is limited to n <= {MAX_ORACLE_N}")


def enumerate_graphs(n: int, connected_only: bool = False) -> Iterator[Graph]:
    """Every labeled graph on 1..n once, in increasing mask order."""
    _check_n(n)
    for mask in range(1 << (n * (n - 1) // 2)):
        g = Graph.from_mask(n, mask)
        if not connected_only or is_connected(g):
            yield g


# -- Def. 1 by brute force ------------------------------------------------------

def is_bfs_enumerated_by_traversal(g: Graph) -> bool:
    """Does some BFS traversal visit the vertices in label order 1, 2, ..., n?

    Tries every order in which a dequeued vertex may enqueue its
    undiscovered neighbours, pruning as soon as the visit order stops
    matching the labels.
    """
    n = g.n

    def extend(order: list[int], seen: set[int], head: int) -> bool:
        if head == len(order):
            return len(order) == n
        u = order[head]
        fresh = [v for v in g.neighbors(u) if v not in seen]
        for arrangement in itertools.permutations(fresh):
            if all(v == len(order) + 1 + k for k, v in enumerate(arrangement)):
                if extend(order + list(arrangement), seen | set(arrangement), head + 1):
                    return True
        return False

    # the first visited vertex gets label 1, so only vertex 1 can be the root
    return extend([1], {1}, 0)


# -- isomorphism classes --------------------------------------------------------

@dataclass
class IsoClassReport:
    n: int
    predicates: tuple[str, ...]
    class_count: int = 0
    labeled_count: int = 0
    per_class: dict[Graph, dict[str, int]] = field(default_factory=dict)
    automorphisms: dict[Graph, int] = field(default_factory=dict)
    violations: dict[str, list[Graph]] = field(default_factory=dict)

    def counts(self, g: Graph) -> dict[str, int]:
        return self.per_class[canonical_form(g)]

    def orbit_sum(self) -> int:
        """Sum of n!/|Aut| over classes; equals labeled_count when consistent."""
        f = math.factorial(self.n)
        return sum(f // a for a in self.automorphisms.values())

    @property
    def sound(self) -> bool:
        return not any(self.violations.get(p) for p in SOUND_PREDICATES)


def _reverse_bits(mask: int, width: int) -> int:
    return int(format(mask, f"0{width}b")[::-1], 2) if width else 0


def _scan_shard(n: int, lo: int, hi: int, predicates: tuple[str, ...]):
    """Per-class predicate counts for connected graphs with mask in [lo, hi)."""
    npairs = n * (n - 1) // 2
    checks = [checker(p) for p in predicates]
    if n > 1:
        _, table = _relabel_weights(n)
    class_of: dict[int, int] = {}
    counts: dict[int, list[int]] = {}
    for mask in range(lo, hi):
        g = Graph.from_mask(n, mask)
        if not is_connected(g):
            continue
        code = _reverse_bits(mask, npairs)
        key = class_of.get(code)
        if key is None:
            if n > 1:
                cols = [k for k in range(npairs) if mask >> k & 1]
                orbit = set(table[:, cols].sum(axis=1).tolist())
            else:
                orbit = {0}
            key = min(orbit)
            for c in orbit:
                class_of[c] = key
            counts[key] = [0] * (len(checks) + 1)
        row = counts[key]
        row[0] += 1
        for t, check in enumerate(checks, start=1):
            if check(g):
                row[t] += 1
    return counts


def _graph_from_code(n: int, code: int) -> Graph:
    return Graph.from_mask(n, _reverse_bits(code, n * (n - 1) // 2))


def _jobs() -> int:
    try:
        return max(1, int(os.environ.get("EXGRAPH_JOBS", "1")))
    except ValueError:
        return 1


def verify_sbp_soundness(n: int, predicates: Iterable[str] = PREDICATES,
                         jobs: Optional[int] = None) -> IsoClassReport:
    """Count, for every connected isomorphism class on n vertices, how many of
    its labelings each predicate admits. Classes with zero admitted labelings
    are listed under ``violations``."""
    _check_n(n)
    predicates = tuple("bfs*" if p == "bfs-star" else p for p in predicates)
    for p in predicates:
        checker(p)
    total = 1 << (n * (n - 1) // 2)
    jobs = jobs or _jobs()
    shards = max(1, min(jobs * 4, total // 1024 or 1))
    bounds = [(total * s // shards, total * (s + 1) // shards) for s in range(shards)]
    merged: dict[int, list[int]] = {}
    if jobs > 1 and shards > 1:
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_scan_shard, *zip(*[(n, lo, hi, predicates) for lo, hi in bounds])))
    else:
        parts = [_scan_shard(n, lo, hi, predicates) for lo, hi in bounds]
    for part in parts:
        for key, row in part.items():
            acc = merged.setdefault(key, [0] * len(row))
            for t, x in enumerate(row):
                acc[t] += x

    report = IsoClassReport(n, predicates)
    report.violations = {p: [] for p in predicates}
    if n > 1:
        _, table = _relabel_weights(n)
    for key in sorted(merged):
        row = merged[key]
        g = _graph_from_code(n, key)
        report.per_class[g] = dict(zip(predicates, row[1:]))
        report.labeled_count += row[0]
        if n > 1 and g.edges:
            cols = [pair_index(n, i, j) for i, j in g.edges]
            report.automorphisms[g] = int((table[:, cols].sum(axis=1) == key).sum())
        else:
            report.automorphisms[g] = math.factorial(n)
        for p, c in zip(predicates, row[1:]):
            if c == 0:
                report.violations[p].append(g)
    report.class_count = len(report.per_class)
    return report


def format_report_markdown(report: IsoClassReport) -> str:
    head = ["class", "edges", "|Aut|"] + list(report.predicates)
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for g, counts in report.per_class.items():
        edges = " ".join(f"{i}-{j}" for i, j in g.sorted_edges()) or "(none)"
        cells = [edges, str(edge_count(g)), str(report.automorphisms[g])]
        cells += [str(counts[p]) for p in report.predicates]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


# -- brute-force extremal numbers ------------------------------------------------

@dataclass
class BruteEx:
    n: int
    forbid: frozenset
    ex_value: int
    witness: Graph
    connected_witness: bool  # some connected graph attains ex_value


def _cycles(n: int, k: int) -> list[list[int]]:
    """Pair-index lists of all k-cycles (as edge sets) on 1..n, found from
    ordered vertex tuples."""
    seen = set()
    out = []
    for tup in itertools.permutations(range(1, n + 1), k):
        edges = frozenset(tuple(sorted((tup[t], tup[(t + 1) % k]))) for t in range(k))
        if edges not in seen:
            seen.add(edges)
            out.append([pair_index(n, i, j) for i, j in edges])
    return out


def brute_force_ex(n: int, forbid) -> BruteEx:
    """Maximum edge count over all graphs on n vertices without the forbidden
    cycles, by scanning every mask (vectorised)."""
    import numpy as np

    _check_n(n)
    forbid = parse_forbid(forbid)
    npairs = n * (n - 1) // 2
    masks = np.arange(1 << npairs, dtype=np.uint32)
    bits = [((masks >> k) & 1).astype(bool) for k in range(npairs)]
    ok = np.ones(masks.shape, dtype=bool)
    for k in sorted(forbid):
        for cyc in _cycles(n, k):
            hit = bits[cyc[0]].copy()
            for c in cyc[1:]:
                hit &= bits[c]
            ok &= ~hit
    size = np.zeros(masks.shape, dtype=np.uint8)
    for b in bits:
        size += b
    nbr = [np.zeros(masks.shape, dtype=np.uint16) for _ in range(n)]
    for k, (i, j) in enumerate(all_pairs(n)):
        nbr[i - 1] |= bits[k].astype(np.uint16) << (j - 1)
        nbr[j - 1] |= bits[k].astype(np.uint16) << (i - 1)
    reach = np.ones(masks.shape, dtype=np.uint16)
    for _ in range(n):
        for v in range(n):
            reach |= np.where((reach >> v) & 1, nbr[v], 0).astype(np.uint16)
    connected = reach == (1 << n) - 1

    free_sizes = np.where(ok, size.astype(np.int16), -1)
    best = int(free_sizes.max())
    at_best = ok & (size == best)
    witness = Graph.from_mask(n, int(np.flatnonzero(at_best)[0]))
    return BruteEx(n, forbid, best, witness, bool((at_best & connected).any()))


# -- encoder cross-validation ---------------------------------------------------

@dataclass
class CrossCheckReport:
    n: int
    mode: str
    checked: int = 0
    positives: int = 0
    disagreements: list[tuple[Graph, bool, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def random_connected_graph(n: int, rng: random.Random, density: Optional[float] = None) -> Graph:
    """Random spanning tree plus independent extra edges, randomly labeled."""
    density = rng.uniform(0.05, 0.6) if density is None else density
    edges = set()
    for v in range(2, n + 1):
        edges.add((rng.randrange(1, v), v))
    for i, j in all_pairs(n):
        if (i, j) not in edges and rng.random() < density:
            edges.add((i, j))
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return apply_permutation(Graph(n, edges), perm)


def bfs_renumber(g: Graph, root: int, rng: Optional[random.Random] = None) -> Graph:
    """Relabel connected ``g`` in the visit order of a BFS from ``root``,
    discovering siblings in random (or label) order."""
    keys = {v: (rng.random() if rng else v) for v in range(1, g.n + 1)}
    return apply_permutation(g, _order_to_perm(_bfs_order(g, root, keys.__getitem__)))


def mixed_sampler(n: int, seed: int = 0) -> Callable[[], Graph]:
    """Random connected graphs: a random labeling, a random BFS numbering and a
    ``bfs*`` renumbering in rotation, so every predicate sees both answers."""
    rng = random.Random(seed)
    state = {"k": 0}

    def draw() -> Graph:
        g = random_connected_graph(n, rng)
        kind = state["k"] % 3
        state["k"] += 1
        if kind == 1:
            return bfs_renumber(g, rng.randrange(1, n + 1), rng)
        if kind == 2:
            return bfs_star_renumber(g)
        return g

    return draw


class _EmbeddedDecider:
    """One embedded solver per (n, m) spec; graphs are fixed by assumptions,
    which is equivalent to adding their adjacency as unit clauses."""

    def __init__(self):
        self.cache: dict[ProblemSpec, tuple] = {}

    def __call__(self, spec: ProblemSpec, g: Graph) -> str:
        if spec not in self.cache:
            f = encode(spec).formula
            solver = None if f.trivially_unsat else dpll.Dpll(f.num_vars, f.clauses)
            self.cache[spec] = (solver, [f.var(f"A[{i},{j}]") for i, j in all_pairs(spec.n)])
        solver, avars = self.cache[spec]
        if solver is None:
            return UNSAT
        assumptions = [v if g.has_edge(i, j) else -v for (i, j), v in zip(all_pairs(g.n), avars)]
        return SAT if solver.solve(assumptions) is not None else UNSAT


def _decide_external(spec: ProblemSpec, g: Graph, solver: SolverConfig) -> str:
    return run_solver(encode(spec, fixed=g).formula, solver).status


def cross_validate_encoding(n: int, mode: str, graphs: Optional[Iterable[Graph]] = None,
                            sampler: Optional[Callable[[], Graph]] = None, samples: int = 0,
                            solver: Optional[SolverConfig] = None) -> CrossCheckReport:
    """Fix the adjacency literals of the mode's CNF to each graph and compare
    satisfiability with the semantic predicate.

    Graphs come from ``graphs``, or ``samples`` draws of ``sampler``, or (for
    n <= 6) an exhaustive scan. ``solver=None`` uses the embedded procedure.
    """
    mode = normalize_sbp(mode)
    if mode == "none":
        raise ValueError("cross-validation needs a symmetry-breaking mode")
    pred = checker(MODE_PREDICATE[mode])
    if graphs is None:
        if sampler is not None:
            graphs = (sampler() for _ in range(samples))
        elif n <= 6:
            graphs = enumerate_graphs(n)
        else:
            raise CapacityError("exhaustive cross-validation is limited to n <= 6; pass a sampler")
    report = CrossCheckReport(n, mode)
    embedded = _EmbeddedDecider()
    for g in graphs:
        want = pred(g)
        spec = ProblemSpec(g.n, edge_count(g), frozenset(), "auxiliary", mode)
        status = embedded(spec, g) if solver is None else _decide_external(spec, g, solver)
        report.checked += 1
        report.positives += want
        if status == UNKNOWN or (status == SAT) != want:
            report.disagreements.append((g, want, status))
    return report


def projected_models(spec: ProblemSpec) -> set[Graph]:
    """All graphs admitted by the CNF of ``spec``: models are enumerated with
    the embedded procedure and projected onto the adjacency variables."""
    enc = encode(spec)
    f = enc.formula
    if f.trivially_unsat:
        return set()
    pairs = all_pairs(spec.n)
    avars = [f.var(f"A[{i},{j}]") for i, j in pairs]
    solver = dpll.Dpll(f.num_vars, f.clauses)
    found: set[Graph] = set()
    blocks: list[list[int]] = []
    while True:
        model = dpll.Dpll(f.num_vars, f.clauses + blocks).solve() if blocks else solver.solve()
        if model is None:
            return found
        chosen = [(i, j) for (i, j), v in zip(pairs, avars) if model[v - 1] > 0]
        found.add(Graph(spec.n, chosen))
        blocks.append([-v if model[v - 1] > 0 else v for v in avars])
