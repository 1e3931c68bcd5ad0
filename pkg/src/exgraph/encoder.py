"""Compile a graph-search problem into CNF.

The model has one boolean per vertex pair, cycle exclusions, an exact edge
count, per-vertex degree registers with global min/max degree, optional
problem-specific degree bounds, and optionally one of the BFS symmetry-breaking
predicates. Integers are order encoded and sums are built from unary adders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .cnf import (
    CnfBuilder,
    CnfFormula,
    DecodeError,
    EncodingError,
    Lit,
    OrderInt,
    assert_ge_const,
    assert_le,
    assert_le_const,
    bit,
    neg,
    unary_sum,
)
from .graph import MAX_N, Graph

SBP_MODES = ("none", "bfs", "bfs+", "bfs-star")
CYCLE_ENCODINGS = ("direct", "auxiliary")

_SBP_ALIASES = {"bfs*": "bfs-star", "bfsstar": "bfs-star", "star": "bfs-star",
                "baseline": "none", "": "none", "plus": "bfs+"}
_CYCLE_ALIASES = {"aux": "auxiliary"}


def normalize_sbp(mode: str) -> str:
    mode = _SBP_ALIASES.get(mode, mode)
    if mode not in SBP_MODES:
        raise EncodingError(f"unknown SBP mode {mode!r}; expected one of {SBP_MODES}")
    return mode


def parse_forbid(text: str | Iterable[int]) -> frozenset[int]:
    if isinstance(text, str):
        items = [t for t in text.replace(" ", "").split(",") if t]
        ks = frozenset(int(t) for t in items)
    else:
        ks = frozenset(int(t) for t in text)
    if not ks <= {3, 4}:
        raise EncodingError(f"only cycle lengths 3 and 4 can be forbidden, got {sorted(ks)}")
    return ks


@dataclass(frozen=True)
class ProblemSpec:
    """One SAT instance: n vertices, exactly m edges, no cycles of the given
    lengths, optionally a symmetry-breaking predicate and degree bounds."""

    n: int
    m: int
    forbid: frozenset = frozenset()
    cycle_encoding: str = "auxiliary"
    sbp: str = "none"
    garnick: bool = False
    clapham: bool = False
    ex_prev: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "forbid", parse_forbid(self.forbid))
        object.__setattr__(self, "sbp", normalize_sbp(self.sbp))
        enc = _CYCLE_ALIASES.get(self.cycle_encoding, self.cycle_encoding)
        if enc not in CYCLE_ENCODINGS:
            raise EncodingError(f"unknown cycle encoding {self.cycle_encoding!r}")
        object.__setattr__(self, "cycle_encoding", enc)
        if not 1 <= self.n <= MAX_N:
            raise EncodingError(f"n must be in 1..{MAX_N}, got {self.n}")
        if not 0 <= self.m <= self.n * (self.n - 1) // 2:
            raise EncodingError(f"m={self.m} is outside 0..C({self.n},2)")
        if self.garnick:
            if self.ex_prev is None:
                raise EncodingError("garnick bounds need ex_prev = ex(n-1; C3, C4)")
            if self.forbid != {3, 4}:
                raise EncodingError("garnick bounds are only valid with forbid = {3, 4}")
        if self.clapham and 4 not in self.forbid:
            raise EncodingError("clapham bounds are only valid when C4 is forbidden")

    def with_m(self, m: int) -> ProblemSpec:
        return ProblemSpec(self.n, m, self.forbid, self.cycle_encoding, self.sbp,
                           self.garnick, self.clapham, self.ex_prev)


@dataclass
class EncodingContext:
    n: int
    cnf: CnfBuilder
    adj: dict[tuple[int, int], int] = field(default_factory=dict)
    deg: list[OrderInt] = field(default_factory=list)  # deg[v - 1]
    delta: Optional[OrderInt] = None
    deg_max: Optional[OrderInt] = None
    parents: dict[int, OrderInt] = field(default_factory=dict)
    is_parent: dict[tuple[int, int], Lit] = field(default_factory=dict)  # (j, i): p_j = i
    weights: dict[int, OrderInt] = field(default_factory=dict)

    def A(self, i: int, j: int) -> Lit:
        if i == j:
            return False
        return self.adj[(min(i, j), max(i, j))]

    def register(self, name: str, x: OrderInt) -> None:
        """Record an integer for decoding and name its threshold literals."""
        self.cnf.ints[name] = (x.lo, x.hi, list(x.lits))
        for k, lit in zip(range(x.lo + 1, x.hi + 1), x.lits):
            if not isinstance(lit, bool):
                self.cnf.symbols.setdefault(f"{name}>={k}", lit)


def encode_adjacency(n: int, cnf: Optional[CnfBuilder] = None) -> EncodingContext:
    """One variable per unordered pair i < j, numbered 1..C(n,2) in pair order."""
    ctx = EncodingContext(n, cnf or CnfBuilder())
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            ctx.adj[(i, j)] = ctx.cnf.new_var(f"A[{i},{j}]")
    return ctx


def encode_no_c3_direct(ctx: EncodingContext) -> None:
    n, A = ctx.n, ctx.A
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                ctx.cnf.add([neg(A(i, j)), neg(A(j, k)), neg(A(i, k))])


def four_cycles(n: int):
    """Each undirected 4-cycle on 1..n once, as a vertex sequence starting at its minimum."""
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            for c in range(b + 1, n + 1):
                for d in range(c + 1, n + 1):
                    yield (a, b, c, d)
                    yield (a, b, d, c)
                    yield (a, c, b, d)


def encode_no_c4_direct(ctx: EncodingContext) -> None:
    A = ctx.A
    for w, x, y, z in four_cycles(ctx.n):
        ctx.cnf.add([neg(A(w, x)), neg(A(x, y)), neg(A(y, z)), neg(A(z, w))])


def encode_no_c34_auxiliary(ctx: EncodingContext, forbid: Iterable[int]) -> None:
    """O(n^3) cycle exclusion through paths of length two.

    x[i,j,k] <-> A[i,j] & A[j,k] for i < k; with C3 forbidden, x[i,k] is the
    disjunction over j and excludes A[i,k]; with C4 forbidden, at most one
    x[i,j,k] per pair (ladder encoding).
    """
    forbid = set(forbid)
    cnf, n = ctx.cnf, ctx.n
    for i in range(1, n + 1):
        for k in range(i + 1, n + 1):
            mids = [j for j in range(1, n + 1) if j != i and j != k]
            xs = [cnf.define_and([ctx.A(i, j), ctx.A(j, k)], f"x[{i},{j},{k}]") for j in mids]
            if 3 in forbid and xs:
                x_ik = cnf.define_or(xs, f"x[{i},{k}]")
                cnf.add([neg(ctx.A(i, k)), neg(x_ik)])
            if 4 in forbid:
                cnf.at_most_one_ladder(xs)


def encode_edge_count(ctx: EncodingContext, m: int) -> None:
    """Exactly m edges, via a sequential unary counter over the pair variables."""
    npairs = ctx.n * (ctx.n - 1) // 2
    if not 0 <= m <= npairs:
        raise EncodingError(f"m={m} is outside 0..{npairs}")
    total = unary_sum(ctx.cnf, [bit(v) for v in ctx.adj.values()], cap=m + 1)
    assert_ge_const(ctx.cnf, total, m)
    assert_le_const(ctx.cnf, total, m)


def encode_degrees(ctx: EncodingContext) -> None:
    """Degree registers deg_i, global min degree delta and max degree Delta,
    each attained by some vertex."""
    cnf, n = ctx.cnf, ctx.n
    for v in range(1, n + 1):
        d = unary_sum(cnf, [bit(ctx.A(v, u)) for u in range(1, n + 1) if u != v])
        ctx.deg.append(d)
        ctx.register(f"deg[{v}]", d)
    ctx.delta = OrderInt.new(cnf, 0, n - 1, "delta")
    ctx.deg_max = OrderInt.new(cnf, 0, n - 1, "Delta")
    lo_sel, hi_sel = [], []
    for v, d in enumerate(ctx.deg, start=1):
        assert_le(cnf, ctx.delta, d)
        assert_le(cnf, d, ctx.deg_max)
        s, t = cnf.new_var(), cnf.new_var()
        assert_le(cnf, d, ctx.delta, guard=[s])
        assert_le(cnf, ctx.deg_max, d, guard=[t])
        lo_sel.append(s)
        hi_sel.append(t)
    cnf.add(lo_sel)
    cnf.add(hi_sel)


def clapham_delta_cap(n: int) -> int:
    """floor((1 + sqrt(4n - 3)) / 2), exactly."""
    return (1 + math.isqrt(4 * n - 3)) // 2


def encode_garnick_bounds(ctx: EncodingContext, m: int, ex_prev: Optional[int]) -> None:
    """Degree bounds valid for every C3/C4-free graph with n vertices and m edges:
    1 + Delta*delta <= n, 1 + delta^2 <= n, delta >= m - ex(n-1), Delta >= ceil(2m/n).
    """
    if ex_prev is None:
        raise EncodingError("garnick bounds need ex_prev")
    cnf, n, lo, hi = ctx.cnf, ctx.n, ctx.delta, ctx.deg_max
    # smallest a with a*b > n-1 for each b; larger a follow by the ordering clauses
    for b in range(1, n):
        cnf.add([neg(hi.ge((n - 1) // b + 1)), neg(lo.ge(b))])
    assert_le_const(cnf, lo, math.isqrt(n - 1))
    assert_ge_const(cnf, lo, m - ex_prev)
    assert_ge_const(cnf, hi, -(-2 * m // n))


def encode_clapham_bounds(ctx: EncodingContext) -> None:
    """Degree bounds valid for every C4-free graph: delta <= Delta,
    Delta*(delta-1) <= n-1, delta <= (1 + sqrt(4n-3))/2."""
    cnf, n, lo, hi = ctx.cnf, ctx.n, ctx.delta, ctx.deg_max
    assert_le(cnf, lo, hi)
    for b in range(2, n):
        cnf.add([neg(hi.ge((n - 1) // (b - 1) + 1)), neg(lo.ge(b))])
    assert_le_const(cnf, lo, clapham_delta_cap(n))


def encode_sbp(ctx: EncodingContext, mode: str) -> None:
    mode = normalize_sbp(mode)
    if mode == "none":
        return
    cnf, n = ctx.cnf, ctx.n
    # parent p_j in 1..j-1, channelled to the adjacency: p_j = i iff i is the
    # smallest neighbour of j
    for j in range(2, n + 1):
        p = OrderInt.new(cnf, 1, j - 1)
        ctx.parents[j] = p
        ctx.register(f"p[{j}]", p)
        for i in range(1, j):
            e = p.eq(cnf, i)
            ctx.is_parent[(j, i)] = e
            cnf.implies([e], ctx.A(i, j))
            for k in range(1, i):
                cnf.implies([e], neg(ctx.A(k, j)))
            cnf.add([neg(ctx.A(i, j))] + [ctx.A(k, j) for k in range(1, i)] + [e])
    for j in range(2, n):
        assert_le(cnf, ctx.parents[j], ctx.parents[j + 1])
    if mode == "bfs":
        return

    if not ctx.deg:
        encode_degrees(ctx)
    root = ctx.deg[0]
    for d in ctx.deg[1:]:
        assert_le(cnf, d, root)
    assert_le(cnf, ctx.deg_max, root)
    if mode == "bfs+":
        return

    # w_i = 1 + sum_j [p_j = i] * w_j, with w_i in [1, n - i + 1]
    for i in range(n, 0, -1):
        terms = []
        for j in range(i + 1, n + 1):
            wj = ctx.weights[j]
            e = ctx.is_parent[(j, i)]
            gated = [cnf.define_and([e, wj.ge(k)]) for k in range(1, wj.hi + 1)]
            terms.append(OrderInt(0, wj.hi, gated))
        room = n - i
        below = unary_sum(cnf, terms, cap=room + 1)
        assert_le_const(cnf, below, room)
        wi = OrderInt(1, room + 1, [below.ge(k - 1) for k in range(2, room + 2)])
        ctx.weights[i] = wi
        ctx.register(f"w[{i}]", wi)
    # consecutive siblings: p_i = p_{i+1} -> w_i >= w_{i+1}
    for i in range(2, n):
        for v in range(1, i):
            same = [ctx.is_parent[(i, v)], ctx.is_parent[(i + 1, v)]]
            assert_le(cnf, ctx.weights[i + 1], ctx.weights[i], guard=same)


@dataclass
class Encoding:
    spec: ProblemSpec
    formula: CnfFormula
    context: EncodingContext


def encode(spec: ProblemSpec, fixed: Optional[Graph] = None) -> Encoding:
    """Compile ``spec``; with ``fixed`` the adjacency variables are pinned to that graph."""
    ctx = encode_adjacency(spec.n)
    cnf = ctx.cnf
    if spec.forbid:
        if spec.cycle_encoding == "direct":
            if 3 in spec.forbid:
                encode_no_c3_direct(ctx)
            if 4 in spec.forbid:
                encode_no_c4_direct(ctx)
        else:
            encode_no_c34_auxiliary(ctx, spec.forbid)
    encode_edge_count(ctx, spec.m)
    encode_degrees(ctx)
    if spec.garnick:
        encode_garnick_bounds(ctx, spec.m, spec.ex_prev)
    if spec.clapham:
        encode_clapham_bounds(ctx)
    encode_sbp(ctx, spec.sbp)
    if fixed is not None:
        if fixed.n != spec.n:
            raise EncodingError(f"fixed graph has {fixed.n} vertices, spec has {spec.n}")
        for (i, j), v in ctx.adj.items():
            cnf.add([v if fixed.has_edge(i, j) else -v])
    cnf.meta = {
        "n": str(spec.n), "m": str(spec.m),
        "forbid": ",".join(map(str, sorted(spec.forbid))) or "-",
        "sbp": spec.sbp, "cycle-enc": spec.cycle_encoding,
    }
    formula = cnf.build()
    return Encoding(spec, formula, ctx)


# -- decoding -----------------------------------------------------------------

@dataclass
class DecodedModel:
    graph: Graph
    degrees: tuple[int, ...]
    delta: int
    deg_max: int
    parents: Optional[tuple[int, ...]] = None
    weights: Optional[tuple[int, ...]] = None


def _truth(lit: Lit, true_vars: set[int]) -> bool:
    if isinstance(lit, bool):
        return lit
    return (lit in true_vars) if lit > 0 else (-lit not in true_vars)


def decode_int(name: str, spec: tuple[int, int, list[Lit]], true_vars: set[int]) -> int:
    lo, hi, lits = spec
    vals = [_truth(x, true_vars) for x in lits]
    if any(b and not a for a, b in zip(vals, vals[1:])):
        raise DecodeError(f"order literals of {name} are not monotone: {vals}")
    return lo + sum(vals)


def decode_model(formula: CnfFormula, model: Iterable[int], n: Optional[int] = None) -> DecodedModel:
    """Read the graph and the integer registers back out of a satisfying assignment."""
    true_vars = {lit for lit in model if lit > 0}
    if n is None:
        n = int(formula.meta["n"])
    edges = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if formula.var(f"A[{i},{j}]") in true_vars:
                edges.append((i, j))
    g = Graph(n, edges)
    ints = {name: decode_int(name, s, true_vars) for name, s in formula.ints.items()}
    degs = tuple(ints[f"deg[{v}]"] for v in range(1, n + 1))
    parents = weights = None
    if f"p[{n}]" in ints and n >= 2:
        parents = tuple(ints[f"p[{j}]"] for j in range(2, n + 1))
    elif n == 1 and formula.meta.get("sbp", "none") != "none":
        parents = ()
    if "w[1]" in ints:
        weights = tuple(ints[f"w[{v}]"] for v in range(1, n + 1))
    return DecodedModel(g, degs, ints["delta"], ints["Delta"], parents, weights)
