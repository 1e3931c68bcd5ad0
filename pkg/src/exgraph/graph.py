"""Labeled simple graphs on vertices 1..n.

Edges are stored once per unordered pair ``(i, j)`` with ``i < j``; the
symmetric view is derived, so symmetry and the absence of loops hold by
construction.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Sequence

MAX_N = 16
MAX_CANONICAL_N = 8


class GraphError(ValueError):
    """Bad input for a graph operation (out-of-range vertex, bad permutation...)."""


class CapacityError(GraphError):
    """Requested size is beyond what a brute-force routine is allowed to handle."""


def pair_index(n: int, i: int, j: int) -> int:
    """Position of pair {i, j} in the order (1,2), (1,3), ..., (n-1,n); 0-based."""
    if i > j:
        i, j = j, i
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


def all_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


class Graph:
    """Immutable undirected simple graph with vertex labels 1..n."""

    __slots__ = ("n", "edges", "_nbrs")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n > MAX_N:
            raise CapacityError(f"graphs are limited to n <= {MAX_N}, got {n}")
        if n < 1:
            raise GraphError(f"vertex count must be at least 1, got {n}")
        norm = set()
        for e in edges:
            i, j = int(e[0]), int(e[1])
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"edge {{{i},{j}}} has a vertex outside 1..{n}")
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            norm.add((min(i, j), max(i, j)))
        nbrs = [0] * (n + 1)
        for i, j in norm:
            nbrs[i] |= 1 << j
            nbrs[j] |= 1 << i
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "_nbrs", tuple(nbrs))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_mask(cls, n: int, mask: int) -> Graph:
        """Build from an edge-set bit string; bit k is the k-th pair in :func:`all_pairs` order."""
        pairs = all_pairs(n)
        return cls(n, [pairs[k] for k in range(len(pairs)) if mask >> k & 1])

    def to_mask(self) -> int:
        return sum(1 << pair_index(self.n, i, j) for i, j in self.edges)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph({self.n}, {sorted(self.edges)})"

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and bool(self._nbrs[i] >> j & 1)

    def neighbors(self, v: int) -> list[int]:
        self._check_vertex(v)
        m = self._nbrs[v]
        return [u for u in range(1, self.n + 1) if m >> u & 1]

    def neighbor_mask(self, v: int) -> int:
        return self._nbrs[v]

    def _check_vertex(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise GraphError(f"vertex {v} is outside 1..{self.n}")

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def edge_count(g: Graph) -> int:
    return len(g.edges)


def degree(g: Graph, v: int) -> int:
    g._check_vertex(v)
    return bin(g.neighbor_mask(v)).count("1")


def degrees(g: Graph) -> list[int]:
    """Degrees of vertices 1..n as a 0-based list."""
    return [bin(g.neighbor_mask(v)).count("1") for v in range(1, g.n + 1)]


def is_connected(g: Graph) -> bool:
    seen = 1 << 1
    frontier = [1]
    while frontier:
        v = frontier.pop()
        new = g.neighbor_mask(v) & ~seen
        seen |= new
        frontier.extend(u for u in range(1, g.n + 1) if new >> u & 1)
    return seen == ((1 << (g.n + 1)) - 2)


def _has_triangle(g: Graph) -> bool:
    for i, j in g.edges:
        if g.neighbor_mask(i) & g.neighbor_mask(j):
            return True
    return False


def _has_c4(g: Graph) -> bool:
    # Two distinct vertices with >= 2 common neighbours span a 4-cycle.
    for u in range(1, g.n + 1):
        for v in range(u + 1, g.n + 1):
            if bin(g.neighbor_mask(u) & g.neighbor_mask(v)).count("1") >= 2:
                return True
    return False


def has_forbidden_cycle(g: Graph, k: int) -> bool:
    """Whether ``g`` contains a (not necessarily induced) cycle of length 3 or 4."""
    if k == 3:
        return _has_triangle(g)
    if k == 4:
        return _has_c4(g)
    raise GraphError(f"only cycle lengths 3 and 4 are supported, got {k}")


class Permutation:
    """Relabeling of 1..n; ``image[v - 1]`` is the new label of old vertex ``v``."""

    __slots__ = ("image",)

    def __init__(self, image: Sequence[int]):
        image = tuple(int(x) for x in image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise GraphError(f"not a bijection on 1..{len(image)}: {list(image)}")
        object.__setattr__(self, "image", image)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    def __call__(self, v: int) -> int:
        return self.image[v - 1]

    def __len__(self):
        return len(self.image)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self):
        return hash(self.image)

    def __repr__(self):
        return f"Permutation({list(self.image)})"

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(range(1, n + 1))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.image)
        for old, new in enumerate(self.image, start=1):
            inv[new - 1] = old
        return Permutation(inv)

    def then(self, other: Permutation) -> Permutation:
        """Composition: apply ``self`` first, then ``other``."""
        return Permutation([other(x) for x in self.image])


def apply_permutation(g: Graph, perm: Permutation | Sequence[int]) -> Graph:
    if not isinstance(perm, Permutation):
        perm = Permutation(perm)
    if len(perm) != g.n:
        raise GraphError(f"permutation has length {len(perm)}, graph has {g.n} vertices")
    return Graph(g.n, [(perm(i), perm(j)) for i, j in g.edges])


def lex_code(g: Graph) -> int:
    """Integer whose binary expansion is the adjacency bit string in pair order.

    The first pair (1,2) is the most significant bit, so integer order is
    lexicographic order of the bit strings.
    """
    npairs = g.n * (g.n - 1) // 2
    return sum(1 << (npairs - 1 - pair_index(g.n, i, j)) for i, j in g.edges)


@functools.lru_cache(maxsize=None)
def _relabel_weights(n: int):
    """Table W[p, k]: lex weight of old pair k under the p-th permutation of 1..n."""
    import numpy as np

    npairs = n * (n - 1) // 2
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    pairs = all_pairs(n)
    table = np.zeros((len(perms), npairs), dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        a, b = perms[:, i - 1], perms[:, j - 1]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        # 0-based pair_index of the relabelled pair
        idx = lo * n - lo * (lo + 1) // 2 + (hi - lo - 1)
        table[:, k] = np.left_shift(1, npairs - 1 - idx)
    return perms + 1, table


def canonical_form(g: Graph) -> Graph:
    """Relabeling of ``g`` with the lexicographically smallest adjacency bit string.

    Brute force over all n! permutations (vectorised), which is the point:
    this is the trusted isomorphism oracle, limited to n <= 8.
    """
    n = g.n
    if n > MAX_CANONICAL_N:
        raise CapacityError(f"canonical_form is brute force and limited to n <= {MAX_CANONICAL_N}")
    if not g.edges:
        return g
    perms, table = _relabel_weights(n)
    cols = [pair_index(n, i, j) for i, j in g.edges]
    codes = table[:, cols].sum(axis=1)
    return apply_permutation(g, perms[int(codes.argmin())].tolist())


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    if sorted(degrees(g)) != sorted(degrees(h)):
        return False
    return canonical_form(g) == canonical_form(h)


# -- text format ------------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse either the edge-list format ("n m" then m lines "i j") or an
    adjacency matrix of n lines with n characters in {0,1}."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty graph description")
    first = lines[0].split()
    if len(first) == 2 and all(t.lstrip("-").isdigit() for t in first) and not _looks_like_matrix(lines):
        n, m = int(first[0]), int(first[1])
        body = lines[1:]
        if len(body) != m:
            raise GraphError(f"header announces {m} edges but {len(body)} edge lines follow")
        edges = []
        for ln in body:
            parts = ln.split()
            if len(parts) != 2:
                raise GraphError(f"bad edge line: {ln!r}")
            i, j = int(parts[0]), int(parts[1])
            if not i < j:
                raise GraphError(f"edge lines must satisfy i < j, got {ln!r}")
            edges.append((i, j))
        g = Graph(n, edges)
        if edge_count(g) != m:
            raise GraphError("duplicate edge lines")
        return g
    return _parse_matrix(lines)


def _looks_like_matrix(lines: list[str]) -> bool:
    n = len(lines)
    return all(len(ln) == n and set(ln) <= {"0", "1"} for ln in lines)


def _parse_matrix(lines: list[str]) -> Graph:
    n = len(lines)
    if not _looks_like_matrix(lines):
        raise GraphError("adjacency matrix must be n lines of n characters in {0,1}")
    edges = []
    for i in range(n):
        if lines[i][i] != "0":
            raise GraphError(f"self-loop at vertex {i + 1}")
        for j in range(n):
            if lines[i][j] != lines[j][i]:
                raise GraphError(f"matrix is not symmetric at ({i + 1},{j + 1})")
            if j > i and lines[i][j] == "1":
                edges.append((i + 1, j + 1))
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    out = [f"{g.n} {edge_count(g)}"]
    out += [f"{i} {j}" for i, j in g.sorted_edges()]
    return "\n".join(out) + "\n"


def format_matrix(g: Graph) -> str:
    rows = []
    for i in range(1, g.n + 1):
        rows.append("".join("1" if g.has_edge(i, j) else "0" for j in range(1, g.n + 1)))
    return "\n".join(rows) + "\n"
