"""BFS-enumeration symmetry-breaking predicates evaluated on explicit graphs.

Three predicates of increasing strength are provided:

* ``bfs``   -- labels coincide with the visit order of some BFS traversal
  rooted at vertex 1;
* ``bfs+``  -- additionally vertex 1 has maximum degree;
* ``bfs*``  -- additionally the children of every BFS-tree node are listed in
  non-ascending order of subtree weight.

``bfs-asc`` is the same as ``bfs*`` with the sibling order reversed. It is
*not* a symmetry-breaking predicate (no labeling of C4 satisfies it) and is
kept only so that this can be checked mechanically.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .graph import Graph, GraphError, Permutation, apply_permutation, degrees, is_connected

PREDICATES = ("bfs", "bfs+", "bfs*", "bfs-asc")


@dataclass(frozen=True)
class BfsCertificate:
    """Parent, degree and subtree-weight arrays of a BFS-enumerated graph.

    ``parents[j - 2]`` is the parent label of vertex ``j`` (j = 2..n); the root
    has no parent. ``degrees`` and ``weights`` are indexed ``[v - 1]``.
    """

    parents: tuple[int, ...]
    degrees: tuple[int, ...]
    deg_max: int
    weights: tuple[int, ...]

    def parent(self, j: int) -> int:
        return self.parents[j - 2]

    def weight(self, v: int) -> int:
        return self.weights[v - 1]

    def format(self) -> str:
        return "\n".join([
            "p: " + " ".join(map(str, self.parents)),
            "deg: " + " ".join(map(str, self.degrees)),
            "w: " + " ".join(map(str, self.weights)),
        ])


def compute_parents(g: Graph) -> Optional[tuple[int, ...]]:
    """Smallest earlier neighbour of every vertex j >= 2, or None if some
    vertex has no neighbour with a smaller label."""
    parents = []
    for j in range(2, g.n + 1):
        earlier = g.neighbor_mask(j) & ((1 << j) - 1)
        if not earlier:
            return None
        parents.append((earlier & -earlier).bit_length() - 1)
    return tuple(parents)


def compute_weights(g: Graph, parents: tuple[int, ...]) -> tuple[int, ...]:
    """Subtree weights w_1..w_n of the BFS tree given by ``parents``."""
    if len(parents) != g.n - 1:
        raise GraphError(f"expected {g.n - 1} parents, got {len(parents)}")
    w = [1] * (g.n + 1)
    for j in range(g.n, 1, -1):
        w[parents[j - 2]] += w[j]
    return tuple(w[1:])


def certificate(g: Graph) -> Optional[BfsCertificate]:
    parents = compute_parents(g)
    if parents is None:
        return None
    degs = tuple(degrees(g))
    return BfsCertificate(parents, degs, max(degs), compute_weights(g, parents))


def _non_decreasing(xs) -> bool:
    return all(a <= b for a, b in zip(xs, xs[1:]))


def check_bfs(g: Graph) -> bool:
    parents = compute_parents(g)
    return parents is not None and _non_decreasing(parents)


def check_bfs_plus(g: Graph) -> bool:
    if not check_bfs(g):
        return False
    degs = degrees(g)
    return degs[0] == max(degs)


def _siblings_ordered(g: Graph, descending: bool) -> bool:
    parents = compute_parents(g)
    w = compute_weights(g, parents)
    for i in range(2, g.n):
        if parents[i - 2] == parents[i - 1]:
            a, b = w[i - 1], w[i]
            if (a < b) if descending else (a > b):
                return False
    return True


def check_bfs_star(g: Graph) -> bool:
    return check_bfs_plus(g) and _siblings_ordered(g, descending=True)


def check_bfs_ascending_variant(g: Graph) -> bool:
    return check_bfs_plus(g) and _siblings_ordered(g, descending=False)


_CHECKERS = {
    "bfs": check_bfs,
    "bfs+": check_bfs_plus,
    "bfs*": check_bfs_star,
    "bfs-star": check_bfs_star,
    "bfs-asc": check_bfs_ascending_variant,
}


def checker(name: str):
    try:
        return _CHECKERS[name]
    except KeyError:
        raise ValueError(f"unknown predicate {name!r}; expected one of {PREDICATES}") from None


# -- constructive renumbering -------------------------------------------------

def _bfs_order(g: Graph, root: int, priority) -> list[int]:
    """BFS from ``root``; newly discovered neighbours are queued by ``priority``."""
    seen = {root}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        fresh = sorted((v for v in g.neighbors(u) if v not in seen), key=priority)
        seen.update(fresh)
        order.extend(fresh)
        queue.extend(fresh)
    return order


def _order_to_perm(order: list[int]) -> Permutation:
    image = [0] * len(order)
    for label, v in enumerate(order, start=1):
        image[v - 1] = label
    return Permutation(image)


def _first_unsorted_swap(g: Graph) -> Optional[tuple[int, int]]:
    """Next adjacent sibling pair to exchange, following a selection sort of
    each child list, vertices taken in label (BFS) order."""
    parents = compute_parents(g)
    w = compute_weights(g, parents)
    children: dict[int, list[int]] = {}
    for j in range(2, g.n + 1):
        children.setdefault(parents[j - 2], []).append(j)
    for v in sorted(children):
        kids = children[v]
        ws = [w[c - 1] for c in kids]
        for t in range(len(kids) - 1):
            top = max(ws[t:])
            if ws[t] < top:
                q = ws.index(top, t)
                return kids[q - 1], kids[q]
    return None


def bfs_star_renumbering(g: Graph) -> Permutation:
    """Permutation taking connected ``g`` to a labeling that satisfies ``bfs*``.

    Start from a BFS numbering rooted at a maximum-degree vertex, then exchange
    adjacent siblings whose subtree weights are ascending. Each exchange swaps
    the two labels and renumbers everything after them with a fresh BFS, which
    only reshapes the two swapped subtrees and leaves the earlier part of the
    labeling alone.
    """
    if not is_connected(g):
        raise GraphError("bfs_star_renumber needs a connected graph")
    degs = degrees(g)
    root = degs.index(max(degs)) + 1
    perm = _order_to_perm(_bfs_order(g, root, priority=lambda v: v))
    h = apply_permutation(g, perm)
    cap = max(1, g.n ** 3)
    for _ in range(cap):
        swap = _first_unsorted_swap(h)
        if swap is None:
            return perm
        a, b = swap
        key = {a: b, b: a}
        step = _order_to_perm(_bfs_order(h, 1, priority=lambda v: key.get(v, v)))
        h = apply_permutation(h, step)
        if not check_bfs(h):
            raise RuntimeError(f"sibling exchange {swap} broke the BFS numbering")
        perm = perm.then(step)
    raise RuntimeError(f"bfs_star_renumber did not converge within {cap} exchanges")


def bfs_star_renumber(g: Graph) -> Graph:
    return apply_permutation(g, bfs_star_renumbering(g))
