"""Small complete SAT procedure (unit propagation with two watched literals,
chronological backtracking). It keeps the test suite hermetic for the tiny
fixed-adjacency instances the oracle decides; it is not meant for real search.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence


class Dpll:
    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]]):
        self.num_vars = num_vars
        self.value = [0] * (num_vars + 1)
        self.clauses: list[list[int]] = []
        self.units: list[int] = []
        self.empty = False
        self.watches: dict[int, list[int]] = {}
        for c in clauses:
            c = list(dict.fromkeys(c))
            if not c:
                self.empty = True
            elif len(c) == 1:
                self.units.append(c[0])
            elif any(-x in c for x in c):
                continue
            else:
                idx = len(self.clauses)
                self.clauses.append(c)
                self.watches.setdefault(c[0], []).append(idx)
                self.watches.setdefault(c[1], []).append(idx)
        self.trail: list[int] = []

    def _val(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _assign(self, lit: int) -> bool:
        cur = self._val(lit)
        if cur == 1:
            return True
        if cur == -1:
            return False
        self.value[abs(lit)] = 1 if lit > 0 else -1
        self.trail.append(lit)
        return True

    def _propagate(self, start: int) -> bool:
        head = start
        while head < len(self.trail):
            false_lit = -self.trail[head]
            head += 1
            watching = self.watches.get(false_lit)
            if not watching:
                continue
            keep = []
            i = 0
            ok = True
            while i < len(watching):
                ci = watching[i]
                i += 1
                c = self.clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if self._val(c[0]) == 1:
                    keep.append(ci)
                    continue
                for k in range(2, len(c)):
                    if self._val(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        self.watches.setdefault(c[1], []).append(ci)
                        break
                else:
                    keep.append(ci)
                    if self._val(c[0]) == -1 or not self._assign(c[0]):
                        keep.extend(watching[i:])
                        ok = False
                        break
            self.watches[false_lit] = keep
            if not ok:
                return False
        return True

    def _undo(self, size: int) -> None:
        while len(self.trail) > size:
            self.value[abs(self.trail.pop())] = 0

    def solve(self, assumptions: Sequence[int] = ()) -> Optional[list[int]]:
        """Return a model (signed literals for 1..num_vars) or None if unsatisfiable."""
        if self.empty:
            return None
        self._undo(0)
        for lit in list(self.units) + list(assumptions):
            if not self._assign(lit):
                return None
        if not self._propagate(0):
            self._undo(0)
            return None
        levels: list[tuple[int, int, bool]] = []  # (trail size, decision, flipped)
        next_var = 1
        while True:
            while next_var <= self.num_vars and self.value[next_var] != 0:
                next_var += 1
            if next_var > self.num_vars:
                model = [v if self.value[v] == 1 else -v for v in range(1, self.num_vars + 1)]
                self._undo(0)
                return model
            levels.append((len(self.trail), next_var, False))
            lit = -next_var
            self._assign(lit)
            ok = self._propagate(len(self.trail) - 1)
            while not ok:
                while levels and levels[-1][2]:
                    levels.pop()
                if not levels:
                    self._undo(0)
                    return None
                size, var, _ = levels.pop()
                self._undo(size)
                next_var = var
                levels.append((size, var, True))
                self._assign(var)
                ok = self._propagate(size)


def solve(num_vars: int, clauses: Iterable[Sequence[int]],
          assumptions: Sequence[int] = ()) -> Optional[list[int]]:
    return Dpll(num_vars, clauses).solve(assumptions)
