"""CNF construction primitives: a clause builder that folds boolean constants,
order-encoded bounded integers, unary (totalizer-style) adders and a ladder
at-most-one.

Literals are non-zero ints in DIMACS convention. Anywhere a literal is
accepted the Python constants ``True``/``False`` may be used instead; clauses
are simplified on emission (a ``True`` literal drops the clause, ``False``
literals are removed). A clause that simplifies to nothing marks the formula
as trivially unsatisfiable rather than being emitted.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

Lit = Union[int, bool]


class EncodingError(ValueError):
    pass


class DecodeError(RuntimeError):
    """A model contradicts the encoder's own invariants (encoder bug)."""


def neg(lit: Lit) -> Lit:
    if lit is True:
        return False
    if lit is False:
        return True
    return -lit


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list[list[int]]
    symbols: dict[str, int] = field(default_factory=dict)
    trivially_unsat: bool = False
    # names of integer registers -> (lo, hi, [lit for value >= lo+1 .. hi])
    ints: dict[str, tuple[int, int, list[Lit]]] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def var(self, name: str) -> int:
        return self.symbols[_normalize_name(name)]

    def fixed(self, units: Iterable[int]) -> CnfFormula:
        """Copy with extra unit clauses."""
        return CnfFormula(self.num_vars, self.clauses + [[u] for u in units],
                          dict(self.symbols), self.trivially_unsat, dict(self.ints), dict(self.meta))

    def to_dimacs(self, comments: bool = True) -> str:
        out = io.StringIO()
        write_dimacs(self, out, comments=comments)
        return out.getvalue()


def _normalize_name(name: str) -> str:
    # A[j,i] aliases A[i,j]
    if name.startswith("A[") and name.endswith("]"):
        i, j = (int(t) for t in name[2:-1].split(","))
        return f"A[{min(i, j)},{max(i, j)}]"
    return name


class CnfBuilder:
    def __init__(self):
        self.num_vars = 0
        self.clauses: list[list[int]] = []
        self.symbols: dict[str, int] = {}
        self.ints: dict[str, tuple[int, int, list[Lit]]] = {}
        self.trivially_unsat = False
        self.meta: dict[str, str] = {}

    def new_var(self, name: str | None = None) -> int:
        self.num_vars += 1
        if name is not None:
            if name in self.symbols:
                raise EncodingError(f"duplicate symbol {name}")
            self.symbols[name] = self.num_vars
        return self.num_vars

    def add(self, lits: Iterable[Lit]) -> None:
        clause = []
        for lit in lits:
            if lit is True:
                return
            if lit is False:
                continue
            clause.append(lit)
        if not clause:
            self.trivially_unsat = True
            return
        self.clauses.append(clause)

    def implies(self, antecedents: Sequence[Lit], consequent: Lit) -> None:
        """(a1 and a2 and ...) -> consequent"""
        self.add([neg(a) for a in antecedents] + [consequent])

    def define_and(self, lits: Sequence[Lit], name: str | None = None) -> Lit:
        """Fresh variable equivalent to the conjunction of ``lits``."""
        if any(x is False for x in lits):
            return False
        lits = [x for x in lits if x is not True]
        if not lits:
            return True
        if len(lits) == 1 and name is None:
            return lits[0]
        y = self.new_var(name)
        for x in lits:
            self.add([-y, x])
        self.add([y] + [neg(x) for x in lits])
        return y

    def define_or(self, lits: Sequence[Lit], name: str | None = None) -> Lit:
        if any(x is True for x in lits):
            return True
        lits = [x for x in lits if x is not False]
        if not lits:
            return False
        if len(lits) == 1 and name is None:
            return lits[0]
        y = self.new_var(name)
        for x in lits:
            self.add([neg(x), y])
        self.add([-y] + list(lits))
        return y

    def at_most_one_ladder(self, lits: Sequence[Lit]) -> None:
        """Sequential (ladder) at-most-one: 3k-4 clauses, k-1 auxiliaries."""
        lits = [x for x in lits if x is not False]
        k = len(lits)
        if k <= 1:
            return
        s = [self.new_var() for _ in range(k - 1)]
        self.add([neg(lits[0]), s[0]])
        for t in range(1, k - 1):
            self.add([neg(lits[t]), s[t]])
            self.add([-s[t - 1], s[t]])
            self.add([neg(lits[t]), -s[t - 1]])
        self.add([neg(lits[k - 1]), -s[k - 2]])

    def build(self) -> CnfFormula:
        return CnfFormula(self.num_vars, self.clauses, dict(self.symbols),
                          self.trivially_unsat, dict(self.ints), dict(self.meta))


class OrderInt:
    """Integer in [lo, hi] in order encoding: ``ge(k)`` is "value >= k"."""

    __slots__ = ("lo", "hi", "lits")

    def __init__(self, lo: int, hi: int, lits: Sequence[Lit]):
        if hi < lo or len(lits) != hi - lo:
            raise EncodingError(f"bad order encoding [{lo},{hi}] with {len(lits)} literals")
        self.lo, self.hi, self.lits = lo, hi, list(lits)

    @classmethod
    def new(cls, cnf: CnfBuilder, lo: int, hi: int, name: str | None = None) -> OrderInt:
        """Fresh integer variable with ordering clauses (>= k+1) -> (>= k)."""
        lits = [cnf.new_var(f"{name}>={k}" if name else None) for k in range(lo + 1, hi + 1)]
        for a, b in zip(lits[1:], lits):
            cnf.add([-a, b])
        x = cls(lo, hi, lits)
        if name:
            cnf.ints[name] = (lo, hi, list(lits))
        return x

    @classmethod
    def const(cls, value: int) -> OrderInt:
        return cls(value, value, [])

    def ge(self, k: int) -> Lit:
        if k <= self.lo:
            return True
        if k > self.hi:
            return False
        return self.lits[k - self.lo - 1]

    def le(self, k: int) -> Lit:
        return neg(self.ge(k + 1))

    def eq(self, cnf: CnfBuilder, k: int, name: str | None = None) -> Lit:
        return cnf.define_and([self.ge(k), neg(self.ge(k + 1))], name)


def assert_le(cnf: CnfBuilder, a: OrderInt, b: OrderInt, guard: Sequence[Lit] = ()) -> None:
    """guard -> a <= b"""
    for k in range(min(a.lo, b.lo) + 1, max(a.hi, b.hi) + 1):
        cnf.add([neg(g) for g in guard] + [neg(a.ge(k)), b.ge(k)])


def assert_ge_const(cnf: CnfBuilder, a: OrderInt, k: int) -> None:
    cnf.add([a.ge(k)])


def assert_le_const(cnf: CnfBuilder, a: OrderInt, k: int) -> None:
    cnf.add([neg(a.ge(k + 1))])


def unary_add(cnf: CnfBuilder, a: OrderInt, b: OrderInt, cap: int | None = None) -> OrderInt:
    """Exact sum of two non-negative unary numbers, saturating at ``cap``.

    The result is fully defined in both directions: ``s >= k`` holds iff
    ``min(a + b, cap) >= k``.
    """
    if a.lo != 0 or b.lo != 0:
        raise EncodingError("unary_add expects lo == 0 operands")
    top = a.hi + b.hi if cap is None else min(a.hi + b.hi, cap)
    if a.hi == 0:
        return b if cap is None or b.hi <= cap else _clip(cnf, b, cap)
    if b.hi == 0:
        return a if cap is None or a.hi <= cap else _clip(cnf, a, cap)
    s = OrderInt.new(cnf, 0, top)
    for i in range(a.hi + 1):
        for j in range(b.hi + 1):
            if i + j >= 1:
                # a >= i and b >= j  ->  s >= i + j
                cnf.add([neg(a.ge(i)), neg(b.ge(j)), s.ge(min(i + j, top))])
            if i + j + 1 <= top:
                # a < i+1 and b < j+1  ->  s < i+j+1
                cnf.add([a.ge(i + 1), b.ge(j + 1), neg(s.ge(i + j + 1))])
    return s


def _clip(cnf: CnfBuilder, a: OrderInt, cap: int) -> OrderInt:
    return OrderInt(0, cap, a.lits[:cap])


def unary_sum(cnf: CnfBuilder, terms: Sequence[OrderInt], cap: int | None = None) -> OrderInt:
    """Sequential chain of unary adders over ``terms``."""
    acc = OrderInt.const(0)
    for t in terms:
        acc = unary_add(cnf, acc, t, cap)
    return acc


def bit(lit: Lit) -> OrderInt:
    """A boolean viewed as a 0/1 unary number."""
    if lit is False:
        return OrderInt.const(0)
    return OrderInt(0, 1, [lit])


# -- DIMACS -------------------------------------------------------------------

def _lit_token(lit: Lit) -> str:
    if lit is True:
        return "T"
    if lit is False:
        return "F"
    return str(lit)


def _token_lit(tok: str) -> Lit:
    return {"T": True, "F": False}.get(tok) if tok in ("T", "F") else int(tok)


def write_dimacs(f: CnfFormula, out, comments: bool = True) -> None:
    """DIMACS CNF with the symbol table as ``c <name> = <var>`` comment lines.

    Integer registers are written as ``c int <name> <lo> <hi> <lits...>`` (T/F
    for constant thresholds) and problem metadata as ``c meta <key> <value>``,
    so a solver model can be decoded from the file alone.
    """
    clauses = f.clauses
    num_vars = f.num_vars
    if comments:
        for key, value in f.meta.items():
            out.write(f"c meta {key} {value}\n")
        for name, v in f.symbols.items():
            out.write(f"c {name} = {v}\n")
        for name, (lo, hi, lits) in f.ints.items():
            out.write(f"c int {name} {lo} {hi} {' '.join(_lit_token(x) for x in lits)}".rstrip() + "\n")
    if f.trivially_unsat:
        # keep the file a valid CNF: x and not x
        num_vars += 1
        clauses = clauses + [[num_vars], [-num_vars]]
        if comments:
            out.write("c trivially unsatisfiable: an empty clause was derived while encoding\n")
    out.write(f"p cnf {num_vars} {len(clauses)}\n")
    for c in clauses:
        out.write(" ".join(map(str, c)) + " 0\n")


def read_dimacs(text: str) -> CnfFormula:
    symbols: dict[str, int] = {}
    ints: dict[str, tuple[int, int, list[Lit]]] = {}
    meta: dict[str, str] = {}
    clauses = []
    num_vars = None
    cur: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            body = line[1:].strip()
            parts = body.split()
            if len(parts) >= 3 and parts[0] == "meta":
                meta[parts[1]] = " ".join(parts[2:])
            elif len(parts) >= 4 and parts[0] == "int":
                ints[parts[1]] = (int(parts[2]), int(parts[3]), [_token_lit(t) for t in parts[4:]])
            elif " = " in body:
                name, _, v = body.rpartition(" = ")
                if v.strip().isdigit():
                    symbols[name.strip()] = int(v)
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise EncodingError(f"bad DIMACS header: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    if cur:
        clauses.append(cur)
    if num_vars is None:
        raise EncodingError("missing 'p cnf' header")
    return CnfFormula(num_vars, clauses, symbols, False, ints, meta)
