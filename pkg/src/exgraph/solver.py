"""Running SAT solvers on compiled formulas.

Any executable that reads a DIMACS file given as its last argument and prints
SAT-competition output works. Resolution order for the command: explicit
``solver_path``, then ``$EXGRAPH_SOLVER``, then the bundled ``exgraph-sat``
wrapper around pysat's CaDiCaL. ``solver_path="embedded"`` selects the
in-process DPLL, which refuses formulas with more than 200 variables.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from typing import Optional

from . import dpll
from .cnf import CnfFormula, write_dimacs

EMBEDDED = "embedded"
EMBEDDED_MAX_VARS = 200

SAT, UNSAT, UNKNOWN = "sat", "unsat", "unknown"


class SolverConfigError(RuntimeError):
    pass


class SolverIntegrationError(RuntimeError):
    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw


@dataclass
class SolverConfig:
    solver_path: Optional[str] = None
    time_limit: float = 3600.0
    repeats: int = 1
    # "none": never pass a seed; "per-repeat": repeat k gets seed k via seed_flag
    seed_policy: str = "none"
    seed_flag: str = "--seed={seed}"

    def __post_init__(self):
        if not self.time_limit > 0:
            raise SolverConfigError("time_limit must be positive")
        if self.repeats < 1:
            raise SolverConfigError("repeats must be >= 1")
        if self.seed_policy not in ("none", "per-repeat"):
            raise SolverConfigError(f"unknown seed policy {self.seed_policy!r}")


@dataclass
class SolveOutcome:
    status: str
    model: Optional[list[int]] = None
    wall_seconds: float = 0.0
    raw: str = field(default="", repr=False)

    def __post_init__(self):
        if (self.status == SAT) != (self.model is not None):
            raise ValueError("a model is present exactly when the status is sat")


def solver_command(path: Optional[str]) -> list[str]:
    path = path or os.environ.get("EXGRAPH_SOLVER") or None
    if path is None:
        return [sys.executable, "-m", "exgraph.satwrap"]
    cmd = shlex.split(path)
    exe = cmd[0]
    if shutil.which(exe) is None and not os.path.isfile(exe):
        raise SolverConfigError(f"solver executable not found: {exe}")
    return cmd


def run_embedded(formula: CnfFormula, assumptions=(), limit: Optional[int] = EMBEDDED_MAX_VARS) -> SolveOutcome:
    if limit is not None and formula.num_vars > limit:
        raise SolverConfigError(
            f"embedded solver is limited to {limit} variables, formula has {formula.num_vars}")
    t0 = time.perf_counter()
    if formula.trivially_unsat:
        return SolveOutcome(UNSAT, None, time.perf_counter() - t0)
    model = dpll.solve(formula.num_vars, formula.clauses, assumptions)
    status = SAT if model is not None else UNSAT
    return SolveOutcome(status, model, time.perf_counter() - t0)


def parse_competition_output(text: str, num_vars: int) -> tuple[str, Optional[list[int]]]:
    status = None
    values: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            status = {"SATISFIABLE": SAT, "UNSATISFIABLE": UNSAT, "UNKNOWN": UNKNOWN}.get(word)
            if status is None:
                raise SolverIntegrationError(f"unrecognised status line {line!r}", text)
        elif line.startswith("v ") or line == "v":
            values.extend(int(t) for t in line[1:].split())
    if status is None:
        raise SolverIntegrationError("solver printed no 's' status line", text)
    if status != SAT:
        return status, None
    assigned = {abs(v): v for v in values if v != 0}
    model = [assigned.get(v, -v) for v in range(1, num_vars + 1)]
    return status, model


def run_solver(formula: CnfFormula, cfg: Optional[SolverConfig] = None, seed: Optional[int] = None) -> SolveOutcome:
    """Solve ``formula``; the wall clock covers the solver process only."""
    cfg = cfg or SolverConfig()
    if cfg.solver_path == EMBEDDED:
        return run_embedded(formula)
    if formula.trivially_unsat:
        return SolveOutcome(UNSAT, None, 0.0)
    cmd = solver_command(cfg.solver_path)
    if seed is not None and cfg.seed_policy == "per-repeat":
        cmd = cmd + [cfg.seed_flag.format(seed=seed)]
    with tempfile.TemporaryDirectory(prefix="exgraph-") as tmp:
        path = os.path.join(tmp, "instance.cnf")
        with open(path, "w") as fh:
            write_dimacs(formula, fh, comments=False)
        t0 = time.perf_counter()
        try:
            proc = subprocess.run(cmd + [path], capture_output=True, text=True, timeout=cfg.time_limit)
        except subprocess.TimeoutExpired:
            return SolveOutcome(UNKNOWN, None, time.perf_counter() - t0)
        except FileNotFoundError as exc:
            raise SolverConfigError(f"cannot run solver {cmd[0]}: {exc}") from exc
        wall = time.perf_counter() - t0
    status, model = parse_competition_output(proc.stdout, formula.num_vars)
    return SolveOutcome(status, model, wall, proc.stdout)
