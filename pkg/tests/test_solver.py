import stat
import sys

import pytest
from hypothesis import given, settings, strategies as st

from exgraph import dpll
from exgraph.cnf import CnfFormula
from exgraph.encoder import ProblemSpec, decode_model, encode
from exgraph.satwrap import main as satwrap_main
from exgraph.solver import (
    SAT,
    UNKNOWN,
    UNSAT,
    SolveOutcome,
    SolverConfig,
    SolverConfigError,
    SolverIntegrationError,
    parse_competition_output,
    run_embedded,
    run_solver,
    solver_command,
)


def formula(num_vars, clauses):
    return CnfFormula(num_vars, [list(c) for c in clauses])


def brute_sat(num_vars, clauses):
    for bits in range(1 << num_vars):
        if all(any((bits >> (abs(l) - 1) & 1) == (l > 0) for l in c) for c in clauses):
            return True
    return False


@st.composite
def random_cnf(draw):
    nv = draw(st.integers(1, 8))
    lit = st.integers(1, nv).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=3), min_size=0, max_size=30))
    return nv, clauses


@settings(max_examples=300, deadline=None)
@given(random_cnf())
def test_dpll_matches_brute_force(cnf):
    nv, clauses = cnf
    model = dpll.solve(nv, clauses)
    assert (model is not None) == brute_sat(nv, clauses)
    if model is not None:
        true = set(model)
        assert all(any(l in true for l in c) for c in clauses)


def test_dpll_reuse_with_assumptions():
    s = dpll.Dpll(3, [[1, 2], [-1, 3], [-2, -3]])
    assert s.solve([1]) is not None
    assert s.solve([1, 2]) is None
    assert s.solve([-1, -2]) is None
    assert s.solve() is not None


def test_examples_embedded():
    out = run_solver(formula(1, [[1]]), SolverConfig(solver_path="embedded"))
    assert out.status == SAT and out.model == [1]
    assert run_solver(formula(1, [[1], [-1]]), SolverConfig(solver_path="embedded")).status == UNSAT


def test_examples_external():
    out = run_solver(formula(1, [[1]]))
    assert out.status == SAT and out.model == [1]
    assert run_solver(formula(1, [[1], [-1]])).status == UNSAT


def test_embedded_gate():
    big = formula(201, [[1]])
    with pytest.raises(SolverConfigError):
        run_embedded(big)
    with pytest.raises(SolverConfigError):
        run_solver(big, SolverConfig(solver_path="embedded"))


def test_outcome_invariant():
    with pytest.raises(ValueError):
        SolveOutcome(SAT, None)
    with pytest.raises(ValueError):
        SolveOutcome(UNSAT, [1])


def test_config_invariants():
    with pytest.raises(SolverConfigError):
        SolverConfig(time_limit=0)
    with pytest.raises(SolverConfigError):
        SolverConfig(repeats=0)
    with pytest.raises(SolverConfigError):
        SolverConfig(seed_policy="always")


def test_missing_executable():
    with pytest.raises(SolverConfigError):
        run_solver(formula(1, [[1]]), SolverConfig(solver_path="/nonexistent/solver"))


def _script(tmp_path, body):
    path = tmp_path / "fake_solver"
    path.write_text(f"#!{sys.executable}\n{body}\n")
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return str(path)


def test_unparseable_output(tmp_path):
    path = _script(tmp_path, "print('hello')")
    with pytest.raises(SolverIntegrationError) as err:
        run_solver(formula(1, [[1]]), SolverConfig(solver_path=path))
    assert "hello" in err.value.raw


def test_timeout_gives_unknown(tmp_path):
    path = _script(tmp_path, "import time; time.sleep(5); print('s SATISFIABLE')")
    out = run_solver(formula(1, [[1]]), SolverConfig(solver_path=path, time_limit=0.001))
    assert out.status == UNKNOWN and out.model is None


def test_seed_flag_passed(tmp_path):
    log = tmp_path / "args"
    path = _script(tmp_path, f"import sys; open({str(log)!r}, 'w').write(' '.join(sys.argv[1:])); print('s UNSATISFIABLE')")
    cfg = SolverConfig(solver_path=path, seed_policy="per-repeat")
    assert run_solver(formula(1, [[1]]), cfg, seed=7).status == UNSAT
    assert log.read_text().startswith("--seed=7 ")


def test_env_solver(monkeypatch, tmp_path):
    path = _script(tmp_path, "print('s UNSATISFIABLE')")
    monkeypatch.setenv("EXGRAPH_SOLVER", path)
    assert solver_command(None) == [path]
    assert run_solver(formula(1, [[1]])).status == UNSAT


def test_parse_competition_output():
    status, model = parse_competition_output("c x\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 4)
    assert status == SAT and model == [1, -2, 3, -4]
    assert parse_competition_output("s UNSATISFIABLE\n", 2) == (UNSAT, None)
    assert parse_competition_output("s UNKNOWN\n", 2) == (UNKNOWN, None)
    with pytest.raises(SolverIntegrationError):
        parse_competition_output("s MAYBE\n", 2)


def test_satwrap_cli(tmp_path, capsys):
    p = tmp_path / "f.cnf"
    p.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
    assert satwrap_main([str(p)]) == 10
    assert "v -1 2" in capsys.readouterr().out.replace("\n", " ")
    assert satwrap_main([str(p), "--seed", "3"]) == 10
    p.write_text("p cnf 1 2\n1 0\n-1 0\n")
    assert satwrap_main([str(p)]) == 20


def test_end_to_end_model_validates():
    from exgraph.extremal import validate_witness
    spec = ProblemSpec(9, 12, {3, 4}, sbp="bfs-star", garnick=True, ex_prev=10)
    enc = encode(spec)
    out = run_solver(enc.formula)
    assert out.status == SAT
    d = decode_model(enc.formula, out.model)
    validate_witness(d.graph, spec, d)


def test_unsat_monotone_in_m():
    # forbid-only models: once m is unsatisfiable, so is every larger m
    statuses = [run_solver(encode(ProblemSpec(6, m, {3, 4})).formula).status for m in range(4, 10)]
    first = statuses.index(UNSAT)
    assert all(s == UNSAT for s in statuses[first:])
    assert first + 4 == 7  # ex(6; C3, C4) = 6
