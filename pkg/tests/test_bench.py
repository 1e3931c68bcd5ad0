import stat
import sys

from exgraph.bench import TIMEOUT_MARK, bench, grid, run_cell
from exgraph.encoder import ProblemSpec
from exgraph.solver import SAT, UNKNOWN, UNSAT, SolverConfig

EX_34 = {5: 5, 6: 6, 7: 8, 8: 10}


def test_run_counts_follow_answer():
    sat = run_cell(ProblemSpec(7, 8, {3, 4}, sbp="bfs-star"), SolverConfig(repeats=3))
    assert sat.status == SAT and len(sat.times) == 3
    unsat = run_cell(ProblemSpec(7, 9, {3, 4}, sbp="bfs-star"), SolverConfig(repeats=3), unsat_runs=2)
    assert unsat.status == UNSAT and len(unsat.times) == 2
    one = run_cell(ProblemSpec(7, 8, {3, 4}), SolverConfig(repeats=1))
    assert len(one.times) == 1 and one.median == one.times[0]


def test_table_shape():
    specs = grid([7, 8], {3, 4}, ["none", "bfs", "bfs-star"], EX_34, unsat=True)
    assert [(s.n, s.m, s.sbp) for s in specs][:3] == [(7, 9, "none"), (7, 9, "bfs"), (7, 9, "bfs-star")]
    table = bench(specs, SolverConfig(), unsat_runs=1, title="t")
    md = table.markdown().splitlines()
    assert md[2] == "| n | none | bfs | bfs-star |"
    assert md[4].startswith("| 7 | ") and md[5].startswith("| 8 | ")
    assert all(table.cell(n, m).status == UNSAT for n in (7, 8) for m in table.modes)
    rows = table.csv().splitlines()
    assert rows[0] == "n,m,mode,status,median,runs,error" and len(rows) == 7


def test_grid_with_garnick():
    specs = grid([8], {3, 4}, ["bfs-star"], EX_34, unsat=False, bounds="garnick")
    assert specs[0].garnick and specs[0].ex_prev == 8 and specs[0].m == 10


def test_timeout_marker(tmp_path):
    path = tmp_path / "slow"
    path.write_text(f"#!{sys.executable}\nimport time\ntime.sleep(10)\n")
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    cfg = SolverConfig(solver_path=str(path), time_limit=0.2, repeats=3)
    cell = run_cell(ProblemSpec(5, 5, {3, 4}), cfg)
    assert cell.status == UNKNOWN and cell.text() == TIMEOUT_MARK
    assert len(cell.times) == 1


def test_error_is_reported_in_cell(tmp_path):
    path = tmp_path / "broken"
    path.write_text(f"#!{sys.executable}\nprint('garbage')\n")
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    table = bench([ProblemSpec(5, 5, {3, 4})], SolverConfig(solver_path=str(path)))
    cell = table.cell(5, "none")
    assert cell.error and "SolverIntegrationError" in cell.error
    assert cell.text() == TIMEOUT_MARK
    assert "garbage" not in table.markdown()
