import stat
import sys
from decimal import Decimal, getcontext

import pytest

from exgraph.extremal import (
    Ledger,
    WitnessError,
    find_ex,
    jukna_upper_bound,
    resolve_bounds,
    validate_witness,
)
from exgraph.encoder import ProblemSpec
from exgraph.graph import Graph, edge_count, is_connected
from exgraph.oracle import brute_force_ex
from exgraph.solver import UNKNOWN, SolverConfig

from known_graphs import EXTREMAL_10, P4_FIRST


def jukna_decimal(n):
    getcontext().prec = 60
    return int((Decimal(n) / 4 * (1 + Decimal(4 * n - 3).sqrt())).to_integral_value(rounding="ROUND_FLOOR"))


def test_jukna_examples():
    assert jukna_upper_bound(1) == 0
    assert jukna_upper_bound(4) == 4  # (1 + sqrt 13) = 4.605...
    with pytest.raises(ValueError):
        jukna_upper_bound(0)


def test_jukna_matches_high_precision():
    for n in range(1, 400):
        assert jukna_upper_bound(n) == jukna_decimal(n)


@pytest.mark.parametrize("n", range(1, 8))
def test_brute_force_below_jukna(n):
    assert brute_force_ex(n, {4}).ex_value <= jukna_upper_bound(n)


def test_resolve_bounds():
    assert resolve_bounds({3, 4}, "auto") == "garnick"
    assert resolve_bounds({4}, "auto") == "clapham"
    assert resolve_bounds({3}, "auto") == "none"
    with pytest.raises(ValueError):
        resolve_bounds({4}, "tight")


@pytest.mark.parametrize("forbid", [{3, 4}, {4}])
@pytest.mark.parametrize("sbp", ["none", "bfs-star"])
def test_find_ex_small_matches_brute_force(forbid, sbp):
    known = {}
    res = find_ex(6, forbid, sbp, known=known)
    assert res.complete
    for n in range(1, 7):
        assert known[n] == brute_force_ex(n, forbid).ex_value
    assert res.witness is not None and edge_count(res.witness) == res.ex_value
    assert [known[n] for n in range(1, 7)] == sorted(known[n] for n in range(1, 7))


def test_dominance():
    a, b = {}, {}
    find_ex(7, {3, 4}, known=a)
    find_ex(7, {4}, known=b)
    for n in range(1, 8):
        assert a[n] <= b[n] <= jukna_upper_bound(n)


def test_sweep_shape_and_fallback():
    res = find_ex(2, {3, 4}, "bfs-star", known={1: 0})
    # m = 0 < n - 1 is solved without symmetry breaking
    assert [(s.m, s.sbp, s.status) for s in res.timings] == [(0, "none", "sat"), (1, "bfs-star", "sat")]
    assert res.unsat_confirmed and res.ex_value == 1  # m = 2 exceeds C(2,2)
    res = find_ex(5, {3, 4}, "bfs", known={4: 3})
    assert [s.status for s in res.timings] == ["sat", "sat", "sat", "unsat"]
    assert res.ex_value == 5 and is_connected(res.witness)


def test_ledger_roundtrip(tmp_path):
    path = tmp_path / "ex.csv"
    ledger = Ledger(str(path))
    res = find_ex(5, {3, 4}, ledger=ledger)
    rows = path.read_text().splitlines()
    assert rows[0] == "n,forbid,ex,confirmed,seconds"
    assert len(rows) == 6 and rows[-1].startswith('5,"3,4",5,true,')
    assert ledger.known({3, 4}) == {1: 0, 2: 1, 3: 2, 4: 3, 5: 5}
    assert ledger.known({4}) == {}
    # the cache is used: only n = 6 is solved now
    res = find_ex(6, {3, 4}, ledger=ledger)
    assert res.ex_value == 6 and len(path.read_text().splitlines()) == 7


def _fake_solver(tmp_path):
    path = tmp_path / "slow_solver"
    path.write_text(f"#!{sys.executable}\nimport time\ntime.sleep(10)\n")
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return str(path)


def test_timeout_gives_partial_result(tmp_path):
    cfg = SolverConfig(solver_path=_fake_solver(tmp_path), time_limit=0.2)
    res = find_ex(5, {3, 4}, known={4: 3}, solver=cfg)
    assert res.ex_value is None and not res.unsat_confirmed
    assert [s.status for s in res.timings] == [UNKNOWN]


def test_validate_witness():
    spec = ProblemSpec(10, 15, {3, 4}, sbp="bfs-star")
    validate_witness(EXTREMAL_10, spec)
    with pytest.raises(WitnessError):
        validate_witness(EXTREMAL_10, spec.with_m(14))
    c4 = Graph(4, [(1, 2), (1, 3), (2, 4), (3, 4)])
    with pytest.raises(WitnessError):
        validate_witness(c4, ProblemSpec(4, 4, {4}))
    with pytest.raises(WitnessError):
        validate_witness(P4_FIRST, ProblemSpec(4, 3, sbp="bfs+"))
