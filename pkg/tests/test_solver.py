import csv
import io

import numpy as np
import pytest

from polysym.binpack import BinPackingInstance, build_model
from polysym.breakers import PROFILES, Template, attach, make_family
from polysym.model import IPModel, LinearConstraint, toy_model
from polysym.poly import Polynomial
from polysym.solver import STATS_COLUMNS, compare, solve, write_stats_csv
from polysym.verify import binpacking_optimum, binpacking_optimum_with_breakers, enumerated_optimum


def test_toy():
    st = solve(toy_model())
    assert st.optimum == 1
    assert st.proof in {(1, 0), (0, 1)}
    assert st.incumbent_updates >= 1


def test_infeasible():
    model = IPModel(2, Polynomial.linear([0, 1]), (LinearConstraint.from_dict({0: 1, 1: 1}, ">=", 3),))
    st = solve(model)
    assert st.optimum is None and st.infeasible


def test_side_constraint_infeasible_constant():
    model = toy_model().with_side_constraints([Polynomial.constant(1)])
    assert solve(model).optimum is None


def test_rejects_non_binary():
    with pytest.raises(ValueError):
        solve(IPModel(1, Polynomial.variable(0), (), domain=(0, 1, 2)))


def test_node_limit():
    inst = BinPackingInstance(10, (3, 3, 4, 4, 6), 5)
    st = solve(build_model(inst), node_limit=5)
    assert st.node_limit_hit and st.nodes_explored <= 6


@pytest.mark.parametrize("seed", range(12))
def test_matches_oracles(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 5))
    n = int(rng.integers(1, 4))
    cap = int(rng.integers(4, 11))
    inst = BinPackingInstance(cap, tuple(sorted(rng.integers(1, cap + 1, size=m).tolist())), n)
    model = build_model(inst)
    st = solve(model)
    assert st.optimum == enumerated_optimum(model)[0] == binpacking_optimum(inst)
    if st.proof is not None:
        assert model.feasible(np.array([st.proof]))[0]


def test_breakers_against_oracle():
    inst = BinPackingInstance(10, (2, 3, 3, 4, 5), 4)
    model = build_model(inst)
    for t in Template:
        fam = make_family(inst, t, PROFILES["few_few"].scaled(perm_count=10), seed=7)
        st = solve(attach(model, fam))
        assert st.optimum == binpacking_optimum_with_breakers(inst, fam.breakers)
        assert st.optimum == binpacking_optimum(inst)


def test_determinism():
    inst = BinPackingInstance(10, (2, 3, 3, 4, 5), 4)
    a, b = solve(build_model(inst)), solve(build_model(inst))
    assert (a.nodes_explored, a.incumbent_updates, a.proof) == (b.nodes_explored, b.incumbent_updates, b.proof)


def test_compare_and_csv(tmp_path):
    inst = BinPackingInstance(10, (2, 3, 3, 4, 5), 4)
    fam = make_family(inst, Template.XY, PROFILES["few_few"], seed=1)
    rows = compare(build_model(inst), [fam])
    assert rows[0].config_id == "baseline" and rows[0].relative_nodes_pct == 100.0
    assert rows[1].relative_nodes_pct == pytest.approx(100 * rows[1].nodes / rows[0].nodes)
    text = write_stats_csv(rows, tmp_path / "s.csv")
    parsed = list(csv.reader(io.StringIO((tmp_path / "s.csv").read_text())))
    assert parsed[0] == STATS_COLUMNS and len(parsed) == 3
    assert text == (tmp_path / "s.csv").read_text()


def test_csv_infeasible_marker():
    model = IPModel(2, Polynomial.linear([0, 1]), (LinearConstraint.from_dict({0: 1, 1: 1}, ">=", 3),))
    assert "infeasible" in write_stats_csv(compare(model))
