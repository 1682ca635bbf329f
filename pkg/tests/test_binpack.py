import itertools
import json
import math

import numpy as np
import pytest

from polysym.binpack import (
    TABLE1,
    BinPackingInstance,
    benchmark,
    build_model,
    first_fit_decreasing,
    generate_benchmark,
    group_order_log10,
    load_instance,
    lower_bound,
    save_instance,
    size_boundaries,
    symmetry_group_order,
)
from polysym.model import Sense
from polysym.perm import generators
from polysym.verify import binpacking_optimum, check_symmetries, enumerated_optimum


def brute_force_optimum(inst):
    """Plain loop over every 0/1 vector of the IP; separate from the numpy enumerator."""
    model = build_model(inst)
    best = None
    for bits in itertools.product((0, 1), repeat=model.num_vars):
        ok = True
        for con in model.constraints:
            act = sum(c * bits[i] for i, c in zip(con.indices.tolist(), con.coefs.tolist()))
            if (con.sense is Sense.LE and act > con.rhs) or (con.sense is Sense.EQ and act != con.rhs):
                ok = False
                break
        if ok:
            val = sum(bits[i] for i in inst.layout.y_indices().tolist())
            best = val if best is None else min(best, val)
    return best


def test_build_model_counts():
    inst = BinPackingInstance(10, (5, 5), 2)
    model = build_model(inst)
    assert model.num_vars == 6
    caps = [c for c in model.constraints if c.sense is Sense.LE]
    assigns = [c for c in model.constraints if c.sense is Sense.EQ]
    assert len(caps) == 2 and len(assigns) == 2
    assert caps[0].as_dict() == {0: -10, 1: 5, 2: 5}
    assert assigns[1].as_dict() == {2: 1, 5: 1}
    assert str(model.objective) == "+1 x[0] +1 x[3]"


@pytest.mark.parametrize(
    "cap,sizes,bins,expected",
    [(10, (5, 5), 2, 1), (10, (6, 6, 6), 3, 3)],
)
def test_build_model_optimum_by_enumeration(cap, sizes, bins, expected):
    inst = BinPackingInstance(cap, sizes, bins)
    assert brute_force_optimum(inst) == expected
    assert enumerated_optimum(build_model(inst))[0] == expected


def test_instance_validation():
    with pytest.raises(ValueError):
        BinPackingInstance(10, (3, 2), 2)
    with pytest.raises(ValueError):
        BinPackingInstance(10, (11,), 1)


def test_size_boundaries_examples():
    assert size_boundaries((1, 1, 2)).indices == (1, 3, 4)
    assert size_boundaries((7,) * 5).indices == (1, 6)
    b = size_boundaries((49,) * 688 + (50,) * 632 + (51,) * 680)
    assert b.indices == (1, 689, 1321, 2001)
    assert b.cumulative() == (0, 688, 1320, 2000)
    assert b.counts == (688, 632, 680)


@pytest.mark.parametrize("cls", sorted(TABLE1))
def test_table1_families(cls):
    items, (lo, hi) = TABLE1[cls]
    inst = benchmark(cls, seed=5)
    assert inst.m == inst.n == items
    assert lo <= min(inst.sizes) and max(inst.sizes) <= hi
    assert inst.capacity == 100
    assert list(inst.sizes) == sorted(inst.sizes)
    assert len(size_boundaries(inst).counts) == cls


def test_generate_benchmark_edge_cases():
    inst = generate_benchmark(1, 4, (50, 50), 100, rng=0)
    assert inst.sizes == (50, 50, 50, 50)
    with pytest.raises(ValueError):
        generate_benchmark(1, 4, (51, 50), 100, rng=0)
    with pytest.raises(ValueError):
        generate_benchmark(2, 4, (50, 50), 100, rng=0)


def test_generate_benchmark_is_reproducible(tmp_path):
    a, b = benchmark(5, seed=3), benchmark(5, seed=3)
    save_instance(a, tmp_path / "a.json")
    save_instance(b, tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert load_instance(tmp_path / "a.json") == a
    assert list(json.loads((tmp_path / "a.json").read_text())) == ["capacity", "sizes", "bins", "seed", "interval", "class_count"]


def test_group_order_small():
    assert symmetry_group_order(BinPackingInstance(10, (5,), 1)) == 1
    assert symmetry_group_order(BinPackingInstance(10, (5, 5), 2)) == 4


def test_group_order_three_class_magnitude():
    inst = BinPackingInstance(100, (49,) * 688 + (50,) * 632 + (51,) * 680, 2000)
    exact = group_order_log10(inst)
    # Stirling bounds: sqrt(2 pi k)(k/e)^k <= k! <= e^{1/(12k)} sqrt(2 pi k)(k/e)^k
    def stirling(k):
        return (0.5 * math.log(2 * math.pi * k) + k * math.log(k / math.e)) / math.log(10)

    lo = sum(stirling(k) for k in (2000, 688, 632, 680))
    hi = lo + sum(1 / (12 * k) for k in (2000, 688, 632, 680)) / math.log(10)
    assert lo <= exact <= hi
    assert 10520 <= exact <= 10522


def test_group_order_matches_closure_on_tiny_instance():
    from polysym.verify import group_closure

    inst = BinPackingInstance(10, (3, 3, 5), 3)
    gens = generators(inst.layout, size_boundaries(inst))
    assert len(group_closure(gens)) == symmetry_group_order(inst) == 6 * 2


def test_bounds_sandwich_exhaustive_optimum():
    rng = np.random.default_rng(4)
    for _ in range(25):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(1, 4))
        cap = int(rng.integers(4, 11))
        sizes = tuple(sorted(rng.integers(1, cap + 1, size=m).tolist()))
        inst = BinPackingInstance(cap, sizes, n)
        opt = enumerated_optimum(build_model(inst))[0]
        assert opt == binpacking_optimum(inst)
        if opt is not None:
            assert lower_bound(inst) <= opt <= first_fit_decreasing(inst)


@pytest.mark.parametrize("sizes,bins", [((4, 4, 6), 3), ((5, 5, 5, 5), 2), ((2, 3, 3, 8), 3), ((5,) * 9, 2)])
def test_generators_are_symmetries(sizes, bins):
    inst = BinPackingInstance(10, sizes, bins)
    model = build_model(inst)
    assert model.num_vars <= 20
    assert all(check_symmetries(generators(inst.layout, size_boundaries(inst)), model))
