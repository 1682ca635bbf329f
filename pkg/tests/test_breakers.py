import numpy as np
import pytest

from polysym.binpack import BinPackingInstance, benchmark, build_model
from polysym.breakers import (
    FEW_BUDGET,
    PROFILES,
    BreakerFamily,
    Template,
    attach,
    factor_sizes,
    generate_family,
    instantiate_template,
    load_family,
    make_family,
    random_linear,
    save_family,
    variable_budget,
)
from polysym.perm import VarLayout
from polysym.poly import PolyClass, Polynomial, apply_permutation, classify, sub

x0, x1 = Polynomial.variable(0), Polynomial.variable(1)


def test_random_linear():
    rng = np.random.default_rng(0)
    p = random_linear([3, 5, 8, 9], 3, rng)
    assert len(p) == 3 and set(p.variables().tolist()) <= {3, 5, 8, 9}
    assert np.all(p.coefficients == 1) and p.degree == 1
    assert random_linear([1, 2], 0, rng) == Polynomial()
    with pytest.raises(ValueError):
        random_linear([1, 2], 3, rng)


def test_random_linear_uniform_over_subsets():
    rng = np.random.default_rng(1)
    counts = np.zeros(5)
    for _ in range(4000):
        counts[random_linear(range(5), 2, rng).variables()] += 1
    # every variable shows up in 2/5 of the draws
    assert np.allclose(counts / 4000, 0.4, atol=0.03)


def test_budgets():
    few = PROFILES["few_few"]
    assert {t.value: variable_budget(t, few) for t in Template} == {
        "X": 10, "Y": 10, "X_PLUS_Y": 10, "X2": 9, "Y2": 9, "XY": 9,
        "X2_PLUS_Y2": 18, "X_PLUS_Y2": 16, "X2_PLUS_Y": 16,
    }
    assert variable_budget(Template.XY, PROFILES["many_few"]) == 900
    assert variable_budget(Template.X2_PLUS_Y2, PROFILES["numerous_few"]) == 7200
    assert sum(FEW_BUDGET.values()) == 10 * 3 + 9 * 3 + 18 + 16 * 2


def test_factor_sizes_caps_small_pools():
    assert factor_sizes(Template.X2, 9, {"x": 100, "y": 10}) == [[5, 4]]
    assert factor_sizes(Template.X2_PLUS_Y, 16, {"x": 100, "y": 10}) == [[6, 5], [5]]
    assert factor_sizes(Template.Y2, 9, {"x": 6, "y": 2}) == [[1, 1]]
    with pytest.raises(ValueError):
        factor_sizes(Template.Y2, 9, {"x": 6, "y": 1})


@pytest.mark.parametrize("template", list(Template))
def test_instantiate_shapes(template):
    lay = VarLayout(20, 20)
    h = instantiate_template(template, PROFILES["few_few"], lay, np.random.default_rng(3))
    assert h.variables().size == variable_budget(template, PROFILES["few_few"])
    ys = set(lay.y_indices().tolist())
    used = set(h.variables().tolist())
    kinds = {k for term in template.terms for k in term}
    assert (used <= ys) == (kinds == {"y"})
    assert bool(used & ys) == ("y" in kinds)
    degrees = set(h.term_degrees().tolist())
    assert degrees == {len(t) for t in template.terms}
    assert np.all(h.coefficients == 1)


def test_instantiate_x_few_is_ten_x_vars():
    lay = VarLayout(6, 6)
    h = instantiate_template(Template.X, PROFILES["few_few"], lay, np.random.default_rng(0))
    assert h.variables().size == 10
    assert set(h.variables().tolist()) <= set(lay.x_indices().tolist())


def test_degenerate_y_pool():
    lay = VarLayout(3, 2)
    h = instantiate_template(Template.Y2, PROFILES["few_few"], lay, np.random.default_rng(0))
    assert h == Polynomial.variable(lay.y(1)) * Polynomial.variable(lay.y(2))


def test_two_variable_toy_family():
    lay = VarLayout(0, 2)
    h = 2 * x0 + x1**2
    prof = PROFILES["few_few"].scaled(perm_count=10, generator_product_length=1)
    fam = generate_family(h, lay, (1,), prof, np.random.default_rng(0))
    assert fam.breakers == [2 * x1 + x0**2 - 2 * x0 - x1**2]
    assert fam.drawn == 10 and fam.dropped_duplicate == 9


def test_all_fixed_permutations_give_empty_family():
    lay = VarLayout(0, 2)
    prof = PROFILES["few_few"].scaled(perm_count=6)  # 50 swaps = identity
    fam = generate_family(2 * x0 + x1**2, lay, (1,), prof, np.random.default_rng(0))
    assert len(fam) == 0 and fam.dropped_zero == 6
    with pytest.raises(ValueError):
        generate_family(Polynomial(), lay, (1,), prof, np.random.default_rng(0))


@pytest.mark.parametrize("template", [Template.X_PLUS_Y2, Template.X2_PLUS_Y])
def test_mixed_filter_keeps_only_quadratic(template):
    inst = BinPackingInstance(10, (2, 3, 3, 5, 5), 4)
    prof = PROFILES["few_few"].scaled(perm_count=60)
    fam = make_family(inst, template, prof, seed=9)
    assert fam.drawn == 60
    assert fam.kept + fam.dropped_zero + fam.dropped_linear + fam.dropped_duplicate == 60
    assert all(classify(g) is PolyClass.HAS_QUADRATIC for g in fam.breakers)


@pytest.mark.parametrize("template", list(Template))
def test_breakers_equal_substitution_minus_base(template):
    inst = BinPackingInstance(10, (2, 3, 3, 5, 5, 5), 5)
    fam = make_family(inst, template, PROFILES["few_few"].scaled(perm_count=20), seed=2)
    for P, g in zip(fam.perms, fam.breakers):
        assert g == sub(apply_permutation(fam.base, P), fam.base)
        assert not g.is_zero()
    assert len(set(fam.breakers)) == len(fam.breakers)


def test_make_family_deterministic():
    inst = benchmark(3, seed=1, n_items=40)
    a = make_family(inst, Template.XY, PROFILES["few_few"], seed=5)
    b = make_family(inst, Template.XY, PROFILES["few_few"], seed=5)
    assert a.breakers == b.breakers and a.base == b.base


def test_attach():
    model = build_model(BinPackingInstance(10, (5, 5), 2))
    g = Polynomial.variable(0) - Polynomial.variable(3)
    once = attach(model, [g])
    assert once.side_constraints == (g,)
    assert attach(once, [g]).side_constraints == (g,)
    assert attach(model, BreakerFamily(base=g, perms=[], breakers=[])).side_constraints == ()
    assert model.side_constraints == ()


def test_save_load_roundtrip(tmp_path):
    inst = BinPackingInstance(10, (2, 3, 3, 5, 5, 5), 5)
    fam = make_family(inst, Template.X2_PLUS_Y2, PROFILES["few_few"], seed=4)
    save_family(fam, tmp_path / "fam.json")
    back = load_family(tmp_path / "fam.json")
    assert back.breakers == fam.breakers
    assert back.base == fam.base
    assert back.manifest() == fam.manifest()
