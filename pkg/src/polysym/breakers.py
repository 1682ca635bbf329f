"""Random base polynomials from templates and the breaker families they induce.

For a base polynomial ``h`` and a symmetry ``P`` the inequality
``h(Px) - h(x) <= 0`` keeps at least one optimal solution, and so does any
family of such inequalities sharing the same ``h``.
"""
from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .model import IPModel
from .perm import Permutation, VarLayout, random_generator_product
from .poly import Polynomial, PolyClass, classify, mul, parse, permutation_difference, render

__all__ = [
    "Template",
    "SizeProfile",
    "PROFILES",
    "BreakerFamily",
    "variable_budget",
    "factor_sizes",
    "random_linear",
    "instantiate_template",
    "generate_family",
    "make_family",
    "attach",
    "save_family",
    "load_family",
]

log = logging.getLogger(__name__)


class Template(str, enum.Enum):
    X = "X"
    Y = "Y"
    X_PLUS_Y = "X_PLUS_Y"
    X2 = "X2"
    Y2 = "Y2"
    XY = "XY"
    X2_PLUS_Y2 = "X2_PLUS_Y2"
    X_PLUS_Y2 = "X_PLUS_Y2"
    X2_PLUS_Y = "X2_PLUS_Y"

    @property
    def category(self) -> str:
        return _CATEGORY[self]

    @property
    def terms(self) -> tuple[tuple[str, ...], ...]:
        """Sum of products; each factor is an x- or y-linear form."""
        return _TERMS[self]


_TERMS = {
    Template.X: (("x",),),
    Template.Y: (("y",),),
    Template.X_PLUS_Y: (("x",), ("y",)),
    Template.X2: (("x", "x"),),
    Template.Y2: (("y", "y"),),
    Template.XY: (("x", "y"),),
    Template.X2_PLUS_Y2: (("x", "x"), ("y", "y")),
    Template.X_PLUS_Y2: (("x",), ("y", "y")),
    Template.X2_PLUS_Y: (("x", "x"), ("y",)),
}
_CATEGORY = {
    **{t: "linear" for t in (Template.X, Template.Y, Template.X_PLUS_Y)},
    **{t: "quadratic" for t in (Template.X2, Template.Y2, Template.XY, Template.X2_PLUS_Y2)},
    **{t: "mixed" for t in (Template.X_PLUS_Y2, Template.X2_PLUS_Y)},
}
# distinct variables per template at the "few variables" size
FEW_BUDGET = {
    Template.X: 10,
    Template.Y: 10,
    Template.X_PLUS_Y: 10,
    Template.X2: 9,
    Template.Y2: 9,
    Template.XY: 9,
    Template.X2_PLUS_Y2: 18,
    Template.X_PLUS_Y2: 16,
    Template.X2_PLUS_Y: 16,
}


@dataclass(frozen=True)
class SizeProfile:
    label: str
    target_vars: int
    perm_count: int
    generator_product_length: int = 50

    def scaled(self, **changes) -> "SizeProfile":
        return replace(self, **changes)


PROFILES = {
    "few_few": SizeProfile("few_few", 10, 50),
    "few_many": SizeProfile("few_many", 10, 500),
    "many_few": SizeProfile("many_few", 1000, 50),
    "numerous_few": SizeProfile("numerous_few", 4000, 50),
}


def variable_budget(template: Template, profile: SizeProfile) -> int:
    """Distinct variables for ``template``: the few-size count scaled by ``target_vars / 10``."""
    return max(1, round(FEW_BUDGET[Template(template)] * profile.target_vars / 10))


def _even_split(total: int, parts: int) -> list[int]:
    q, r = divmod(total, parts)
    return [q + 1 if i < r else q for i in range(parts)]


def factor_sizes(template: Template, budget: int, pools: dict[str, int]) -> list[list[int]]:
    """Support size of every factor, mirroring ``template.terms``.

    The budget is split near-evenly over all factors (larger parts first).  If
    the factors of one kind ask for more variables than its pool holds, that
    kind's pool is split evenly among them instead.
    """
    template = Template(template)
    kinds = [k for term in template.terms for k in term]
    sizes = _even_split(budget, len(kinds))
    for kind in ("x", "y"):
        pos = [i for i, k in enumerate(kinds) if k == kind]
        if not pos:
            continue
        pool = pools[kind]
        if pool < len(pos):
            raise ValueError(f"{kind}-pool of {pool} variables cannot hold {len(pos)} distinct factors")
        if sum(sizes[i] for i in pos) > pool:
            for i, s in zip(pos, _even_split(pool, len(pos))):
                sizes[i] = s
        for i in pos:
            sizes[i] = max(sizes[i], 1)
    out, it = [], iter(sizes)
    for term in template.terms:
        out.append([next(it) for _ in term])
    return out


def random_linear(var_pool: Sequence[int] | np.ndarray, count: int, rng: np.random.Generator) -> Polynomial:
    """Sum of ``count`` distinct pool variables chosen uniformly, coefficient 1 each."""
    pool = np.asarray(var_pool, dtype=np.int64)
    if count < 0 or count > pool.size:
        raise ValueError(f"cannot draw {count} distinct variables from a pool of {pool.size}")
    if count == 0:
        return Polynomial()
    return Polynomial.linear(np.sort(rng.choice(pool, size=count, replace=False)))


def instantiate_template(
    template: Template,
    profile: SizeProfile,
    layout: VarLayout,
    rng: np.random.Generator,
    budget: int | None = None,
) -> Polynomial:
    """Random base polynomial of the given shape.

    Each factor is a 0/1 linear form; factors of the same kind get disjoint
    supports, so squares are products of two different linear forms.
    """
    template = Template(template)
    pools = {"x": layout.x_indices(), "y": layout.y_indices()}
    budget = variable_budget(template, profile) if budget is None else budget
    sizes = factor_sizes(template, budget, {k: v.size for k, v in pools.items()})
    # one draw per kind keeps supports of that kind disjoint
    need = {"x": 0, "y": 0}
    for term, term_sizes in zip(template.terms, sizes):
        for kind, s in zip(term, term_sizes):
            need[kind] += s
    drawn = {}
    for kind in ("x", "y"):
        if need[kind]:
            drawn[kind] = rng.choice(pools[kind], size=need[kind], replace=False)
    offset = {"x": 0, "y": 0}
    h = Polynomial()
    for term, term_sizes in zip(template.terms, sizes):
        prod = Polynomial.constant(1)
        for kind, s in zip(term, term_sizes):
            support = np.sort(drawn[kind][offset[kind] : offset[kind] + s])
            offset[kind] += s
            prod = mul(prod, Polynomial.linear(support))
        h = h + prod
    return h


@dataclass
class BreakerFamily:
    """Breakers ``h(P_t x) - h(x) <= 0`` kept from ``drawn`` sampled permutations.

    ``perms[t]`` is the permutation that produced ``breakers[t]``.
    """

    base: Polynomial
    perms: list[Permutation]
    breakers: list[Polynomial]
    template: Template | None = None
    profile: SizeProfile | None = None
    seed: int | None = None
    instance_id: str | None = None
    drawn: int = 0
    dropped_zero: int = 0
    dropped_linear: int = 0
    dropped_duplicate: int = 0
    extra: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.breakers)

    @property
    def kept(self) -> int:
        return len(self.breakers)

    def manifest(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "template": self.template.value if self.template else None,
            "profile": self.profile.label if self.profile else None,
            "perm_count": self.profile.perm_count if self.profile else None,
            "target_vars": self.profile.target_vars if self.profile else None,
            "generator_product_length": self.profile.generator_product_length if self.profile else None,
            "seed": self.seed,
            "drawn": self.drawn,
            "kept": self.kept,
            "dropped_zero": self.dropped_zero,
            "dropped_linear": self.dropped_linear,
            "dropped_duplicate": self.dropped_duplicate,
            "base_terms": len(self.base),
            "base_vars": int(self.base.variables().size),
            "base": render(self.base) if len(self.base) <= 2000 else None,
        }


def generate_family(
    h: Polynomial,
    layout: VarLayout,
    boundaries,
    profile: SizeProfile,
    rng: np.random.Generator,
    *,
    template: Template | None = None,
    dedupe: bool = True,
) -> BreakerFamily:
    """Sample ``profile.perm_count`` generator products and keep the useful breakers.

    Zero breakers are dropped; for mixed templates breakers without a
    quadratic term are dropped as well.
    """
    if h.is_zero():
        raise ValueError("base polynomial must be nonzero")
    need_quadratic = template is not None and Template(template).category == "mixed"
    fam = BreakerFamily(base=h, perms=[], breakers=[], template=Template(template) if template else None, profile=profile)
    seen: set[Polynomial] = set()
    for _ in range(profile.perm_count):
        perm = random_generator_product(layout, boundaries, profile.generator_product_length, rng)
        fam.drawn += 1
        g = permutation_difference(h, perm)
        kind = classify(g)
        if kind is PolyClass.ZERO:
            fam.dropped_zero += 1
            continue
        if need_quadratic and kind is not PolyClass.HAS_QUADRATIC:
            fam.dropped_linear += 1
            continue
        if dedupe and g in seen:
            fam.dropped_duplicate += 1
            continue
        seen.add(g)
        fam.perms.append(perm)
        fam.breakers.append(g)
    log.debug("family %s/%s: kept %d of %d", template, profile.label, fam.kept, fam.drawn)
    return fam


def make_family(inst, template: Template, profile: SizeProfile, seed: int) -> BreakerFamily:
    """Base polynomial and family for a bin-packing instance from one seed."""
    from .binpack import size_boundaries

    rng = np.random.default_rng(seed)
    layout = inst.layout
    h = instantiate_template(template, profile, layout, rng)
    fam = generate_family(h, layout, size_boundaries(inst), profile, rng, template=template)
    fam.seed = seed
    fam.instance_id = inst.instance_id
    return fam


def attach(model: IPModel, family: BreakerFamily | Sequence[Polynomial]) -> IPModel:
    breakers = family.breakers if isinstance(family, BreakerFamily) else family
    return model.with_side_constraints(breakers)


def _sidecar(path: Path) -> Path:
    return path.with_suffix(".breakers")


def save_family(family: BreakerFamily, path: str | Path) -> Path:
    """Write the JSON manifest at ``path`` and one breaker per line next to it."""
    path = Path(path)
    side = _sidecar(path)
    data = family.manifest()
    data["breakers_file"] = side.name
    path.write_text(json.dumps(data, indent=1) + "\n")
    with side.open("w") as fh:
        for g in family.breakers:
            fh.write(render(g))
            fh.write("\n")
    if data["base"] is None:
        path.with_suffix(".base").write_text(render(family.base) + "\n")
    return side


def load_family(path: str | Path) -> BreakerFamily:
    path = Path(path)
    data = json.loads(path.read_text())
    side = path.parent / data.get("breakers_file", _sidecar(path).name)
    breakers = [parse(line) for line in side.read_text().splitlines() if line.strip()]
    base_text = data.get("base")
    if base_text is None and path.with_suffix(".base").exists():
        base_text = path.with_suffix(".base").read_text()
    profile = None
    if data.get("profile"):
        profile = SizeProfile(
            data["profile"],
            data.get("target_vars") or PROFILES.get(data["profile"], PROFILES["few_few"]).target_vars,
            data.get("perm_count") or 0,
            data.get("generator_product_length") or 50,
        )
    return BreakerFamily(
        base=parse(base_text) if base_text else Polynomial(),
        perms=[],
        breakers=breakers,
        template=Template(data["template"]) if data.get("template") else None,
        profile=profile,
        seed=data.get("seed"),
        instance_id=data.get("instance_id"),
        drawn=data.get("drawn", 0),
        dropped_zero=data.get("dropped_zero", 0),
        dropped_linear=data.get("dropped_linear", 0),
        dropped_duplicate=data.get("dropped_duplicate", 0),
    )
