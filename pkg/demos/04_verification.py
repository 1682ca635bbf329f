"""Brute-force checks: symmetries, breaker validity and fundamental regions.

Run: python demos/04_verification.py
"""
import numpy as np

from polysym.binpack import BinPackingInstance, build_model, size_boundaries
from polysym.breakers import PROFILES, Template, attach, make_family
from polysym.perm import generators, transposition
from polysym.poly import Polynomial
from polysym.verify import (
    check_fundamental_region,
    check_symmetries,
    check_theorem1,
    enumerated_optimum,
    find_linear_form,
    theorem1_witness,
)

inst = BinPackingInstance(10, (3, 3, 4, 6), 3)
model = build_model(inst)
gens = generators(inst.layout, size_boundaries(inst))
print(f"instance sizes {inst.sizes}, {inst.n} bins, {model.num_vars} variables")
print(f"generators that are symmetries: {sum(check_symmetries(gens, model))}/{len(gens)}")

opt = enumerated_optimum(model)[0]
for template in (Template.XY, Template.X2_PLUS_Y2, Template.X_PLUS_Y2):
    fam = make_family(inst, template, PROFILES["few_few"].scaled(perm_count=20), seed=0)
    w = theorem1_witness(model, fam)
    with_b = enumerated_optimum(attach(model, fam))[0]
    print(f"{template.value:<11} {fam.kept:>2} breakers  valid={check_theorem1(model, fam)}  "
          f"optimum {opt} -> {with_b}  witness y={[w[i] for i in inst.layout.y_indices()]}")

x, y = Polynomial.variable(0), Polynomial.variable(1)
rep = check_fundamental_region([transposition(2, 0, 1)], 2 * x + y**2, 2000, np.random.default_rng(0))
print(f"\nswap, h = 2x + y^2: {rep.in_region} of {rep.samples} samples strictly inside F, "
      f"{rep.boundary} on its boundary, violations "
      f"{rep.membership_mismatches + rep.overlap_violations + rep.cover_violations}")

s3 = [transposition(3, 0, 1), transposition(3, 1, 2)]
h = find_linear_form(s3, np.random.default_rng(1))
rep = check_fundamental_region(s3, h, 2000, np.random.default_rng(2))
print(f"S3, linear h = {h}: group order {rep.group_order}, passed={rep.passed}")
