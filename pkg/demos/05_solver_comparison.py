"""Branch-and-bound node counts with and without breakers on small instances.

Node counts stand in for solver work.  Run: python demos/05_solver_comparison.py
"""
import statistics
from collections import defaultdict

from polysym.binpack import benchmark, build_model
from polysym.breakers import PROFILES, Template, make_family
from polysym.solver import compare

rel = defaultdict(list)
for seed in range(5):
    inst = benchmark(3, seed=seed, n_items=6)
    model = build_model(inst)
    fams = [make_family(inst, t, PROFILES["few_few"], seed=seed) for t in Template]
    rows = compare(model, fams)
    print(f"seed {seed}: sizes {inst.sizes}, optimum {rows[0].optimum}, baseline {rows[0].nodes:,} nodes")
    for r in rows[1:]:
        rel[r.template].append(r.relative_nodes_pct)

print(f"\n{'template':<12}{'mean %':>8}{'min %':>8}{'max %':>8}")
for t, vals in rel.items():
    print(f"{t:<12}{statistics.fmean(vals):>8.1f}{min(vals):>8.1f}{max(vals):>8.1f}")
