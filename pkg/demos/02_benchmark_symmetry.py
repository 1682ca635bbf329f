"""A full-size three-class benchmark instance and the size of its symmetry group.

Run: python demos/02_benchmark_symmetry.py
"""
import time

from polysym.binpack import (
    benchmark,
    build_model,
    first_fit_decreasing,
    group_order_log10,
    lower_bound,
    size_boundaries,
)
from polysym.perm import generator_specs

t0 = time.perf_counter()
inst = benchmark(3, seed=12300)
bounds = size_boundaries(inst)
print(f"{inst.m} items in {inst.n} bins of capacity {inst.capacity}")
print(f"size classes {sorted(set(inst.sizes))} with counts {bounds.counts}")
print(f"boundaries (cumulative form) {bounds.cumulative()}")

model = build_model(inst)
print(f"IP: {model.num_vars:,} binaries, {len(model.constraints):,} rows")

specs = generator_specs(inst.layout, bounds.indices)
print(f"{len(specs)} generators (bin swaps plus item swaps inside each class)")
print(f"|G| = n! * prod(class counts!) ~ 10^{group_order_log10(inst):.2f}")

print(f"bins needed: lower bound {lower_bound(inst)}, first-fit decreasing {first_fit_decreasing(inst)}")
print(f"({time.perf_counter() - t0:.1f} s)")
