"""Breaker families for every template on a desk-sized instance, then one at full size.

Run: python demos/03_breaker_families.py [--full]
"""
import sys
import time

from polysym.binpack import benchmark
from polysym.breakers import PROFILES, Template, make_family

inst = benchmark(3, seed=6, n_items=60)
print(f"desk-scale instance: {inst.m} items, {inst.layout.size} variables")
print(f"{'template':<12}{'profile':<10}{'kept':>6}{'zero':>6}{'linear':>8}{'dup':>5}  first breaker")
for template in Template:
    fam = make_family(inst, template, PROFILES["few_few"], seed=1)
    first = str(fam.breakers[0]) if fam.breakers else "-"
    if len(first) > 50:
        first = first[:47] + "..."
    print(
        f"{template.value:<12}{'few_few':<10}{fam.kept:>6}{fam.dropped_zero:>6}"
        f"{fam.dropped_linear:>8}{fam.dropped_duplicate:>5}  {first}"
    )

if "--full" in sys.argv:
    # at full size a product of 50 generators rarely touches the few
    # variables of h, so most draws give the zero polynomial
    big = benchmark(3, seed=12300)
    for name in ("few_few", "few_many", "many_few"):
        t0 = time.perf_counter()
        fam = make_family(big, Template.XY, PROFILES[name], seed=1)
        print(f"full size XY/{name}: kept {fam.kept} of {fam.drawn} in {time.perf_counter() - t0:.1f} s")
