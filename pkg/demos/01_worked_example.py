"""Breakers from three base polynomials under the swap of two variables.

Run: python demos/01_worked_example.py
"""
from polysym.perm import transposition
from polysym.poly import Polynomial, evaluate, permutation_difference, render

x, y = Polynomial.variable(0), Polynomial.variable(1)
swap = transposition(2, 0, 1)

for h in (2 * x + y**2, x**3 - 3 * x, 2 * x + y):
    g = permutation_difference(h, swap)
    print(f"h = {render(h)}")
    print(f"  breaker g = h(Px) - h(x) = {render(g)}  (keep points with g <= 0)")
    for point in ((1, 0), (0, 1)):
        v = evaluate(g, point)
        print(f"  g{point} = {v:>3}  -> {'kept' if v <= 0 else 'cut'}")
    print()

# The swap maps (1, 0) to (0, 1); each breaker keeps one and cuts the other,
# which is exactly what a symmetry breaker should do.
