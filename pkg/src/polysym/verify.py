"""Brute-force checks of symmetries, breaker validity and fundamental regions.

Everything here enumerates: full domain grids, group closures, orbits, set
partitions.  Arithmetic is exact (integers, ``Fraction``); the guards bound
the work and raise :class:`GuardExceeded` instead of silently sampling.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .model import IPModel
from .perm import Permutation, compose, identity, inverse
from .poly import Polynomial, evaluate, evaluate_many, permutation_difference

__all__ = [
    "GuardExceeded",
    "DEFAULT_POINT_GUARD",
    "DEFAULT_ORBIT_GUARD",
    "enumerate_points",
    "enumerated_optimum",
    "check_symmetry",
    "check_symmetries",
    "group_closure",
    "OrbitReport",
    "orbit",
    "theorem1_witness",
    "check_theorem1",
    "FundamentalRegionReport",
    "check_fundamental_region",
    "find_linear_form",
    "check_linear_existence",
    "set_partitions",
    "binpacking_optimum",
    "binpacking_optimum_with_breakers",
    "VerificationReport",
]

DEFAULT_POINT_GUARD = 2**20
DEFAULT_ORBIT_GUARD = 10**5


class GuardExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured bound."""


def enumerate_points(model: IPModel, guard: int = DEFAULT_POINT_GUARD) -> np.ndarray:
    """All of ``domain^N`` as a matrix, variable 0 most significant."""
    U = np.asarray(model.domain, dtype=np.int64)
    k, n = U.size, model.num_vars
    total = k**n
    if total > guard:
        raise GuardExceeded(f"|U|^N = {k}^{n} = {total} points exceeds the guard of {guard}")
    digits = np.arange(total, dtype=np.int64)[:, None] // (k ** np.arange(n - 1, -1, -1, dtype=np.int64))[None, :] % k
    pts = U[digits]
    if U.min() >= -128 and U.max() <= 127:
        pts = pts.astype(np.int8)
    return pts


def enumerated_optimum(model: IPModel, guard: int = DEFAULT_POINT_GUARD, points: np.ndarray | None = None):
    """``(value, optimal_points)``; ``(None, empty)`` when infeasible."""
    pts = enumerate_points(model, guard) if points is None else points
    feas = model.feasible(pts)
    if not feas.any():
        return None, pts[:0]
    vals = model.objective_values(pts[feas])
    best = int(vals.min())
    return best, pts[feas][vals == best]


def check_symmetry(perm: Permutation, model: IPModel, guard: int = DEFAULT_POINT_GUARD) -> bool:
    """``f(Px) = f(x)`` and ``feasible(Px) <=> feasible(x)`` for every grid point."""
    return check_symmetries([perm], model, guard)[0]


def check_symmetries(perms: Sequence[Permutation], model: IPModel, guard: int = DEFAULT_POINT_GUARD) -> list[bool]:
    """:func:`check_symmetry` for several permutations sharing one enumeration."""
    for perm in perms:
        if perm.size != model.num_vars:
            raise ValueError(f"permutation size {perm.size} does not match {model.num_vars} variables")
    pts = enumerate_points(model, guard)
    obj = model.objective_values(pts)
    feas = model.feasible(pts)
    out = []
    for perm in perms:
        moved = perm.act(pts)
        out.append(
            bool(np.array_equal(obj, model.objective_values(moved)) and np.array_equal(feas, model.feasible(moved)))
        )
    return out


def group_closure(generators: Sequence[Permutation], guard: int = DEFAULT_ORBIT_GUARD) -> list[Permutation]:
    """All elements of the generated group, identity first."""
    if not generators:
        raise ValueError("need at least one generator (or the identity) to know the degree")
    size = generators[0].size
    gens = [Permutation(g.image, check=False) for g in generators]
    start = identity(size)
    seen = {start.key(): start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = compose(p, g)
            key = q.key()
            if key not in seen:
                if len(seen) >= guard:
                    raise GuardExceeded(f"group closure exceeds the guard of {guard} elements")
                seen[key] = q
                queue.append(q)
    return list(seen.values())


@dataclass(frozen=True)
class OrbitReport:
    orbit: frozenset
    witness: tuple
    witness_value: Fraction | int | None


def orbit(
    x: Sequence,
    generators: Sequence[Permutation],
    h: Polynomial | None = None,
    guard: int = DEFAULT_ORBIT_GUARD,
) -> OrbitReport:
    """Closure of ``x`` under the generators and their inverses.

    The witness maximises ``h`` over the orbit (first in BFS order on ties);
    without ``h`` it is ``x`` itself.
    """
    start = tuple(x)
    moves = list(generators) + [inverse(g) for g in generators]
    seen = {start: None}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for g in moves:
            q = g.act(p)
            if q not in seen:
                if len(seen) >= guard:
                    raise GuardExceeded(f"orbit exceeds the guard of {guard} points")
                seen[q] = None
                queue.append(q)
    order = list(seen)
    if h is None:
        return OrbitReport(frozenset(order), start, None)
    values = [evaluate(h, p) for p in order]
    best = max(values)
    return OrbitReport(frozenset(order), order[values.index(best)], best)


def _breakers_of(family) -> list[Polynomial]:
    return list(getattr(family, "breakers", family))


def theorem1_witness(model: IPModel, family, guard: int = DEFAULT_POINT_GUARD):
    """An optimal point of the base model satisfying every breaker, or ``None``."""
    base = model.base()
    value, optimal = enumerated_optimum(base, guard)
    if value is None:
        return None
    ok = np.ones(optimal.shape[0], dtype=bool)
    for g in _breakers_of(family):
        ok &= evaluate_many(g, optimal) <= 0
    hits = np.flatnonzero(ok)
    return tuple(optimal[hits[0]].tolist()) if hits.size else None


def check_theorem1(model: IPModel, family, guard: int = DEFAULT_POINT_GUARD) -> bool:
    """Some optimal solution satisfies all breakers of the family at once.

    An infeasible base model has no optimal solution; that is reported as
    ``True`` only when the family is empty.
    """
    breakers = _breakers_of(family)
    if not breakers:
        return True
    return theorem1_witness(model, breakers, guard) is not None


@dataclass
class FundamentalRegionReport:
    samples: int
    group_order: int
    in_region: int = 0
    boundary: int = 0
    # (a) breaker polynomials disagree with direct evaluation of h on the orbit
    membership_mismatches: int = 0
    # (b) a sample in both F and PF for some P != id
    overlap_violations: int = 0
    # (c) the orbit maximiser fails the closed region inequalities
    cover_violations: int = 0
    # (d) nonidentity elements whose L_P no sample hit
    unwitnessed: list[str] = field(default_factory=list)

    @property
    def precondition_witnessed(self) -> bool:
        return not self.unwitnessed

    @property
    def passed(self) -> bool:
        return self.membership_mismatches == 0 and self.overlap_violations == 0 and self.cover_violations == 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["precondition_witnessed"] = self.precondition_witnessed
        d["passed"] = self.passed
        return d


def _random_rational(rng: np.random.Generator, n: int, scale: int = 1000, max_den: int = 97) -> tuple:
    num = rng.integers(-scale, scale + 1, size=n).tolist()
    den = rng.integers(1, max_den + 1, size=n).tolist()
    return tuple(Fraction(a, b) for a, b in zip(num, den))


def check_fundamental_region(
    generators: Sequence[Permutation],
    h: Polynomial,
    samples: int,
    rng: np.random.Generator,
    guard: int = DEFAULT_ORBIT_GUARD,
    points: Iterable[Sequence] | None = None,
) -> FundamentalRegionReport:
    """Sampled checks that ``F = {x : h(Px) < h(x) for all P != id}`` tiles space.

    Membership of a sample is decided twice: through the breaker polynomials
    ``h(Px) - h(x)`` and by evaluating ``h`` on the orbit points directly.
    """
    group = group_closure(generators, guard)
    n = group[0].size
    others = group[1:]
    inverses = [inverse(p) for p in group]
    diffs = [permutation_difference(h, p) for p in others]
    report = FundamentalRegionReport(samples=samples, group_order=len(group))
    witnessed = [False] * len(others)
    pts = list(points) if points is not None else [_random_rational(rng, n) for _ in range(samples)]
    report.samples = len(pts)

    def in_region(z) -> bool:
        hz = evaluate(h, z)
        return all(evaluate(h, p.act(z)) < hz for p in others)

    for x in pts:
        hx = evaluate(h, x)
        g_vals = [evaluate(g, x) for g in diffs]
        direct = [evaluate(h, p.act(x)) - hx for p in others]
        if g_vals != direct:
            report.membership_mismatches += 1
        for t, v in enumerate(g_vals):
            if v < 0:
                witnessed[t] = True
        inside = all(v < 0 for v in g_vals)
        if inside:
            report.in_region += 1
        elif all(v <= 0 for v in g_vals):
            report.boundary += 1
        # (b) x in F and x in PF, i.e. P^{-1} x in F
        if inside:
            for p_inv in inverses[1:]:
                if in_region(p_inv.act(x)):
                    report.overlap_violations += 1
                    break
        # (c) choose P with h(P^{-1} x) maximal; P^{-1} x must satisfy the closed inequalities
        vals = [evaluate(h, p_inv.act(x)) for p_inv in inverses]
        z = inverses[vals.index(max(vals))].act(x)
        hz = evaluate(h, z)
        if any(evaluate(h, p.act(z)) > hz for p in others):
            report.cover_violations += 1
    report.unwitnessed = [others[t].dump().strip().replace("\n", ", ") for t, w in enumerate(witnessed) if not w]
    return report


def find_linear_form(
    generators: Sequence[Permutation],
    rng: np.random.Generator,
    retries: int = 50,
    guard: int = DEFAULT_ORBIT_GUARD,
    extra_points: int = 8,
) -> Polynomial | None:
    """Random linear form with distinct integer coefficients and every ``L_P`` witnessed."""
    group = group_closure(generators, guard)
    n = group[0].size
    others = group[1:]
    for _ in range(retries):
        coefs = rng.choice(np.arange(-10 * n - 10, 10 * n + 11), size=n, replace=False)
        h = Polynomial.linear(np.arange(n), coefs)
        if not others:
            return h
        # the coefficient vector itself is a witness by the rearrangement inequality
        candidates = [tuple(int(c) for c in coefs)] + [_random_rational(rng, n) for _ in range(extra_points)]
        diffs = [permutation_difference(h, p) for p in others]
        if all(any(evaluate(g, c) < 0 for c in candidates) for g in diffs):
            return h
    return None


def check_linear_existence(
    generators: Sequence[Permutation], rng: np.random.Generator, retries: int = 50, guard: int = DEFAULT_ORBIT_GUARD
) -> bool | None:
    """``True`` once a witnessing linear form is found; ``None`` if retries run out."""
    return True if find_linear_form(generators, rng, retries, guard) is not None else None


def set_partitions(items: int) -> Iterator[list[int]]:
    """Restricted growth strings: ``labels[i]`` is the block of item ``i``."""
    if items == 0:
        yield []
        return
    labels = [0] * items

    def rec(i: int, blocks: int):
        if i == items:
            yield list(labels)
            return
        for b in range(blocks + 1):
            labels[i] = b
            yield from rec(i + 1, max(blocks, b + 1))

    yield from rec(1, 1)


def _fits(inst, labels) -> int | None:
    loads: dict[int, int] = {}
    for s, b in zip(inst.sizes, labels):
        loads[b] = loads.get(b, 0) + s
        if loads[b] > inst.capacity:
            return None
    return len(loads)


def binpacking_optimum(inst) -> int | None:
    """Fewest bins over all set partitions of the items (independent of the IP)."""
    best = None
    for labels in set_partitions(inst.m):
        used = _fits(inst, labels)
        if used is not None and used <= inst.n and (best is None or used < best):
            best = used
    return best


def binpacking_points(inst, value: int) -> Iterator[np.ndarray]:
    """Every feasible 0/1 point of the bin-packing IP with ``sum y = value``."""
    layout = inst.layout
    R = layout.rows
    for labels in set_partitions(inst.m):
        used = _fits(inst, labels)
        if used is None or used > value or value > inst.n:
            continue
        for bins in itertools.permutations(range(inst.n), used):
            free = [k for k in range(inst.n) if k not in bins]
            for extra in itertools.combinations(free, value - used):
                x = np.zeros(layout.size, dtype=np.int8)
                for k in (*bins, *extra):
                    x[k * R] = 1
                for i, b in enumerate(labels):
                    x[bins[b] * R + i + 1] = 1
                yield x


def binpacking_optimum_with_breakers(inst, breakers: Sequence[Polynomial], batch: int = 4096) -> int | None:
    """Smallest objective among feasible points that satisfy every breaker."""
    breakers = list(breakers)
    for value in range(0, inst.n + 1):
        buf = []
        for x in binpacking_points(inst, value):
            buf.append(x)
            if len(buf) == batch:
                if _any_satisfies(np.array(buf), breakers):
                    return value
                buf = []
        if buf and _any_satisfies(np.array(buf), breakers):
            return value
    return None


def _any_satisfies(points: np.ndarray, breakers: Sequence[Polynomial]) -> bool:
    ok = np.ones(points.shape[0], dtype=bool)
    for g in breakers:
        ok &= evaluate_many(g, points) <= 0
        if not ok.any():
            return False
    return bool(ok.any())


@dataclass
class VerificationReport:
    guard_settings: dict
    checks: list[dict] = field(default_factory=list)

    def add(self, name: str, result, instance: str | None = None, seed: int | None = None, witness=None, **extra) -> None:
        entry = {"name": name, "instance": instance, "seed": seed, "result": result}
        if witness is not None:
            entry["witness"] = list(witness)
        entry.update(extra)
        self.checks.append(entry)

    @property
    def failed(self) -> bool:
        return any(c["result"] is False for c in self.checks)

    def to_json(self) -> str:
        return json.dumps({"checks": self.checks, "guard_settings": self.guard_settings}, indent=1, default=str) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())
