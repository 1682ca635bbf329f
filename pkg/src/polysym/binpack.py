"""0-1 bin packing: instances, near half-capacity benchmarks and the IP model."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .model import IPModel, LinearConstraint, Sense
from .perm import VarLayout
from .poly import Polynomial

__all__ = [
    "TABLE1",
    "DEFAULT_CAPACITY",
    "BinPackingInstance",
    "SizeBoundaries",
    "size_boundaries",
    "generate_benchmark",
    "benchmark",
    "build_model",
    "symmetry_group_order",
    "group_order_log10",
    "first_fit_decreasing",
    "lower_bound",
    "save_instance",
    "load_instance",
]

# class -> (items, inclusive size interval)
TABLE1: dict[int, tuple[int, tuple[int, int]]] = {
    3: (2000, (49, 51)),
    5: (2000, (48, 52)),
    7: (1024, (47, 53)),
    9: (1000, (46, 54)),
}
DEFAULT_CAPACITY = 100


@dataclass(frozen=True)
class BinPackingInstance:
    capacity: int
    sizes: tuple[int, ...]
    bins: int
    seed: int | None = None
    interval: tuple[int, int] | None = None
    class_count: int | None = None

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if self.interval is not None:
            object.__setattr__(self, "interval", tuple(int(v) for v in self.interval))
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        if self.bins < 1:
            raise ValueError("need at least one bin")
        if any(s <= 0 for s in sizes):
            raise ValueError("sizes must be positive")
        if any(a > b for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sizes must be sorted ascending")
        if sizes and sizes[-1] > self.capacity:
            raise ValueError(f"item of size {sizes[-1]} exceeds capacity {self.capacity}")

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return self.bins

    @property
    def layout(self) -> VarLayout:
        return VarLayout(self.m, self.bins)

    @property
    def instance_id(self) -> str:
        tag = f"c{self.class_count}" if self.class_count else "custom"
        return f"bp-{tag}-m{self.m}-n{self.bins}-B{self.capacity}-s{self.seed}"

    def to_dict(self) -> dict:
        return {
            "capacity": self.capacity,
            "sizes": list(self.sizes),
            "bins": self.bins,
            "seed": self.seed,
            "interval": list(self.interval) if self.interval else None,
            "class_count": self.class_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BinPackingInstance":
        return cls(
            capacity=int(data["capacity"]),
            sizes=tuple(data["sizes"]),
            bins=int(data["bins"]),
            seed=data.get("seed"),
            interval=tuple(data["interval"]) if data.get("interval") else None,
            class_count=data.get("class_count"),
        )


@dataclass(frozen=True)
class SizeBoundaries:
    """1-based ``i_1 = 1 < ... < i_{l+1} = m + 1`` delimiting runs of equal size."""

    indices: tuple[int, ...]

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.indices, self.indices[1:]))

    def ranges(self) -> list[tuple[int, int]]:
        return list(zip(self.indices[:-1], self.indices[1:]))

    def cumulative(self) -> tuple[int, ...]:
        """0-based cumulative form, e.g. ``(0, 688, 1320, 2000)``."""
        return tuple(i - 1 for i in self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


def size_boundaries(inst: BinPackingInstance | Sequence[int]) -> SizeBoundaries:
    sizes = inst.sizes if isinstance(inst, BinPackingInstance) else tuple(inst)
    if any(a > b for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be sorted ascending")
    idx = [1]
    for i in range(1, len(sizes)):
        if sizes[i] != sizes[i - 1]:
            idx.append(i + 1)
    idx.append(len(sizes) + 1)
    if not sizes:
        idx = [1]
    return SizeBoundaries(tuple(idx))


def _rng(seed_or_rng) -> tuple[np.random.Generator, int | None]:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng, None
    return np.random.default_rng(seed_or_rng), (None if seed_or_rng is None else int(seed_or_rng))


def generate_benchmark(
    class_count: int,
    n_items: int,
    interval: tuple[int, int],
    capacity: int = DEFAULT_CAPACITY,
    rng: np.random.Generator | int | None = None,
) -> BinPackingInstance:
    """Sizes i.i.d. uniform on the integer interval, sorted; as many bins as items."""
    lo, hi = (int(v) for v in interval)
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if lo < 1 or hi > capacity:
        raise ValueError(f"interval [{lo}, {hi}] not inside [1, {capacity}]")
    if class_count != hi - lo + 1:
        raise ValueError(f"class_count {class_count} does not match interval [{lo}, {hi}]")
    if n_items < 1:
        raise ValueError("need at least one item")
    gen, seed = _rng(rng)
    sizes = np.sort(gen.integers(lo, hi + 1, size=n_items))
    return BinPackingInstance(
        capacity=capacity,
        sizes=tuple(sizes.tolist()),
        bins=n_items,
        seed=seed,
        interval=(lo, hi),
        class_count=class_count,
    )


def benchmark(class_count: int, seed: int, capacity: int = DEFAULT_CAPACITY, n_items: int | None = None) -> BinPackingInstance:
    """Near half-capacity family member; ``class_count`` in {3, 5, 7, 9}."""
    if class_count not in TABLE1:
        raise ValueError(f"unknown benchmark class {class_count}; choose from {sorted(TABLE1)}")
    items, (lo, hi) = TABLE1[class_count]
    if capacity != DEFAULT_CAPACITY:
        # keep the interval centred on half the capacity
        shift = capacity // 2 - DEFAULT_CAPACITY // 2
        lo, hi = lo + shift, hi + shift
    return generate_benchmark(class_count, n_items or items, (lo, hi), capacity, seed)


def build_model(inst: BinPackingInstance) -> IPModel:
    """minimise sum y_k  s.t.  sum_i s_i x_ik - B y_k <= 0,  sum_k x_ik = 1, all binary."""
    layout = inst.layout
    m, n, R = inst.m, inst.n, layout.rows
    sizes = np.asarray(inst.sizes, dtype=np.int64)
    rows = []
    for k in range(1, n + 1):
        base = (k - 1) * R
        idx = np.arange(base, base + R, dtype=np.int64)
        coefs = np.concatenate([[-inst.capacity], sizes]).astype(np.int64)
        rows.append(LinearConstraint(idx, coefs, Sense.LE, 0, f"cap_{k}"))
    cols = np.arange(n, dtype=np.int64) * R
    ones = np.ones(n, dtype=np.int64)
    for i in range(1, m + 1):
        rows.append(LinearConstraint(cols + i, ones, Sense.EQ, 1, f"assign_{i}"))
    return IPModel(
        num_vars=layout.size,
        objective=Polynomial.linear(layout.y_indices()),
        constraints=tuple(rows),
        domain=(0, 1),
        layout=layout,
    )


def symmetry_group_order(inst: BinPackingInstance) -> int:
    """``n! * prod_j (i_{j+1} - i_j)!`` for the bin and item transposition groups."""
    order = math.factorial(inst.n)
    for c in size_boundaries(inst).counts:
        order *= math.factorial(c)
    return order


def group_order_log10(inst: BinPackingInstance) -> float:
    return math.log10(symmetry_group_order(inst))


def first_fit_decreasing(inst: BinPackingInstance) -> int:
    loads: list[int] = []
    for s in sorted(inst.sizes, reverse=True):
        for j, load in enumerate(loads):
            if load + s <= inst.capacity:
                loads[j] += s
                break
        else:
            loads.append(s)
    return len(loads)


def lower_bound(inst: BinPackingInstance) -> int:
    return -(-sum(inst.sizes) // inst.capacity)


def save_instance(inst: BinPackingInstance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(inst.to_dict(), indent=1) + "\n")


def load_instance(path: str | Path) -> BinPackingInstance:
    return BinPackingInstance.from_dict(json.loads(Path(path).read_text()))
