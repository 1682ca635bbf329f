"""Permutations of variable indices.

Convention used everywhere in the package: a permutation ``P`` is stored by
its image array, ``P(i) = image[i]``, and composition reads right to left,
``compose(P, Q)(i) == P(Q(i))``.  Substituting ``x[P(i)]`` for ``x[i]`` in a
polynomial (:func:`polysym.poly.apply_permutation`) corresponds to the point
action ``P.act(a)[i] == a[P(i)]``.

Bin-packing symmetries are products of a permutation of bin columns and a
permutation of item rows of the ``(m+1) x n`` variable matrix.  Those are
held in factored form by :class:`LayoutPermutation`, so a product of fifty
generators on a four-million-variable layout costs two small arrays instead
of a full image.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "VarLayout",
    "Permutation",
    "LayoutPermutation",
    "identity",
    "compose",
    "inverse",
    "transposition",
    "from_cycles",
    "bin_transposition",
    "item_transposition",
    "generator_specs",
    "generators",
    "random_generator_product",
    "parse_dump",
]


@dataclass(frozen=True)
class VarLayout:
    """Column-major layout of the bin-packing variables.

    Column ``k`` (1-based bin) holds ``y_k`` followed by ``x_1k .. x_mk``;
    ``y_k`` sits at ``(k-1)(m+1)`` and ``x_ik`` at ``(k-1)(m+1) + i``.
    """

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 1:
            raise ValueError(f"invalid layout m={self.m}, n={self.n}")

    @property
    def rows(self) -> int:
        return self.m + 1

    @property
    def size(self) -> int:
        return self.n * (self.m + 1)

    def y(self, k: int) -> int:
        if not 1 <= k <= self.n:
            raise IndexError(f"bin {k} outside 1..{self.n}")
        return (k - 1) * self.rows

    def x(self, i: int, k: int) -> int:
        if not 1 <= i <= self.m:
            raise IndexError(f"item {i} outside 1..{self.m}")
        return self.y(k) + i

    def flatten(self, row, col):
        """Flat index of (row, bin) with row 0 the y row; vectorised, 1-based bins."""
        return (np.asarray(col) - 1) * self.rows + np.asarray(row)

    def unflatten(self, index):
        """Inverse of :meth:`flatten`: returns ``(row, bin)``."""
        col, row = np.divmod(np.asarray(index), self.rows)
        return row, col + 1

    def y_indices(self) -> np.ndarray:
        return np.arange(self.n, dtype=np.int64) * self.rows

    def x_indices(self) -> np.ndarray:
        idx = np.arange(self.size, dtype=np.int64)
        return idx[idx % self.rows != 0]

    def name(self, index: int) -> str:
        col, row = divmod(int(index), self.rows)
        if not 0 <= index < self.size:
            raise IndexError(f"index {index} outside layout of size {self.size}")
        return f"y_{col + 1}" if row == 0 else f"x_{row}_{col + 1}"


class Permutation:
    """Bijection of ``{0, ..., size-1}`` given by its image array."""

    def __init__(self, image: Sequence[int] | np.ndarray, *, check: bool = True):
        image = np.array(image, dtype=np.int64)
        if image.ndim != 1:
            raise ValueError("image must be one-dimensional")
        if check:
            seen = np.zeros(image.shape[0], dtype=bool)
            if image.size and (image.min() < 0 or image.max() >= image.shape[0]):
                raise ValueError("image entries out of range")
            seen[image] = True
            if not seen.all():
                raise ValueError("image is not a bijection")
        image.setflags(write=False)
        self._image = image

    @property
    def size(self) -> int:
        return int(self._image.shape[0])

    @property
    def image(self) -> np.ndarray:
        return self._image

    def map(self, indices) -> np.ndarray:
        return self.image[np.asarray(indices, dtype=np.int64)]

    def __call__(self, i: int) -> int:
        return int(self.map(i))

    def act(self, point):
        """Point action matching substitution: ``act(a)[i] = a[P(i)]``."""
        if isinstance(point, np.ndarray):
            return point[..., self.image]
        return type(point)(point[j] for j in self.image.tolist())

    def moved(self) -> tuple[np.ndarray, np.ndarray]:
        img = self.image
        src = np.flatnonzero(img != np.arange(img.shape[0]))
        return src, img[src]

    def is_identity(self) -> bool:
        return self.moved()[0].size == 0

    def dump(self) -> str:
        """Moved points only, one ``i -> j`` per line."""
        src, dst = self.moved()
        return "".join(f"{i} -> {j}\n" for i, j in zip(src.tolist(), dst.tolist()))

    def key(self) -> bytes:
        return self.image.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.size == other.size and np.array_equal(self.image, other.image)

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        src, dst = self.moved()
        pairs = ", ".join(f"{i}->{j}" for i, j in zip(src[:8].tolist(), dst[:8].tolist()))
        more = ", ..." if src.size > 8 else ""
        return f"Permutation(size={self.size}, {{{pairs}{more}}})"


class LayoutPermutation(Permutation):
    """``(M_bins kron I_{m+1}) (I_n kron diag(1, M_items))`` in factored form.

    ``bins[k]`` is the image of 0-based column ``k``; ``rows[r]`` the image of
    row ``r`` with ``rows[0] == 0`` (the y row never moves).
    """

    def __init__(self, layout: VarLayout, bins=None, rows=None):
        self.layout = layout
        b = np.arange(layout.n, dtype=np.int64) if bins is None else np.array(bins, dtype=np.int64)
        r = np.arange(layout.rows, dtype=np.int64) if rows is None else np.array(rows, dtype=np.int64)
        if b.shape != (layout.n,) or r.shape != (layout.rows,):
            raise ValueError("factor shapes do not match the layout")
        if r[0] != 0:
            raise ValueError("the y row must be fixed")
        if not (np.array_equal(np.sort(b), np.arange(layout.n)) and np.array_equal(np.sort(r), np.arange(layout.rows))):
            raise ValueError("factors are not bijections")
        b.setflags(write=False)
        r.setflags(write=False)
        self.bins = b
        self.rows = r
        self._image = None

    @property
    def size(self) -> int:
        return self.layout.size

    @property
    def image(self) -> np.ndarray:
        if self._image is None:
            img = (self.bins[:, None] * self.layout.rows + self.rows[None, :]).ravel()
            img.setflags(write=False)
            self._image = img
        return self._image

    def map(self, indices) -> np.ndarray:
        col, row = np.divmod(np.asarray(indices, dtype=np.int64), self.layout.rows)
        return self.bins[col] * self.layout.rows + self.rows[row]

    def moved(self) -> tuple[np.ndarray, np.ndarray]:
        cols = np.flatnonzero(self.bins != np.arange(self.layout.n))
        rws = np.flatnonzero(self.rows != np.arange(self.layout.rows))
        R = self.layout.rows
        src = np.union1d(
            (cols[:, None] * R + np.arange(R)[None, :]).ravel(),
            (np.arange(self.layout.n)[:, None] * R + rws[None, :]).ravel(),
        ).astype(np.int64)
        return src, self.map(src)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.bins, np.arange(self.layout.n)) and np.array_equal(self.rows, np.arange(self.layout.rows)))

    def key(self) -> bytes:
        return self.bins.tobytes() + b"|" + self.rows.tobytes()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LayoutPermutation) and other.layout == self.layout:
            return bool(np.array_equal(self.bins, other.bins) and np.array_equal(self.rows, other.rows))
        return super().__eq__(other)

    def __hash__(self) -> int:
        return hash(self.image.tobytes()) if self.size <= 1 << 16 else hash(self.key())


def identity(size: int) -> Permutation:
    return Permutation(np.arange(size), check=False)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``compose(p, q)(i) == p(q(i))``."""
    if p.size != q.size:
        raise ValueError(f"size mismatch: {p.size} vs {q.size}")
    if isinstance(p, LayoutPermutation) and isinstance(q, LayoutPermutation) and p.layout == q.layout:
        return LayoutPermutation(p.layout, p.bins[q.bins], p.rows[q.rows])
    return Permutation(p.map(q.image), check=False)


def inverse(p: Permutation) -> Permutation:
    if isinstance(p, LayoutPermutation):
        return LayoutPermutation(p.layout, np.argsort(p.bins), np.argsort(p.rows))
    return Permutation(np.argsort(p.image), check=False)


def transposition(size: int, i: int, j: int) -> Permutation:
    img = np.arange(size)
    img[i], img[j] = j, i
    return Permutation(img, check=False)


def from_cycles(size: int, *cycles: Iterable[int]) -> Permutation:
    """Build from cycles; ``(0, 1, 2)`` sends 0 to 1, 1 to 2 and 2 to 0."""
    img = np.arange(size)
    for cyc in cycles:
        cyc = list(cyc)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a] = b
    return Permutation(img)


def _class_ranges(boundaries) -> list[tuple[int, int]]:
    idx = list(getattr(boundaries, "indices", boundaries))
    return list(zip(idx[:-1], idx[1:]))


def bin_transposition(layout: VarLayout, k: int) -> LayoutPermutation:
    """Swap the whole column of bin 1 with bin ``k`` (``2 <= k <= n``)."""
    if not 2 <= k <= layout.n:
        raise ValueError(f"bin index {k} outside 2..{layout.n}")
    bins = np.arange(layout.n)
    bins[0], bins[k - 1] = k - 1, 0
    return LayoutPermutation(layout, bins=bins)


def item_transposition(layout: VarLayout, boundaries, j: int, k: int) -> LayoutPermutation:
    """Swap item rows ``i_j`` and ``k`` in every column, ``i_j < k < i_{j+1}``."""
    ranges = _class_ranges(boundaries)
    if not 1 <= j <= len(ranges):
        raise ValueError(f"size class {j} outside 1..{len(ranges)}")
    lo, hi = ranges[j - 1]
    if not lo < k < hi:
        raise ValueError(f"item {k} is not in size class {j} (items {lo}..{hi - 1}) or equals its first item")
    if hi > layout.rows:
        raise ValueError("boundaries do not match the layout")
    rows = np.arange(layout.rows)
    rows[lo], rows[k] = k, lo
    return LayoutPermutation(layout, rows=rows)


def generator_specs(layout: VarLayout, boundaries) -> list[tuple[str, int, int]]:
    """Transposition generators as ``(kind, a, b)`` with 0-based columns / rows.

    Bin swaps ``(1 k)`` for ``k = 2..n`` come first, then item swaps
    ``(i_j k)`` class by class.
    """
    specs = [("bin", 0, k - 1) for k in range(2, layout.n + 1)]
    for lo, hi in _class_ranges(boundaries):
        specs.extend(("item", lo, k) for k in range(lo + 1, hi))
    return specs


def generators(layout: VarLayout, boundaries) -> list[LayoutPermutation]:
    out = []
    for kind, a, b in generator_specs(layout, boundaries):
        if kind == "bin":
            out.append(bin_transposition(layout, b + 1))
        else:
            rows = np.arange(layout.rows)
            rows[a], rows[b] = b, a
            out.append(LayoutPermutation(layout, rows=rows))
    return out


def random_generator_product(layout: VarLayout, boundaries, count: int, rng: np.random.Generator) -> LayoutPermutation:
    """Product ``g_1 g_2 ... g_count`` of generators drawn uniformly with replacement."""
    if count < 1:
        raise ValueError("count must be at least 1")
    specs = generator_specs(layout, boundaries)
    bins = np.arange(layout.n)
    rows = np.arange(layout.rows)
    if not specs:
        return LayoutPermutation(layout, bins, rows)
    for c in rng.integers(len(specs), size=count).tolist():
        kind, a, b = specs[c]
        # right-multiplying by a transposition swaps two entries of the image
        arr = bins if kind == "bin" else rows
        arr[a], arr[b] = arr[b], arr[a]
    return LayoutPermutation(layout, bins, rows)


def parse_dump(text: str, size: int) -> Permutation:
    img = np.arange(size)
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        a, b = (int(t) for t in line.split("->"))
        img[a] = b
    return Permutation(img)
