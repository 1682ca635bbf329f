"""Integer programs: linear rows, a finite variable domain and polynomial side constraints."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

import numpy as np

from .perm import VarLayout
from .poly import Polynomial, evaluate_many

__all__ = ["Sense", "LinearConstraint", "IPModel", "toy_model"]


class Sense(str, enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="


@dataclass(frozen=True, eq=False)
class LinearConstraint:
    """``sum(coefs * x[indices]) <sense> rhs`` with integer data."""

    indices: np.ndarray
    coefs: np.ndarray
    sense: Sense
    rhs: int
    name: str | None = None

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        c = np.asarray(self.coefs, dtype=np.int64)
        if idx.shape != c.shape or idx.ndim != 1:
            raise ValueError("indices and coefs must be 1-d arrays of equal length")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "coefs", c)
        object.__setattr__(self, "sense", Sense(self.sense))
        object.__setattr__(self, "rhs", int(self.rhs))

    @classmethod
    def from_dict(cls, coefs: Mapping[int, int], sense: str | Sense, rhs: int, name: str | None = None) -> "LinearConstraint":
        items = sorted(coefs.items())
        return cls(np.array([i for i, _ in items], dtype=np.int64), np.array([c for _, c in items], dtype=np.int64), Sense(sense), rhs, name)

    def activity(self, points: np.ndarray) -> np.ndarray:
        return points[:, self.indices].astype(np.int64) @ self.coefs

    def holds(self, points: np.ndarray) -> np.ndarray:
        act = self.activity(points)
        if self.sense is Sense.LE:
            return act <= self.rhs
        if self.sense is Sense.GE:
            return act >= self.rhs
        return act == self.rhs

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.indices.tolist(), self.coefs.tolist()))


@dataclass(frozen=True, eq=False)
class IPModel:
    """minimise ``objective`` s.t. linear rows, ``x in domain^N`` and ``p <= 0`` for each side constraint."""

    num_vars: int
    objective: Polynomial
    constraints: tuple[LinearConstraint, ...] = ()
    domain: tuple[int, ...] = (0, 1)
    side_constraints: tuple[Polynomial, ...] = ()
    layout: VarLayout | None = None
    names: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "side_constraints", tuple(self.side_constraints))
        object.__setattr__(self, "domain", tuple(sorted(set(int(u) for u in self.domain))))
        if self.names is not None and len(self.names) != self.num_vars:
            raise ValueError("names must cover every variable")
        if self.layout is not None and self.layout.size != self.num_vars:
            raise ValueError("layout size does not match num_vars")
        for p in (self.objective, *self.side_constraints):
            vs = p.variables()
            if vs.size and int(vs[-1]) >= self.num_vars:
                raise ValueError(f"polynomial uses x[{int(vs[-1])}] beyond {self.num_vars} variables")

    def var_name(self, i: int) -> str:
        if self.names is not None:
            return self.names[i]
        if self.layout is not None:
            return self.layout.name(i)
        return f"v{i}"

    def with_side_constraints(self, polys: Iterable[Polynomial]) -> "IPModel":
        """New model with extra ``p <= 0`` rows; duplicates and zero rows are skipped."""
        seen = set(self.side_constraints)
        extra = []
        for p in polys:
            if p.is_zero() or p in seen:
                continue
            seen.add(p)
            extra.append(p)
        if not extra:
            return self
        return replace(self, side_constraints=self.side_constraints + tuple(extra))

    def base(self) -> "IPModel":
        return replace(self, side_constraints=())

    def feasible(self, points: np.ndarray) -> np.ndarray:
        """Boolean mask over the rows of an integer point matrix."""
        points = np.asarray(points)
        ok = np.ones(points.shape[0], dtype=bool)
        if points.size:
            ok &= np.isin(points, self.domain).all(axis=1)
        for row in self.constraints:
            ok &= row.holds(points)
        for p in self.side_constraints:
            ok &= evaluate_many(p, points) <= 0
        return ok

    def objective_values(self, points: np.ndarray) -> np.ndarray:
        return evaluate_many(self.objective, points)


def toy_model() -> IPModel:
    """minimise x + y s.t. x + y >= 1, x, y binary (x is variable 0, y variable 1)."""
    return IPModel(
        num_vars=2,
        objective=Polynomial.linear([0, 1]),
        constraints=(LinearConstraint.from_dict({0: 1, 1: 1}, ">=", 1, "cover"),),
        names=("x", "y"),
    )
