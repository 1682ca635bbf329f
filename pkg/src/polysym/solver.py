"""Depth-first branch and bound for small 0-1 programs.

Variables are fixed in index order (for bin packing: bin by bin, ``y_k``
before the item rows), value 1 first.  A node is one variable fixing.  Three
prunes apply: a linear row can no longer be satisfied given the min/max
activity of its free part, the objective lower bound reaches the incumbent,
or a side constraint whose variables are all fixed is violated.  Nonlinear
side constraints are never bounded on partial assignments.
"""
from __future__ import annotations

import csv
import io
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .model import IPModel, Sense
from .poly import PAD

__all__ = ["SolveStats", "StatsRow", "solve", "compare", "write_stats_csv", "STATS_COLUMNS"]

STATS_COLUMNS = ["config_id", "template", "profile", "nodes", "relative_nodes_pct", "optimum", "incumbent_updates"]


@dataclass
class SolveStats:
    nodes_explored: int
    incumbent_updates: int
    optimum: int | None
    proof: tuple[int, ...] | None = None
    node_limit_hit: bool = False

    @property
    def infeasible(self) -> bool:
        return self.optimum is None and not self.node_limit_hit


def _compile_poly(p):
    terms = []
    for row, c in zip(p.monomial_array.tolist(), p.coefficients.tolist()):
        terms.append((int(c), tuple(v for v in row if v != PAD)))
    return terms


def solve(model: IPModel, node_limit: int | None = None) -> SolveStats:
    if set(model.domain) != {0, 1}:
        raise ValueError(f"solver needs binary domains, got {model.domain}")
    if model.objective.degree > 1:
        raise ValueError("solver needs a linear objective")
    N = model.num_vars
    obj = [0] * N
    const = 0
    for row, c in zip(model.objective.monomial_array.tolist(), model.objective.coefficients.tolist()):
        if row:
            obj[row[0]] += int(c)
        else:
            const += int(c)

    senses, rhs, lo, hi = [], [], [], []
    occurs: list[list[tuple[int, int]]] = [[] for _ in range(N)]
    for j, con in enumerate(model.constraints):
        senses.append(con.sense)
        rhs.append(con.rhs)
        lo.append(sum(min(0, int(a)) for a in con.coefs.tolist()))
        hi.append(sum(max(0, int(a)) for a in con.coefs.tolist()))
        for v, a in zip(con.indices.tolist(), con.coefs.tolist()):
            occurs[v].append((j, int(a)))

    # side constraints are checked when their last variable is fixed
    closing: list[list[list]] = [[] for _ in range(N)]
    for p in model.side_constraints:
        vs = p.variables()
        if vs.size == 0:
            if p.coefficients.sum() > 0:
                return SolveStats(0, 0, None)
            continue
        closing[int(vs[-1])].append(_compile_poly(p))

    le, ge = Sense.LE, Sense.GE
    x = [0] * N
    state = {"nodes": 0, "updates": 0, "best": None, "proof": None, "stop": False}
    bound = [const + sum(min(0, c) for c in obj)]

    def ok_rows(v: int) -> bool:
        for j, _ in occurs[v]:
            s = senses[j]
            if s is le:
                if lo[j] > rhs[j]:
                    return False
            elif s is ge:
                if hi[j] < rhs[j]:
                    return False
            elif lo[j] > rhs[j] or hi[j] < rhs[j]:
                return False
        return True

    def side_ok(v: int) -> bool:
        for terms in closing[v]:
            total = 0
            for c, vars_ in terms:
                if all(x[u] for u in vars_):
                    total += c
            if total > 0:
                return False
        return True

    def fix(v: int, val: int) -> None:
        x[v] = val
        for j, a in occurs[v]:
            lo[j] += a * val - min(0, a)
            hi[j] += a * val - max(0, a)
        bound[0] += obj[v] * val - min(0, obj[v])

    def unfix(v: int, val: int) -> None:
        for j, a in occurs[v]:
            lo[j] -= a * val - min(0, a)
            hi[j] -= a * val - max(0, a)
        bound[0] -= obj[v] * val - min(0, obj[v])
        x[v] = 0

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * N + 100))

    def dfs(v: int) -> None:
        if v == N:
            value = bound[0]
            if state["best"] is None or value < state["best"]:
                state["best"] = value
                state["proof"] = tuple(x)
                state["updates"] += 1
            return
        for val in (1, 0):
            if state["stop"]:
                return
            state["nodes"] += 1
            if node_limit is not None and state["nodes"] > node_limit:
                state["stop"] = True
                return
            fix(v, val)
            if (
                ok_rows(v)
                and (state["best"] is None or bound[0] < state["best"])
                and side_ok(v)
            ):
                dfs(v + 1)
            unfix(v, val)

    dfs(0)
    return SolveStats(state["nodes"], state["updates"], state["best"], state["proof"], state["stop"])


@dataclass
class StatsRow:
    config_id: str
    template: str
    profile: str
    nodes: int
    relative_nodes_pct: float
    optimum: int | None
    incumbent_updates: int
    stats: SolveStats | None = field(default=None, repr=False)

    def as_csv_row(self) -> list:
        return [
            self.config_id,
            self.template,
            self.profile,
            self.nodes,
            f"{self.relative_nodes_pct:.2f}",
            "infeasible" if self.optimum is None else self.optimum,
            self.incumbent_updates,
        ]


def compare(model: IPModel, families: Sequence = (), node_limit: int | None = None) -> list[StatsRow]:
    """Baseline row followed by one row per family, nodes relative to the baseline."""
    from .breakers import attach

    base_stats = solve(model.base(), node_limit)
    rows = [StatsRow("baseline", "-", "-", base_stats.nodes_explored, 100.0, base_stats.optimum, base_stats.incumbent_updates, base_stats)]
    for t, fam in enumerate(families):
        st = solve(attach(model.base(), fam), node_limit)
        template = getattr(getattr(fam, "template", None), "value", None) or "-"
        profile = getattr(getattr(fam, "profile", None), "label", None) or "-"
        seed = getattr(fam, "seed", None)
        config = f"{template}/{profile}/s{seed}" if seed is not None else f"family{t}"
        rel = 100.0 * st.nodes_explored / base_stats.nodes_explored if base_stats.nodes_explored else 100.0
        rows.append(StatsRow(config, template, profile, st.nodes_explored, rel, st.optimum, st.incumbent_updates, st))
    return rows


def write_stats_csv(rows: Sequence[StatsRow], path: str | Path | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_COLUMNS)
    for r in rows:
        w.writerow(r.as_csv_row())
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text
