"""CPLEX-LP text export of an :class:`~polysym.model.IPModel`.

Quadratic parts of side constraints go in brackets,
``[ x_1_1 ^ 2 - y_1 * x_2_1 ] + 2 y_1 <= 0``.  Lines are wrapped at term
boundaries so none exceeds ``MAX_LINE`` characters.  Rows are streamed to
the file one at a time.
"""
from __future__ import annotations

from pathlib import Path
from typing import IO, Iterable, Iterator

from .model import IPModel, Sense
from .poly import PAD, Polynomial

__all__ = ["export_lp", "write_lp", "MAX_LINE"]

MAX_LINE = 250


def _coef_token(c: int, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    mag = abs(c)
    prefix = f"{sign} " if sign else ""
    return prefix if mag == 1 else f"{prefix}{mag} "


def _linear_tokens(indices, coefs, name) -> Iterator[str]:
    first = True
    for v, c in zip(indices, coefs):
        if c == 0:
            continue
        yield _coef_token(int(c), first) + name(int(v))
        first = False


def _monomial_text(row, name) -> str:
    vs = [v for v in row if v != PAD]
    if len(vs) == 2 and vs[0] == vs[1]:
        return f"{name(vs[0])} ^ 2"
    return " * ".join(name(v) for v in vs)


def _write_wrapped(fh: IO[str], head: str, tokens: Iterable[str], tail: str = "") -> None:
    line = head
    for tok in tokens:
        if len(line) + 1 + len(tok) > MAX_LINE:
            fh.write(line.rstrip() + "\n")
            line = "   " + tok
        else:
            line = f"{line} {tok}" if line else tok
    if tail:
        if len(line) + 1 + len(tail) > MAX_LINE:
            fh.write(line.rstrip() + "\n")
            line = "   " + tail
        else:
            line = f"{line} {tail}"
    fh.write(line.rstrip() + "\n")


def _side_tokens(p: Polynomial, name) -> tuple[list[str], int]:
    rows = p.monomial_array.tolist()
    coefs = p.coefficients.tolist()
    degs = p.term_degrees().tolist()
    if max(degs, default=0) > 2:
        raise ValueError(f"side constraint of degree {max(degs)} cannot be written as LP (degree <= 2 only)")
    quad = [(c, r) for c, r, d in zip(coefs, rows, degs) if d == 2]
    lin = [(c, r[0]) for c, r, d in zip(coefs, rows, degs) if d == 1]
    const = sum(c for c, d in zip(coefs, degs) if d == 0)
    tokens: list[str] = []
    if quad:
        tokens.append("[")
        for t, (c, r) in enumerate(quad):
            tokens.append(_coef_token(c, t == 0) + _monomial_text(r, name))
        tokens.append("]")
    for t, (c, v) in enumerate(lin):
        tokens.append(_coef_token(c, t == 0 and not quad) + name(v))
    if not tokens:
        raise ValueError("side constraint without variables")
    return tokens, -const


def write_lp(model: IPModel, fh: IO[str]) -> None:
    name = model.var_name
    obj = model.objective
    if obj.degree > 1:
        raise ValueError("only linear objectives are exported")
    fh.write("\\ polysym export\n")
    fh.write("Minimize\n")
    rows = obj.monomial_array.tolist()
    lin_idx = [r[0] for r in rows if r]
    lin_c = [c for r, c in zip(rows, obj.coefficients.tolist()) if r]
    tokens = list(_linear_tokens(lin_idx, lin_c, name)) or [f"0 {name(0)}"]
    const = sum(c for r, c in zip(rows, obj.coefficients.tolist()) if not r)
    if const:
        tokens.append(f"{'+' if const > 0 else '-'} {abs(const)}")
    _write_wrapped(fh, " obj:", tokens)
    fh.write("Subject To\n")
    for j, con in enumerate(model.constraints):
        label = con.name or f"c{j + 1}"
        op = {Sense.LE: "<=", Sense.GE: ">=", Sense.EQ: "="}[con.sense]
        toks = _linear_tokens(con.indices.tolist(), con.coefs.tolist(), name)
        _write_wrapped(fh, f" {label}:", toks, f"{op} {con.rhs}")
    for t, p in enumerate(model.side_constraints):
        toks, rhs = _side_tokens(p, name)
        _write_wrapped(fh, f" brk_{t + 1}:", toks, f"<= {rhs}")
    dom = model.domain
    all_vars = (name(i) for i in range(model.num_vars))
    if tuple(dom) == (0, 1):
        fh.write("Binary\n")
        _write_wrapped(fh, "", all_vars)
    else:
        if tuple(dom) != tuple(range(dom[0], dom[-1] + 1)):
            raise ValueError(f"domain {dom} is not an integer range")
        fh.write("Bounds\n")
        for i in range(model.num_vars):
            fh.write(f" {dom[0]} <= {name(i)} <= {dom[-1]}\n")
        fh.write("General\n")
        _write_wrapped(fh, "", all_vars)
    fh.write("End\n")


def export_lp(model: IPModel, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", buffering=1 << 20) as fh:
        write_lp(model, fh)
    return path
