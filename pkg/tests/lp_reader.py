"""Minimal reader for the LP subset the exporter writes; test use only."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from polysym.model import IPModel, LinearConstraint, Sense
from polysym.poly import Polynomial

SECTIONS = ("minimize", "subject to", "binary", "bounds", "general", "end")
OPS = {"<=": Sense.LE, ">=": Sense.GE, "=": Sense.EQ}
_NUM = re.compile(r"^-?\d+$")


@dataclass
class LPFile:
    objective: list = field(default_factory=list)  # (coef, names)
    rows: list = field(default_factory=list)  # (label, [(coef, names)], op, rhs)
    binaries: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)
    objective_constant: int = 0


def _split_sections(text: str) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    current = None
    for line in text.splitlines():
        if line.startswith("\\"):
            continue
        key = line.strip().lower()
        if key in SECTIONS:
            current = key
            out.setdefault(current, [])
            continue
        if current is None:
            raise ValueError(f"text before first section: {line!r}")
        out[current].extend(line.split())
    return out


def _terms(tokens: list[str], pos: int, stop) -> tuple[list, int, int]:
    """Parse terms until ``stop(token)``; returns (terms, constant, new position)."""
    terms, const = [], 0
    sign, coef = 1, None
    in_bracket = False
    while pos < len(tokens) and not stop(tokens[pos]):
        tok = tokens[pos]
        pos += 1
        if tok == "[":
            in_bracket = True
        elif tok == "]":
            in_bracket = False
        elif tok in "+-":
            sign = -1 if tok == "-" else 1
        elif _NUM.match(tok):
            if pos < len(tokens) and not stop(tokens[pos]) and tokens[pos] not in "+-]":
                coef = int(tok)
            else:
                const += sign * int(tok)
                sign, coef = 1, None
        else:
            names = [tok]
            if pos < len(tokens) and tokens[pos] == "^":
                assert in_bracket and tokens[pos + 1] == "2"
                names.append(tok)
                pos += 2
            elif pos < len(tokens) and tokens[pos] == "*":
                assert in_bracket
                names.append(tokens[pos + 1])
                pos += 2
            terms.append((sign * (1 if coef is None else coef), tuple(names)))
            sign, coef = 1, None
    return terms, const, pos


def parse_lp(text: str) -> LPFile:
    sec = _split_sections(text)
    lp = LPFile()
    obj = sec.get("minimize", [])
    if obj and obj[0].endswith(":"):
        obj = obj[1:]
    lp.objective, lp.objective_constant, _ = _terms(obj, 0, lambda t: False)
    toks = sec.get("subject to", [])
    pos = 0
    while pos < len(toks):
        label = toks[pos]
        assert label.endswith(":"), label
        terms, const, pos = _terms(toks, pos + 1, lambda t: t in OPS)
        assert const == 0
        op = toks[pos]
        rhs = int(toks[pos + 1])
        pos += 2
        lp.rows.append((label[:-1], terms, op, rhs))
    lp.binaries = sec.get("binary", [])
    b = sec.get("bounds", [])
    for i in range(0, len(b), 5):
        lp.bounds[b[i + 2]] = (int(b[i]), int(b[i + 4]))
    if "general" in sec:
        lp.binaries = []
        lp.general = sec["general"]
    return lp


def to_model(lp: LPFile, names: list[str]) -> IPModel:
    """Rebuild an IPModel; ``names`` fixes the variable order."""
    index = {n: i for i, n in enumerate(names)}

    def poly(terms, const=0):
        p = Polynomial.constant(const)
        for c, vs in terms:
            m = Polynomial.constant(c)
            for v in vs:
                m = m * Polynomial.variable(index[v])
            p = p + m
        return p

    cons, side = [], []
    for label, terms, op, rhs in lp.rows:
        if any(len(vs) > 1 for _, vs in terms) or label.startswith("brk_"):
            assert op == "<="
            side.append(poly(terms, -rhs))
        else:
            coefs: dict[int, int] = {}
            for c, (v,) in terms:
                coefs[index[v]] = coefs.get(index[v], 0) + c
            cons.append(LinearConstraint.from_dict(coefs, OPS[op], rhs, label))
    domain = (0, 1)
    if lp.bounds:
        lo, hi = next(iter(lp.bounds.values()))
        domain = tuple(range(lo, hi + 1))
    return IPModel(
        len(names), poly(lp.objective, lp.objective_constant), tuple(cons), domain=domain,
        side_constraints=tuple(side), names=tuple(names),
    )
