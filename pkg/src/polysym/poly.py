"""Sparse multivariate polynomials with integer coefficients.

A polynomial is stored as two numpy arrays: a ``(terms, width)`` matrix of
variable indices and a vector of coefficients.  Each row is a monomial written
as the ascending multiset of its variable indices, right-padded with
``PAD``; ``x0**2 * x3`` is the row ``[0, 0, 3]``.  Rows are kept in graded
lexicographic order (total degree descending, then the index sequence), equal
monomials are merged and zero coefficients dropped, so two polynomials are
equal exactly when their arrays are.

The array layout lets products of two linear forms with a few thousand
variables each (millions of terms) be built and permuted without a Python
loop per term.
"""
from __future__ import annotations

import enum
import itertools
import re
from fractions import Fraction
from numbers import Integral, Rational
from typing import Iterable, Mapping, Sequence, Tuple, Union

import numpy as np

__all__ = [
    "Monomial",
    "Polynomial",
    "PolyClass",
    "add",
    "sub",
    "mul",
    "negate",
    "apply_permutation",
    "permutation_difference",
    "evaluate",
    "classify",
    "render",
    "parse",
]

PAD = np.iinfo(np.int64).max
_COEF_LIMIT = 2**62

Monomial = Tuple[Tuple[int, int], ...]
Number = Union[int, Fraction]


class PolyClass(str, enum.Enum):
    ZERO = "zero"
    LINEAR = "linear"
    HAS_QUADRATIC = "has_quadratic"
    HIGHER = "higher"


def _canonical(vars_: np.ndarray, coefs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort rows, merge equal monomials, drop zeros and trim padding."""
    n_terms = coefs.shape[0]
    if n_terms == 0:
        return np.empty((0, 0), dtype=np.int64), np.empty(0, dtype=np.int64)
    width = vars_.shape[1]
    if width:
        vars_ = np.sort(vars_, axis=1)
    degree = (vars_ != PAD).sum(axis=1)
    keys = tuple(vars_[:, c] for c in range(width - 1, -1, -1)) + (-degree,)
    order = np.lexsort(keys)
    vars_ = vars_[order]
    coefs = coefs[order]
    first = np.ones(n_terms, dtype=bool)
    if n_terms > 1:
        first[1:] = np.any(vars_[1:] != vars_[:-1], axis=1)
    starts = np.flatnonzero(first)
    coefs = np.add.reduceat(coefs, starts)
    vars_ = vars_[starts]
    keep = coefs != 0
    vars_ = vars_[keep]
    coefs = coefs[keep]
    if coefs.shape[0] == 0:
        return np.empty((0, 0), dtype=np.int64), np.empty(0, dtype=np.int64)
    max_degree = int((vars_ != PAD).sum(axis=1).max())
    return np.ascontiguousarray(vars_[:, :max_degree]), coefs


def _pad_to(vars_: np.ndarray, width: int) -> np.ndarray:
    if vars_.shape[1] == width:
        return vars_
    out = np.full((vars_.shape[0], width), PAD, dtype=np.int64)
    out[:, : vars_.shape[1]] = vars_
    return out


def _row_to_monomial(row: Iterable[int]) -> Monomial:
    idx = [int(v) for v in row if v != PAD]
    return tuple((v, len(list(g))) for v, g in itertools.groupby(idx))


class Polynomial:
    """Immutable sparse polynomial over the integers.

    Build one from a mapping ``{monomial: coefficient}`` where a monomial is a
    tuple of ``(var_index, exponent)`` pairs, or compose variables::

        >>> x, y = Polynomial.variable(0), Polynomial.variable(1)
        >>> str(2 * x + y**2)
        '+1 x[1]^2 +2 x[0]'
    """

    __slots__ = ("_vars", "_coefs", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        terms = terms or {}
        rows = []
        coefs = []
        for mono, c in terms.items():
            if not isinstance(c, Integral):
                raise TypeError(f"coefficient {c!r} is not an integer")
            row = []
            for var, exp in mono:
                if var < 0:
                    raise ValueError(f"negative variable index {var}")
                if exp <= 0:
                    raise ValueError(f"non-positive exponent {exp} on x[{var}]")
                row.extend([int(var)] * int(exp))
            rows.append(row)
            coefs.append(int(c))
        width = max((len(r) for r in rows), default=0)
        arr = np.full((len(rows), width), PAD, dtype=np.int64)
        for i, r in enumerate(rows):
            arr[i, : len(r)] = r
        _check_coefs(coefs)
        self._set(*_canonical(arr, np.array(coefs, dtype=np.int64)))

    def _set(self, vars_: np.ndarray, coefs: np.ndarray) -> None:
        vars_.setflags(write=False)
        coefs.setflags(write=False)
        self._vars = vars_
        self._coefs = coefs
        self._hash = None

    @classmethod
    def _from_arrays(cls, vars_: np.ndarray, coefs: np.ndarray, canonical: bool = False) -> "Polynomial":
        obj = cls.__new__(cls)
        if canonical:
            obj._set(vars_, coefs)
        else:
            obj._set(*_canonical(np.asarray(vars_, dtype=np.int64), np.asarray(coefs, dtype=np.int64)))
        return obj

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def variable(cls, index: int, coef: int = 1) -> "Polynomial":
        return cls({((index, 1),): coef})

    @classmethod
    def linear(cls, indices: Sequence[int] | np.ndarray, coefs: Sequence[int] | np.ndarray | None = None) -> "Polynomial":
        """Linear form ``sum(coefs[t] * x[indices[t]])``; unit coefficients by default."""
        idx = np.asarray(indices, dtype=np.int64).reshape(-1, 1)
        if idx.size and idx.min() < 0:
            raise ValueError("negative variable index")
        c = np.ones(idx.shape[0], dtype=np.int64) if coefs is None else np.asarray(coefs, dtype=np.int64)
        return cls._from_arrays(idx, c)

    # -- inspection ---------------------------------------------------------

    @property
    def monomial_array(self) -> np.ndarray:
        """Read-only ``(terms, degree)`` index matrix, padded with ``PAD``."""
        return self._vars

    @property
    def coefficients(self) -> np.ndarray:
        return self._coefs

    def __len__(self) -> int:
        return int(self._coefs.shape[0])

    def __bool__(self) -> bool:
        return len(self) > 0

    def is_zero(self) -> bool:
        return len(self) == 0

    @property
    def degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        if not len(self):
            return -1
        return int(self._vars.shape[1])

    def variables(self) -> np.ndarray:
        """Sorted distinct variable indices occurring in the polynomial."""
        flat = self._vars[self._vars != PAD]
        return np.unique(flat)

    def terms(self) -> dict[Monomial, int]:
        """Ordered mapping of monomials to coefficients, in canonical order."""
        return {_row_to_monomial(row): int(c) for row, c in zip(self._vars.tolist(), self._coefs.tolist())}

    def term_degrees(self) -> np.ndarray:
        return (self._vars != PAD).sum(axis=1)

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Integral):
            other = Polynomial.constant(int(other)) if other else Polynomial()
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self._vars.shape == other._vars.shape
            and np.array_equal(self._vars, other._vars)
            and np.array_equal(self._coefs, other._coefs)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vars.shape, self._vars.tobytes(), self._coefs.tobytes()))
        return self._hash

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return sub(self, other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return sub(other, self)

    def __neg__(self) -> "Polynomial":
        return negate(self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, Integral) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1)
        for _ in range(int(exponent)):
            result = mul(result, self)
        return result

    def __repr__(self) -> str:
        return f"Polynomial({render(self)!r})"

    def __str__(self) -> str:
        return render(self)

    def __call__(self, assignment) -> Number:
        return evaluate(self, assignment)


def _coerce(value) -> Polynomial | None:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, Integral):
        return Polynomial.constant(int(value)) if value else Polynomial()
    return None


def _check_coefs(values) -> None:
    for c in values:
        if abs(c) >= _COEF_LIMIT:
            raise OverflowError(f"coefficient {c} exceeds the supported integer range")


def _max_abs(p: Polynomial) -> int:
    return int(np.abs(p._coefs).max()) if len(p) else 0


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    if not len(p):
        return q
    if not len(q):
        return p
    _check_coefs([_max_abs(p) + _max_abs(q)])
    width = max(p._vars.shape[1], q._vars.shape[1])
    vars_ = np.concatenate([_pad_to(p._vars, width), _pad_to(q._vars, width)])
    return Polynomial._from_arrays(vars_, np.concatenate([p._coefs, q._coefs]))


def negate(p: Polynomial) -> Polynomial:
    return Polynomial._from_arrays(p._vars, -p._coefs, canonical=True)


def sub(p: Polynomial, q: Polynomial) -> Polynomial:
    return add(p, negate(q))


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if not len(p) or not len(q):
        return Polynomial()
    _check_coefs([_max_abs(p) * _max_abs(q) * min(len(p), len(q))])
    a, b = len(p), len(q)
    vars_ = np.concatenate(
        [np.repeat(p._vars, b, axis=0), np.tile(q._vars, (a, 1))], axis=1
    )
    coefs = np.repeat(p._coefs, b) * np.tile(q._coefs, a)
    return Polynomial._from_arrays(vars_, coefs)


def _mapped_rows(p: Polynomial, perm) -> np.ndarray:
    vars_ = p._vars
    mask = vars_ != PAD
    used = vars_[mask]
    if used.size:
        top = int(used.max())
        if top >= perm.size:
            raise IndexError(f"variable x[{top}] is outside the permutation domain of size {perm.size}")
    out = vars_.copy()
    out[mask] = perm.map(used)
    return out


def apply_permutation(p: Polynomial, perm) -> Polynomial:
    """Substitute ``x[perm(i)]`` for every ``x[i]``.

    ``perm`` is anything with a ``size`` attribute and a vectorised
    ``map(indices)`` method (see :mod:`polysym.perm`).  With composition
    ``compose(Q, P)(i) = Q(P(i))`` this satisfies
    ``apply_permutation(apply_permutation(p, P), Q) == apply_permutation(p, compose(Q, P))``.
    """
    if not len(p):
        return p
    return Polynomial._from_arrays(_mapped_rows(p, perm), p._coefs.copy())


def permutation_difference(p: Polynomial, perm) -> Polynomial:
    """``apply_permutation(p, perm) - p`` computed on the moved terms only.

    Terms whose variables are all fixed by ``perm`` cancel exactly, so only
    rows touching a moved variable are remapped and subtracted.
    """
    if not len(p):
        return p
    mapped = _mapped_rows(p, perm)
    moved = np.any(mapped != p._vars, axis=1)
    if not moved.any():
        return Polynomial()
    vars_ = np.concatenate([mapped[moved], p._vars[moved]])
    coefs = np.concatenate([p._coefs[moved], -p._coefs[moved]])
    return Polynomial._from_arrays(vars_, coefs)


def _lookup(assignment, var: int):
    try:
        return assignment[var]
    except (KeyError, IndexError):
        raise KeyError(f"assignment has no value for x[{var}]") from None


def evaluate(p: Polynomial, assignment: Mapping[int, Number] | Sequence[Number]) -> Number:
    """Exact value of ``p`` at ``assignment`` (integers or ``Fraction``)."""
    total: Number = 0
    for row, c in zip(p._vars.tolist(), p._coefs.tolist()):
        value: Number = c
        for v in row:
            if v == PAD:
                break
            x = _lookup(assignment, v)
            if isinstance(x, float) or not isinstance(x, Rational):
                x = Fraction(x)
            value *= x
        total += value
    return total


def evaluate_many(p: Polynomial, points: np.ndarray, chunk: int | None = None) -> np.ndarray:
    """Evaluate at each row of an integer matrix of points (int64, exact)."""
    points = np.asarray(points)
    if points.ndim != 2:
        raise ValueError("points must be a 2-d array")
    if not np.issubdtype(points.dtype, np.integer):
        raise TypeError("evaluate_many needs integer points; use evaluate for rationals")
    k, n = points.shape
    out = np.zeros(k, dtype=np.int64)
    if not len(p):
        return out
    used = p._vars[p._vars != PAD]
    if used.size and int(used.max()) >= n:
        raise KeyError(f"assignment has no value for x[{int(used.max())}]")
    idx = np.where(p._vars == PAD, n, p._vars)
    if chunk is None:
        chunk = max(1, 2**22 // max(1, idx.size))
    for start in range(0, k, chunk):
        block = points[start : start + chunk].astype(np.int64)
        block = np.concatenate([block, np.ones((block.shape[0], 1), dtype=np.int64)], axis=1)
        mono = block[:, idx].prod(axis=2) if idx.shape[1] else np.ones((block.shape[0], len(p)), dtype=np.int64)
        out[start : start + chunk] = mono @ p._coefs
    return out


def classify(p: Polynomial) -> PolyClass:
    d = p.degree
    if d < 0:
        return PolyClass.ZERO
    if d <= 1:
        return PolyClass.LINEAR
    if d == 2:
        return PolyClass.HAS_QUADRATIC
    return PolyClass.HIGHER


def _render_monomial(row) -> str:
    parts = []
    for var, exp in _row_to_monomial(row):
        parts.append(f"x[{var}]" if exp == 1 else f"x[{var}]^{exp}")
    return "*".join(parts)


def render(p: Polynomial) -> str:
    """Canonical text, e.g. ``+1 x[0]^2 -2 x[0]*x[3] +2 x[3]``; zero is ``0``."""
    if not len(p):
        return "0"
    out = []
    for row, c in zip(p._vars.tolist(), p._coefs.tolist()):
        mono = _render_monomial(row)
        sign = "+" if c > 0 else "-"
        out.append(f"{sign}{abs(c)} {mono}" if mono else f"{sign}{abs(c)}")
    return " ".join(out)


_TERM = re.compile(r"([+-])(\d+)((?:\s+x\[\d+\](?:\^\d+)?(?:\*x\[\d+\](?:\^\d+)?)*)?)")
_FACTOR = re.compile(r"x\[(\d+)\](?:\^(\d+))?")


def parse(text: str) -> Polynomial:
    """Inverse of :func:`render`."""
    text = text.strip()
    if text == "0":
        return Polynomial()
    terms: dict[Monomial, int] = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse polynomial near {text[pos:pos + 20]!r}")
        coef = int(m.group(2)) * (1 if m.group(1) == "+" else -1)
        exps: dict[int, int] = {}
        for f in _FACTOR.finditer(m.group(3) or ""):
            v = int(f.group(1))
            exps[v] = exps.get(v, 0) + int(f.group(2) or 1)
        mono = tuple(sorted(exps.items()))
        terms[mono] = terms.get(mono, 0) + coef
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return Polynomial({k: v for k, v in terms.items() if v})
