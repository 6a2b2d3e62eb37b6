"""Exact dense linear algebra: rank, RREF and kernel bases.

Rank uses fraction-free Bareiss elimination after clearing row
denominators, so intermediate entries over Q / Q(i) stay integral
(the classic growth-control argument). Kernels come from a reduced
row echelon form over the field and are returned in the canonical
free-column order, which makes curve bases deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInputError
from .fields import Field, GaussianRational


class ExactMatrix:
    """Immutable matrix of same-field scalars."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: Field, rows):
        self.field = field
        self.rows = tuple(tuple(field.coerce(e) for e in r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise InvalidInputError("ragged matrix")

    def __repr__(self):
        return f"ExactMatrix({self.field.tag}, {self.nrows}x{self.ncols})"


def _clear_row_denominators(field: Field, row):
    """Scale a row by a positive integer so entries become denominator-free."""
    if field.kind == "rational":
        m = 1
        for e in row:
            m = m * e.denominator // _gcd(m, e.denominator)
        return [e * m for e in row]
    if field.kind == "gaussian_rational":
        m = 1
        for e in row:
            for d in (e.re.denominator, e.im.denominator):
                m = m * d // _gcd(m, d)
        return [GaussianRational(e.re * m, e.im * m) for e in row]
    return list(row)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def mat_rank(m: ExactMatrix) -> int:
    """Rank via Bareiss elimination (fraction-free after row clearing)."""
    rows = [_clear_row_denominators(m.field, r) for r in m.rows]
    n, c = len(rows), m.ncols
    rank = 0
    prev = m.field.one
    row = 0
    for col in range(c):
        piv = None
        for r in range(row, n):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        pivot = rows[row][col]
        for r in range(row + 1, n):
            f = rows[r][col]
            rows[r] = [(rows[r][j] * pivot - f * rows[row][j]) / prev
                       for j in range(c)]
        prev = pivot
        rank += 1
        row += 1
        if row == n:
            break
    return rank


def mat_rref(m: ExactMatrix):
    """Reduced row echelon form over the field; returns (rows, pivot_cols)."""
    rows = [list(r) for r in m.rows]
    n, c = len(rows), m.ncols
    pivots = []
    row = 0
    for col in range(c):
        piv = None
        for r in range(row, n):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        inv = m.field.one / rows[row][col]
        rows[row] = [e * inv for e in rows[row]]
        for r in range(n):
            if r != row and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    return rows, pivots


def mat_kernel(m: ExactMatrix):
    """Canonical kernel basis; length equals ncols - rank (rank-nullity).

    Basis vector for free column f has a 1 in position f and the negated
    RREF entries in the pivot positions; vectors are ordered by f.
    """
    rows, pivots = mat_rref(m)
    pivset = set(pivots)
    basis = []
    one, zero = m.field.one, m.field.zero
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [zero] * m.ncols
        v[f] = one
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        basis.append(tuple(v))
    return basis
