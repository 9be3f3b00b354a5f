"""Exact sparse linear algebra over the rationals.

Rows are dicts ``{column: Fraction}``.  Elimination is incremental and keeps
the accumulated rows in reduced row echelon form; pivots are always the
smallest surviving column, so results depend only on row order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Sequence

Row = Dict[int, Fraction]


class Echelon:
    """Incrementally maintained reduced row echelon form."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: Dict[int, Row] = {}
        # column -> set of pivot columns whose row has a nonzero there
        self._occ: Dict[int, set] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Row) -> Row:
        r = {c: Fraction(v) for c, v in row.items() if v}
        for pc in sorted(set(r) & self.pivots.keys()):
            f = r.get(pc)
            if not f:
                continue
            for c, v in self.pivots[pc].items():
                nv = r.get(c, 0) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        return r

    def add(self, row: Row) -> bool:
        """Insert a row; return True iff it increased the rank."""
        r = self.reduce(row)
        if not r:
            return False
        pc = min(r)
        inv = 1 / r[pc]
        r = {c: v * inv for c, v in r.items()}
        # clear the new pivot column from existing rows
        for other in list(self._occ.get(pc, ())):
            orow = self.pivots[other]
            f = orow[pc]
            for c, v in r.items():
                nv = orow.get(c, 0) - f * v
                if nv:
                    if c not in orow:
                        self._occ.setdefault(c, set()).add(other)
                    orow[c] = nv
                else:
                    if c in orow:
                        del orow[c]
                        self._occ[c].discard(other)
        self._occ.pop(pc, None)
        self.pivots[pc] = r
        for c in r:
            if c != pc:
                self._occ.setdefault(c, set()).add(pc)
        return True

    def contains(self, row: Row) -> bool:
        return not self.reduce(row)

    def free_columns(self) -> List[int]:
        return [c for c in range(self.ncols) if c not in self.pivots]

    def nullspace(self) -> List[Row]:
        """Basis of {x : row . x = 0 for all rows}, one vector per free column."""
        basis = []
        for f in self.free_columns():
            v: Row = {f: Fraction(1)}
            for pc in self._occ.get(f, ()):
                v[pc] = -self.pivots[pc][f]
            basis.append(dict(sorted(v.items())))
        return basis

    def rows(self) -> List[Row]:
        return [self.pivots[c] for c in sorted(self.pivots)]


def rank(rows: Iterable[Row], ncols: int) -> int:
    e = Echelon(ncols)
    for r in rows:
        e.add(r)
    return e.rank


def nullspace(rows: Iterable[Row], ncols: int) -> List[Row]:
    e = Echelon(ncols)
    for r in rows:
        e.add(r)
    return e.nullspace()


def dense_to_rows(matrix: Sequence[Sequence]) -> List[Row]:
    return [{j: Fraction(v) for j, v in enumerate(row) if v} for row in matrix]


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant of a square rational matrix by fraction Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return sign * result


def inverse(matrix: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))] for i in range(len(a))]


def transpose(a):
    return [list(r) for r in zip(*a)]
