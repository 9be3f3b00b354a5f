"""Parity-graded matrices over a GPoly ring and the Berezinian.

Matrices act on coordinate columns in a fixed homogeneous basis (even basis
vectors first).  Products are the ordinary row-by-column products; every
Koszul sign lives inside the ring arithmetic of the entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import List, Optional, Sequence, Tuple, Union

from .grassmann import (
    EVEN,
    ODD,
    GPoly,
    NotDivisible,
    ParityError,
    RingMismatch,
    RingSpec,
    gp_divide_exact,
    gp_parity,
    gp_reduced_part,
    parse_gpoly,
)

__all__ = [
    "SuperDim",
    "SuperMatrix",
    "Localized",
    "SingularBlock",
    "smat_mul",
    "smat_apply",
    "berezinian",
    "berezinian_via_even_block",
    "determinant",
    "EMPTY_RING",
]

EMPTY_RING = RingSpec()


class SingularBlock(ArithmeticError):
    pass


@dataclass(frozen=True)
class SuperDim:
    even: int
    odd: int

    def __post_init__(self):
        if self.even < 0 or self.odd < 0:
            raise ValueError("dimensions must be non-negative")

    @property
    def total(self) -> int:
        return self.even + self.odd

    def parity(self, i: int) -> int:
        """Parity (0/1) of the i-th basis vector, 0-based."""
        if not 0 <= i < self.total:
            raise IndexError(i)
        return 0 if i < self.even else 1

    def parities(self) -> Tuple[int, ...]:
        return (0,) * self.even + (1,) * self.odd

    def __str__(self) -> str:
        return f"{self.even}|{self.odd}"


def _par(name: str) -> int:
    return 0 if name == EVEN else 1


def _name(p: int) -> str:
    return EVEN if p % 2 == 0 else ODD


class SuperMatrix:
    """A (dim_out x dim_in) matrix of GPolys with a declared parity.

    Entry (i, j) must have parity p(i) + p(j) + declared parity (zero entries
    are allowed anywhere).
    """

    __slots__ = ("dim_out", "dim_in", "entries", "parity", "ring")

    def __init__(self, dim_out: SuperDim, dim_in: SuperDim, entries, parity: str = EVEN,
                 ring: Optional[RingSpec] = None):
        rows = [list(r) for r in entries]
        if len(rows) != dim_out.total or any(len(r) != dim_in.total for r in rows):
            raise ValueError(f"entries do not have shape {dim_out.total}x{dim_in.total}")
        if ring is None:
            ring = next((e.ring for r in rows for e in r if isinstance(e, GPoly)), EMPTY_RING)
        conv = []
        for r in rows:
            crow = []
            for e in r:
                if isinstance(e, GPoly):
                    if e.ring != ring:
                        raise RingMismatch("matrix entries from different rings")
                    crow.append(e)
                else:
                    crow.append(ring.const(Fraction(e)))
            conv.append(tuple(crow))
        self.dim_out = dim_out
        self.dim_in = dim_in
        self.entries: Tuple[Tuple[GPoly, ...], ...] = tuple(conv)
        self.parity = parity
        self.ring = ring
        self._check_pattern()

    def _check_pattern(self):
        dp = _par(self.parity)
        for i, row in enumerate(self.entries):
            pi = self.dim_out.parity(i)
            for j, e in enumerate(row):
                if e.is_zero():
                    continue
                want = _name(pi + self.dim_in.parity(j) + dp)
                if gp_parity(e) != want:
                    raise ParityError(
                        f"entry ({i},{j}) = {e} should be {want} in a {self.parity} matrix")

    # constructors

    @classmethod
    def identity(cls, dim: SuperDim, ring: RingSpec = EMPTY_RING) -> "SuperMatrix":
        n = dim.total
        return cls(dim, dim, [[int(i == j) for j in range(n)] for i in range(n)], EVEN, ring)

    @classmethod
    def diag(cls, dim: SuperDim, values: Sequence, ring: RingSpec = EMPTY_RING) -> "SuperMatrix":
        n = dim.total
        return cls(dim, dim, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], EVEN, ring)

    @classmethod
    def from_rational(cls, dim_out: SuperDim, dim_in: SuperDim, rows, parity: str = EVEN,
                      ring: RingSpec = EMPTY_RING) -> "SuperMatrix":
        return cls(dim_out, dim_in, [[Fraction(x) for x in r] for r in rows], parity, ring)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.dim_out.total, self.dim_in.total

    def __getitem__(self, ij) -> GPoly:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.dim_out == other.dim_out and self.dim_in == other.dim_in
                and self.entries == other.entries
                and (self.parity == other.parity or self.is_zero()))

    def __hash__(self):
        return hash((self.dim_out, self.dim_in, self.entries))

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        return smat_mul(self, other)

    def __repr__(self) -> str:
        return f"SuperMatrix({self.dim_out}x{self.dim_in}, {self.parity}, {self.to_text()})"

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def is_rational(self) -> bool:
        return all(e.is_constant() for r in self.entries for e in r)

    def to_rational(self) -> List[List[Fraction]]:
        if not self.is_rational():
            raise ValueError("matrix has non-constant entries")
        return [[e.constant_term() for e in r] for r in self.entries]

    def lift(self, ring: RingSpec) -> "SuperMatrix":
        """Re-embed a rational matrix into another ring."""
        if ring == self.ring:
            return self
        return SuperMatrix.from_rational(self.dim_out, self.dim_in, self.to_rational(), self.parity, ring)

    def blocks(self):
        """(A, B, C, D) as nested lists: even-even, even-odd, odd-even, odd-odd."""
        mo, mi = self.dim_out.even, self.dim_in.even
        rows = self.entries
        a = [list(r[:mi]) for r in rows[:mo]]
        b = [list(r[mi:]) for r in rows[:mo]]
        c = [list(r[:mi]) for r in rows[mo:]]
        d = [list(r[mi:]) for r in rows[mo:]]
        return a, b, c, d

    def scale(self, c) -> "SuperMatrix":
        return SuperMatrix(self.dim_out, self.dim_in, [[e * c for e in r] for r in self.entries],
                           self.parity, self.ring)

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        if (self.dim_out, self.dim_in) != (other.dim_out, other.dim_in):
            raise ValueError("dimension mismatch")
        par = self.parity if not self.is_zero() else other.parity
        return SuperMatrix(self.dim_out, self.dim_in,
                           [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
                           par, self.ring)

    def to_text(self) -> List[List[str]]:
        return [[str(e) for e in r] for r in self.entries]

    def to_json(self) -> dict:
        return {"dim_out": str(self.dim_out), "dim_in": str(self.dim_in),
                "parity": self.parity, "rows": self.to_text()}

    @classmethod
    def from_json(cls, data: dict, ring: RingSpec = EMPTY_RING) -> "SuperMatrix":
        def dim(s):
            e, o = s.split("|")
            return SuperDim(int(e), int(o))
        rows = [[parse_gpoly(x, ring) for x in r] for r in data["rows"]]
        return cls(dim(data["dim_out"]), dim(data["dim_in"]), rows, data["parity"], ring)


def smat_mul(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    if a.dim_in != b.dim_out:
        raise ValueError(f"dimension mismatch: {a.dim_in} vs {b.dim_out}")
    if a.ring != b.ring:
        if a.ring == EMPTY_RING:
            a = a.lift(b.ring)
        elif b.ring == EMPTY_RING:
            b = b.lift(a.ring)
        else:
            raise RingMismatch("matrices over different rings")
    ring = a.ring
    n_mid = a.dim_in.total
    cols = list(zip(*b.entries)) if b.entries else [()] * b.dim_in.total
    out = []
    for row in a.entries:
        orow = []
        for col in cols:
            acc = ring.zero()
            for k in range(n_mid):
                x, y = row[k], col[k]
                if x and y:
                    acc = acc + x * y
            orow.append(acc)
        out.append(orow)
    if not cols:
        out = [[] for _ in a.entries]
    parity = _name(_par(a.parity) + _par(b.parity))
    return SuperMatrix(a.dim_out, b.dim_in, out, parity, ring)


def smat_apply(a: SuperMatrix, v: Sequence[GPoly], parities: Optional[Sequence[int]] = None) -> List[GPoly]:
    """Matrix times coordinate column.

    ``parities`` are the declared coordinate parities of ``v``; the default is
    the grading of ``dim_in`` (coordinates of an even point).  Output
    coordinates have parities shifted by the matrix parity.
    """
    if len(v) != a.dim_in.total:
        raise ValueError("vector length does not match the matrix")
    if parities is None:
        parities = a.dim_in.parities()
    ring = a.ring
    vv = []
    for i, (x, p) in enumerate(zip(v, parities)):
        if not isinstance(x, GPoly):
            x = ring.const(Fraction(x)) if ring is not None else x
        if not x.is_zero() and gp_parity(x) != _name(p):
            raise ParityError(f"coordinate {i} = {x} is not of parity {p}")
        vv.append(x)
    if vv and vv[0].ring != ring:
        if ring == EMPTY_RING:
            a = a.lift(vv[0].ring)
            ring = a.ring
        else:
            raise RingMismatch("matrix and vector live in different rings")
    out = []
    for row in a.entries:
        acc = ring.zero()
        for x, y in zip(row, vv):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def determinant(rows: Sequence[Sequence[GPoly]], ring: RingSpec) -> GPoly:
    """Leibniz determinant of a matrix with even (mutually commuting) entries.

    Terms follow the lexicographic order of permutations.
    """
    n = len(rows)
    if n == 0:
        return ring.one()
    if n <= 3:
        total = ring.zero()
        for perm in permutations(range(n)):
            inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
            term = ring.one()
            for i, j in enumerate(perm):
                term = term * rows[i][j]
                if term.is_zero():
                    break
            total = total + (-term if inv & 1 else term)
        return total
    # Laplace expansion along the first row for larger sizes
    total = ring.zero()
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [[r[k] for k in range(n) if k != j] for r in rows[1:]]
        term = rows[0][j] * determinant(minor, ring)
        total = total + (-term if j & 1 else term)
    return total


@dataclass(frozen=True)
class Localized:
    """numerator / base**power, base a purely even polynomial of the ring."""

    numerator: GPoly
    base: GPoly
    power: int

    def cleared(self) -> GPoly:
        """Exact polynomial value; raises NotDivisible if it is not one."""
        q = self.numerator
        for _ in range(self.power):
            q = gp_divide_exact(q, self.base)
        return q

    def try_clear(self) -> Optional[GPoly]:
        try:
            return self.cleared()
        except NotDivisible:
            return None

    def __eq__(self, other) -> bool:
        if isinstance(other, Localized):
            if self.base == other.base:
                k = max(self.power, other.power)
                return (self.numerator * self.base ** (k - self.power)
                        == other.numerator * other.base ** (k - other.power))
            return (self.numerator * other.base ** other.power
                    == other.numerator * self.base ** self.power)
        if isinstance(other, GPoly):
            return self.numerator == other * self.base ** self.power
        return NotImplemented

    __hash__ = None


def _inverse_series(delta: GPoly) -> Localized:
    """1/delta in the localization at delta's reduced part delta0.

    With delta = delta0 + nil: 1/delta = sum_k (-nil)^k / delta0^(k+1).
    """
    ring = delta.ring
    d0 = gp_reduced_part(delta)
    if d0.is_zero():
        raise SingularBlock("reduced part is zero")
    nil = delta - d0
    terms = []
    k = 0
    power = ring.one()
    while not power.is_zero():
        terms.append(power if k % 2 == 0 else -power)
        power = power * nil
        k += 1
    top = len(terms)
    num = ring.zero()
    for i, t in enumerate(terms):
        num = num + t * d0 ** (top - 1 - i)
    return Localized(num, d0, top)


def _reduce_localized(num: GPoly, base: GPoly, power: int) -> Localized:
    while power and not base.is_constant():
        try:
            num = gp_divide_exact(num, base)
        except NotDivisible:
            break
        power -= 1
    if base.is_constant() and power:
        c = base.constant_term()
        num = num.scale(Fraction(1) / c ** power)
        power = 0
    return Localized(num, base, power)


def _schur_numerator(p, q, r, s_block, ring):
    """det(delta * P - Q adj(S) R) and delta = det(S) for the complement P - Q S^-1 R."""
    k = len(s_block)
    delta = determinant(s_block, ring)
    adj = [[ring.zero()] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = [[s_block[a][b] for b in range(k) if b != i] for a in range(k) if a != j]
            c = determinant(minor, ring)
            adj[i][j] = -c if (i + j) & 1 else c
    m = len(p)
    comp = []
    for i in range(m):
        row = []
        for j in range(m):
            acc = p[i][j] * delta
            for a in range(k):
                if q[i][a].is_zero():
                    continue
                for b in range(k):
                    if adj[a][b].is_zero() or r[b][j].is_zero():
                        continue
                    acc = acc - q[i][a] * adj[a][b] * r[b][j]
            row.append(acc)
        comp.append(row)
    return determinant(comp, ring), delta


def berezinian(a: SuperMatrix, *, as_localized: bool = False):
    """Ber(A) = det(A_ee - A_eo D^-1 A_oe) / det(D), D the odd-odd block.

    Computed as det(delta*A_ee - A_eo adj(D) A_oe) / delta^(m+1) with
    delta = det(D), then brought into the localization at delta's reduced
    part.  Returns a GPoly when the denominator clears exactly, otherwise
    (or with ``as_localized``) a :class:`Localized`.
    """
    if a.parity != EVEN:
        raise ParityError("the Berezinian is only defined for even matrices")
    if a.dim_in != a.dim_out:
        raise ValueError("matrix must be square")
    ring = a.ring
    p, q, r, s = a.blocks()
    if not s:
        return determinant(p, ring)
    num, delta = _schur_numerator(p, q, r, s, ring)
    if gp_reduced_part(delta).is_zero():
        raise SingularBlock("reduced odd-odd block is not invertible")
    m = len(p)
    inv = _inverse_series(delta)
    # num / delta^(m+1) = num * inv.numerator^(m+1) / d0^(inv.power*(m+1))
    loc = _reduce_localized(num * inv.numerator ** (m + 1), inv.base, inv.power * (m + 1))
    if as_localized:
        return loc
    val = loc.try_clear()
    return val if val is not None else loc


def berezinian_via_even_block(a: SuperMatrix, *, as_localized: bool = False):
    """Cross-check formula det(A_ee) / det(D - A_oe A_ee^-1 A_eo)."""
    if a.parity != EVEN:
        raise ParityError("the Berezinian is only defined for even matrices")
    ring = a.ring
    p, q, r, s = a.blocks()
    if not p:
        return berezinian(a, as_localized=as_localized)
    k = len(s)
    # complement T = S - R P^-1 Q; det T = det(eps*S - R adj(P) Q) / eps^k
    num, eps = _schur_numerator(s, r, q, p, ring)
    if gp_reduced_part(eps).is_zero():
        raise SingularBlock("reduced even-even block is not invertible")
    # Ber = eps / det T = eps^(k+1) / num
    inv = _inverse_series(num)
    loc = _reduce_localized(eps ** (k + 1) * inv.numerator, inv.base, inv.power)
    if as_localized:
        return loc
    val = loc.try_clear()
    return val if val is not None else loc

