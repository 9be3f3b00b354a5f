"""Exact supercommutative polynomial arithmetic over the rationals.

A :class:`GPoly` lives in the ring freely generated by commuting even
variables and anticommuting odd (square-zero) variables.  Monomials are
stored in normal form: a tuple of even exponents plus a bitmask of odd
variables, the odd factors implicitly written in ascending ring order.
The sign of any reordering is absorbed into the coefficient.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, NamedTuple, Optional, Tuple, Union

__all__ = [
    "RingSpec",
    "Monomial",
    "GPoly",
    "NotDivisible",
    "RingMismatch",
    "ParityError",
    "EVEN",
    "ODD",
    "MIXED",
    "gp_add",
    "gp_mul",
    "gp_parity",
    "gp_reduced_part",
    "gp_substitute",
    "gp_divide_exact",
    "gp_is_nilpotent",
    "parse_gpoly",
]

EVEN = "even"
ODD = "odd"
MIXED = "mixed"

Number = Union[int, Fraction]


class RingMismatch(ValueError):
    pass


class ParityError(ValueError):
    pass


class NotDivisible(ArithmeticError):
    """Raised by :func:`gp_divide_exact` when the quotient is not a polynomial."""


@dataclass(frozen=True)
class RingSpec:
    even_vars: Tuple[str, ...] = ()
    odd_vars: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "even_vars", tuple(self.even_vars))
        object.__setattr__(self, "odd_vars", tuple(self.odd_vars))
        names = self.even_vars + self.odd_vars
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        bad = [v for v in names if not _NAME_RE.fullmatch(v)]
        if bad:
            raise ValueError(f"invalid variable names: {bad}")

    @property
    def n_even(self) -> int:
        return len(self.even_vars)

    @property
    def n_odd(self) -> int:
        return len(self.odd_vars)

    def is_odd_var(self, name: str) -> bool:
        return name in self._odd_index

    @property
    def _even_index(self) -> Dict[str, int]:
        idx = self.__dict__.get("_even_idx_cache")
        if idx is None:
            idx = {v: i for i, v in enumerate(self.even_vars)}
            object.__setattr__(self, "_even_idx_cache", idx)
        return idx

    @property
    def _odd_index(self) -> Dict[str, int]:
        idx = self.__dict__.get("_odd_idx_cache")
        if idx is None:
            idx = {v: i for i, v in enumerate(self.odd_vars)}
            object.__setattr__(self, "_odd_idx_cache", idx)
        return idx

    # convenience constructors

    def zero(self) -> "GPoly":
        return GPoly(self, {})

    def one(self) -> "GPoly":
        return self.const(1)

    def const(self, c: Number) -> "GPoly":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return GPoly(self, {(self._zero_exps(), 0): c})

    def var(self, name: str) -> "GPoly":
        if name in self._even_index:
            exps = [0] * self.n_even
            exps[self._even_index[name]] = 1
            return GPoly(self, {(tuple(exps), 0): Fraction(1)})
        if name in self._odd_index:
            return GPoly(self, {(self._zero_exps(), 1 << self._odd_index[name]): Fraction(1)})
        raise KeyError(f"unknown variable {name!r}")

    def vars(self, *names: str):
        return tuple(self.var(n) for n in names)

    def _zero_exps(self) -> Tuple[int, ...]:
        return (0,) * self.n_even

    def parse(self, text: str) -> "GPoly":
        return parse_gpoly(text, self)


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class Monomial(NamedTuple):
    """Normal-form monomial: even exponents and an ascending odd-variable bitmask."""

    exps: Tuple[int, ...]
    odd: int

    def odd_indices(self) -> Tuple[int, ...]:
        return _bits(self.odd)

    @property
    def odd_degree(self) -> int:
        return bin(self.odd).count("1")

    @property
    def degree(self) -> int:
        return sum(self.exps) + self.odd_degree


def _bits(mask: int) -> Tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


_SIGN_CACHE: Dict[Tuple[int, int], int] = {}


def _merge_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation (odd factors of a) + (odd factors of b).

    Counts pairs (i in a, j in b) with i > j.  Callers guarantee a & b == 0.
    """
    key = (a, b)
    s = _SIGN_CACHE.get(key)
    if s is None:
        inv = 0
        bb = b
        j = 0
        while bb:
            if bb & 1:
                inv += bin(a >> (j + 1)).count("1")
            bb >>= 1
            j += 1
        s = -1 if inv & 1 else 1
        if len(_SIGN_CACHE) < 1 << 20:
            _SIGN_CACHE[key] = s
    return s


def _sort_sign(indices: Iterable[int]) -> Tuple[int, int]:
    """Return (sign, mask) for the product of odd generators in the given order.

    sign is 0 when an index repeats.
    """
    mask = 0
    sign = 1
    for i in indices:
        bit = 1 << i
        if mask & bit:
            return 0, 0
        if bin(mask >> (i + 1)).count("1") & 1:
            sign = -sign
        mask |= bit
    return sign, mask


Terms = Dict[Tuple[Tuple[int, ...], int], Fraction]


class GPoly:
    """Element of a supercommutative polynomial ring with rational coefficients.

    Values are immutable; arithmetic operators return new objects.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Optional[Mapping] = None, *, _trusted: bool = False):
        self.ring = ring
        if _trusted:
            self._terms = terms
        else:
            clean: Terms = {}
            for key, c in (terms or {}).items():
                exps, odd = key
                c = Fraction(c)
                if c != 0:
                    clean[(tuple(exps), int(odd))] = clean.get((tuple(exps), int(odd)), 0) + c
            self._terms = {k: v for k, v in clean.items() if v != 0}
        self._hash = None

    # ---- basic protocol ---------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return {Monomial(*k): v for k, v in self._terms.items()}

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, GPoly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == self.ring.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"GPoly({self})"

    def __str__(self) -> str:
        return format_gpoly(self)

    def _coerce(self, other) -> "GPoly":
        if isinstance(other, GPoly):
            if other.ring != self.ring:
                raise RingMismatch("operands live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine GPoly with {type(other).__name__}")

    def __add__(self, other):
        return gp_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return GPoly(self.ring, {k: -v for k, v in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        return gp_add(self, -self._coerce(other))

    def __rsub__(self, other):
        return gp_add(self._coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return gp_mul(self, self._coerce(other))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return gp_mul(self._coerce(other), self)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Number) -> "GPoly":
        c = Fraction(c)
        if c == 0:
            return self.ring.zero()
        return GPoly(self.ring, {k: v * c for k, v in self._terms.items()}, _trusted=True)

    # ---- structure ---------------------------------------------------------

    def parity(self) -> str:
        return gp_parity(self)

    def reduced(self) -> "GPoly":
        return gp_reduced_part(self)

    def constant_term(self) -> Fraction:
        return self._terms.get((self.ring._zero_exps(), 0), Fraction(0))

    def is_constant(self) -> bool:
        return all(k == (self.ring._zero_exps(), 0) for k in self._terms)

    def odd_strata(self) -> Dict[int, Dict[Tuple[int, ...], Fraction]]:
        """Split into {odd mask: even polynomial (exps -> coeff)}."""
        out: Dict[int, Dict[Tuple[int, ...], Fraction]] = {}
        for (exps, odd), c in self._terms.items():
            out.setdefault(odd, {})[exps] = c
        return out

    def coefficient_of(self, name: str, power: int = 1) -> "GPoly":
        """Coefficient of ``name**power`` (``power`` must be 1 for odd variables).

        For an odd variable the variable is moved to the far left before it is
        stripped, i.e. ``p = name * result + (terms free of name)``.
        """
        ring = self.ring
        out: Terms = {}
        if name in ring._even_index:
            i = ring._even_index[name]
            for (exps, odd), c in self._terms.items():
                if exps[i] == power:
                    ne = exps[:i] + (0,) + exps[i + 1:]
                    out[(ne, odd)] = c
        else:
            if power != 1:
                raise ValueError("odd variables only occur to the first power")
            j = ring._odd_index[name]
            bit = 1 << j
            for (exps, odd), c in self._terms.items():
                if odd & bit:
                    rest = odd & ~bit
                    # name * rest == sign * (name merged in ascending order)
                    sign = _merge_sign(bit, rest)
                    out[(exps, rest)] = c * sign
        return GPoly(ring, out, _trusted=True)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) + bin(o).count("1") for e, o in self._terms)

    def is_homogeneous(self, degree: Optional[int] = None) -> bool:
        degs = {sum(e) + bin(o).count("1") for e, o in self._terms}
        if degree is None:
            return len(degs) <= 1
        return degs <= {degree}


# ---------------------------------------------------------------------------
# ring operations


def _check_ring(p: GPoly, q: GPoly) -> None:
    if p.ring != q.ring:
        raise RingMismatch("operands live in different rings")


def gp_add(p: GPoly, q: GPoly) -> GPoly:
    _check_ring(p, q)
    if len(p._terms) < len(q._terms):
        p, q = q, p
    out = dict(p._terms)
    for k, v in q._terms.items():
        s = out.get(k)
        if s is None:
            out[k] = v
        else:
            s += v
            if s:
                out[k] = s
            else:
                del out[k]
    return GPoly(p.ring, out, _trusted=True)


def gp_mul(p: GPoly, q: GPoly) -> GPoly:
    """Product with the Koszul sign from merging the odd factors."""
    _check_ring(p, q)
    return GPoly(p.ring, _mul_terms(p._terms, q._terms), _trusted=True)


def _mul_terms(a: Terms, b: Terms, keep=None) -> Terms:
    out: Terms = {}
    get = out.get
    sign_of = _merge_sign
    # group b by odd mask to reuse sign computations
    b_items = list(b.items())
    for (ea, oa), ca in a.items():
        for (eb, ob), cb in b_items:
            if oa & ob:
                continue
            s = sign_of(oa, ob)
            exps = tuple([x + y for x, y in zip(ea, eb)]) if ea else ea
            if keep is not None and not keep(exps):
                continue
            key = (exps, oa | ob)
            c = ca * cb if s > 0 else -(ca * cb)
            prev = get(key)
            if prev is None:
                out[key] = c
            else:
                prev += c
                if prev:
                    out[key] = prev
                else:
                    del out[key]
    return out


def gp_parity(p: GPoly) -> str:
    """even / odd / mixed; the zero polynomial counts as even."""
    pars = {bin(o).count("1") & 1 for (_, o) in p._terms}
    if not pars or pars == {0}:
        return EVEN
    if pars == {1}:
        return ODD
    return MIXED


def gp_reduced_part(p: GPoly) -> GPoly:
    return GPoly(p.ring, {k: v for k, v in p._terms.items() if k[1] == 0}, _trusted=True)


def gp_is_nilpotent(p: GPoly) -> bool:
    return all(o for (_, o) in p._terms)


def gp_substitute(
    p: GPoly,
    bindings: Mapping[str, GPoly],
    target: Optional[RingSpec] = None,
    truncate: Optional[Mapping[str, int]] = None,
) -> GPoly:
    """Simultaneously substitute variables of ``p`` by GPolys.

    ``target`` is the ring the bindings live in (defaults to the ring of the
    first binding, or ``p.ring``).  Unbound variables map to the same-named
    variable of ``target``.  ``truncate`` maps even variables of ``target`` to
    a maximal exponent; higher powers are dropped during expansion, which is
    how first-order (derivative) coefficients are extracted cheaply.
    """
    ring = p.ring
    if target is None:
        target = next(iter(bindings.values())).ring if bindings else ring
    for name, val in bindings.items():
        if name not in ring._even_index and name not in ring._odd_index:
            raise KeyError(f"unknown variable {name!r}")
        if val.ring != target:
            raise RingMismatch(f"binding for {name!r} lives in another ring")
        par = gp_parity(val)
        if ring.is_odd_var(name):
            if par != ODD and not val.is_zero():
                raise ParityError(f"odd variable {name!r} bound to a {par} value")
        elif par != EVEN:
            raise ParityError(f"even variable {name!r} bound to a {par} value")

    keep = None
    if truncate:
        limits = [(target._even_index[v], d) for v, d in truncate.items()]

        def keep(exps):
            return all(exps[i] <= d for i, d in limits)

    def image(name: str) -> GPoly:
        if name in bindings:
            return bindings[name]
        return target.var(name)

    even_imgs = [image(v) for v in ring.even_vars]
    odd_imgs = [image(v) for v in ring.odd_vars]
    power_cache: Dict[Tuple[int, int], Terms] = {}

    def even_power(i: int, e: int) -> Terms:
        key = (i, e)
        t = power_cache.get(key)
        if t is None:
            if e == 1:
                t = even_imgs[i]._terms
            else:
                t = _mul_terms(even_power(i, e - 1), even_imgs[i]._terms, keep)
            power_cache[key] = t
        return t

    one = target.one()._terms
    out: Terms = {}
    # memoise products over the even part, which is shared by many terms
    even_cache: Dict[Tuple[int, ...], Terms] = {}
    for (exps, odd), c in p._terms.items():
        ev = even_cache.get(exps)
        if ev is None:
            ev = one
            for i, e in enumerate(exps):
                if e:
                    ev = _mul_terms(ev, even_power(i, e), keep)
                    if not ev:
                        break
            even_cache[exps] = ev
        acc = ev
        for j in _bits(odd):
            if not acc:
                break
            acc = _mul_terms(acc, odd_imgs[j]._terms, keep)
        for k, v in acc.items():
            s = out.get(k, 0) + c * v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return GPoly(target, out, _trusted=True)


# ---------------------------------------------------------------------------
# exact division


def _grlex_key(exps: Tuple[int, ...]):
    return (sum(exps), exps)


def _divide_even(p: Dict[Tuple[int, ...], Fraction], d: Dict[Tuple[int, ...], Fraction]):
    """Exact division of commutative polynomials; None when d does not divide p.

    Single-divisor division with graded-lex leading terms; since {d} is a
    Groebner basis of (d), a leading term not divisible by lm(d) proves that
    d does not divide p.
    """
    if not p:
        return {}
    lm = max(d, key=_grlex_key)
    lc = d[lm]
    d_rest = [(e, c) for e, c in d.items() if e != lm]
    rem = dict(p)
    heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
    heapq.heapify(heap)
    q: Dict[Tuple[int, ...], Fraction] = {}
    while heap:
        neg_deg, neg_e = heapq.heappop(heap)
        e = tuple(-x for x in neg_e)
        c = rem.pop(e, None)
        if c is None:
            continue
        shift = tuple(a - b for a, b in zip(e, lm))
        if any(s < 0 for s in shift):
            return None
        f = c / lc
        q[shift] = f
        for de, dc in d_rest:
            ne = tuple(a + b for a, b in zip(de, shift))
            val = rem.get(ne)
            delta = f * dc
            if val is None:
                rem[ne] = -delta
                heapq.heappush(heap, (-sum(ne), tuple(-x for x in ne)))
            else:
                val -= delta
                if val:
                    rem[ne] = val
                else:
                    del rem[ne]
    return q


def gp_divide_exact(p: GPoly, d: GPoly) -> GPoly:
    """Return q with q*d == p, raising :class:`NotDivisible` otherwise.

    d must be even with a nonzero reduced part d0.  Writing d = d0 + d_nil,
    the odd-degree components of q are solved in increasing order:
    q_k = (p_k - sum_{j<k} q_j * d_nil[k-j]) / d0, where division by d0 acts
    independently on every odd-monomial stratum.
    """
    _check_ring(p, d)
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if gp_parity(d) != EVEN:
        raise ParityError("divisor must be even")
    d0 = {e: c for (e, o), c in d._terms.items() if o == 0}
    if not d0:
        raise ParityError("divisor has zero reduced part (it is nilpotent)")
    ring = p.ring
    by_deg: Dict[int, Terms] = {}
    for k, v in p._terms.items():
        by_deg.setdefault(bin(k[1]).count("1"), {})[k] = v
    d_nil: Dict[int, Terms] = {}
    for k, v in d._terms.items():
        od = bin(k[1]).count("1")
        if od:
            d_nil.setdefault(od, {})[k] = v
    q_parts: Dict[int, Terms] = {}
    max_deg = ring.n_odd
    for k in range(max_deg + 1):
        target = dict(by_deg.get(k, {}))
        for j, qj in q_parts.items():
            dk = d_nil.get(k - j)
            if not dk or not qj:
                continue
            for key, v in _mul_terms(qj, dk).items():
                s = target.get(key, 0) - v
                if s:
                    target[key] = s
                else:
                    target.pop(key, None)
        if not target:
            continue
        strata: Dict[int, Dict[Tuple[int, ...], Fraction]] = {}
        for (e, o), c in target.items():
            strata.setdefault(o, {})[e] = c
        qk: Terms = {}
        for o in sorted(strata):
            qs = _divide_even(strata[o], d0)
            if qs is None:
                raise NotDivisible(f"{d} does not divide the dividend")
            for e, c in qs.items():
                qk[(e, o)] = c
        q_parts[k] = qk
    out: Terms = {}
    for qk in q_parts.values():
        out.update(qk)
    return GPoly(ring, out, _trusted=True)


# ---------------------------------------------------------------------------
# canonical text format


def _term_sort_key(item):
    (exps, odd), _ = item
    return (-(sum(exps) + bin(odd).count("1")), tuple(-x for x in exps), odd)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_gpoly(p: GPoly) -> str:
    """Canonical text: ``3/2*x*y1*y2 - x^2 + 5``.

    Terms are sorted by descending total degree, then by even exponents;
    even variables precede odd variables, each in ring order.
    """
    if not p._terms:
        return "0"
    ring = p.ring
    pieces = []
    for i, ((exps, odd), c) in enumerate(sorted(p._terms.items(), key=_term_sort_key)):
        factors = []
        for v, e in zip(ring.even_vars, exps):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        factors.extend(ring.odd_vars[j] for j in _bits(odd))
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        if i == 0:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


_TERM_SPLIT = re.compile(r"\s+([+\-−])\s+")
_FACTOR_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")
_COEFF_RE = re.compile(r"\d+(?:/\d+)?$")


def parse_gpoly(text: str, ring: RingSpec) -> GPoly:
    """Parse the canonical text format (also accepts the unicode minus sign)."""
    s = text.strip().replace("−", "-")
    if not s:
        raise ValueError("empty polynomial text")
    sign = 1
    if s.startswith("-"):
        sign = -1
        s = s[1:].lstrip()
    parts = _TERM_SPLIT.split(s)
    chunks = [(sign, parts[0])]
    for op, body in zip(parts[1::2], parts[2::2]):
        chunks.append((1 if op == "+" else -1, body))
    out: Terms = {}
    zero = ring._zero_exps()
    for sg, body in chunks:
        coeff = Fraction(sg)
        exps = list(zero)
        odd_seq = []
        for f in body.split("*"):
            f = f.strip()
            if _COEFF_RE.fullmatch(f):
                coeff *= Fraction(f)
                continue
            m = _FACTOR_RE.fullmatch(f)
            if not m:
                raise ValueError(f"cannot parse factor {f!r}")
            name, power = m.group(1), int(m.group(2) or 1)
            if name in ring._even_index:
                exps[ring._even_index[name]] += power
            elif name in ring._odd_index:
                if power > 1:
                    coeff = Fraction(0)
                odd_seq.append(ring._odd_index[name])
            else:
                raise ValueError(f"unknown variable {name!r}")
        sgn, mask = _sort_sign(odd_seq)
        coeff *= sgn
        if coeff:
            key = (tuple(exps), mask)
            val = out.get(key, 0) + coeff
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return GPoly(ring, out, _trusted=True)
