"""Even and odd super-symmetric bilinear forms.

Conventions used throughout the package:

* basis vectors e_0..e_{d-1}, even ones first; p(i) is the parity of e_i;
* a form is stored through its Gram matrix G[i][j] = B(e_i, e_j);
* on points with coordinates u^a, v^b the form evaluates as
  B(u, v) = sum (-1)^(p(a) p(b)) u^a v^b G[a][b]
  (the coordinate v^b is moved past the basis vector e_a);
* a homogeneous X in gl(V) preserves B infinitesimally when
  B(X e_b, e_c) + (-1)^(|X| p(b)) B(e_b, X e_c) = 0 for all b, c.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .grassmann import EVEN, ODD, GPoly, RingSpec
from .linalg import Echelon, det, matmul, transpose
from .superlinalg import SuperDim, SuperMatrix

__all__ = [
    "FormSpec",
    "QuadraticForm",
    "NeedsSquareRoot",
    "DegenerateForm",
    "standard_even_form",
    "standard_odd_form",
    "pfaffian_form",
    "bilinear_from_quadratic",
    "standardize",
    "lie_algebra_basis",
    "component_representatives",
    "evaluate_form",
    "preserves",
    "infinitesimally_preserves",
    "super_commutator",
]


class DegenerateForm(ValueError):
    pass


@dataclass(frozen=True)
class NeedsSquareRoot:
    """Standardization over Q is blocked: ``value`` has no rational square root.

    ``value`` is 1/(2 q(e)) = 1/B(e, e) for the even vector ``vector`` that
    would have to be rescaled to q(e) = 1/2.
    """

    value: Fraction
    vector: Tuple[Fraction, ...]


def _frac_matrix(rows) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


@dataclass(frozen=True)
class FormSpec:
    dim: SuperDim
    gram: Tuple[Tuple[Fraction, ...], ...]
    parity: str = EVEN
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "gram", _frac_matrix(self.gram))
        if self.check:
            problems = self.violations()
            if problems:
                raise ValueError("; ".join(problems))

    def violations(self) -> List[str]:
        d = self.dim.total
        g = self.gram
        out = []
        if len(g) != d or any(len(r) != d for r in g):
            return [f"gram must be {d}x{d}"]
        par = self.dim.parities()
        want = 0 if self.parity == EVEN else 1
        for i in range(d):
            for j in range(d):
                if g[i][j] and (par[i] + par[j]) % 2 != want:
                    out.append(f"gram[{i}][{j}] breaks the {self.parity} block pattern")
                if g[i][j] != (-1) ** (par[i] * par[j]) * g[j][i]:
                    out.append(f"gram[{i}][{j}] breaks super symmetry")
        return out

    @property
    def is_degenerate(self) -> bool:
        return self.dim.total > 0 and det(self.gram) == 0

    def B(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        """Value on two scalar coordinate vectors (combinations of basis vectors)."""
        g = self.gram
        return sum((u[a] * v[b] * g[a][b] for a in range(len(u)) if u[a]
                    for b in range(len(v)) if v[b] and g[a][b]), Fraction(0))

    def to_json(self) -> dict:
        if self.parity == EVEN:
            head = {"m": self.dim.even, "n": self.dim.odd // 2}
        else:
            head = {"n": f"{self.dim.even}|{self.dim.odd}"}
        return {**head, "parity": self.parity,
                "gram": [[_fmt(x) for x in r] for r in self.gram]}

    @classmethod
    def from_json(cls, data: dict) -> "FormSpec":
        if data["parity"] == EVEN:
            dim = SuperDim(int(data["m"]), 2 * int(data["n"]))
        else:
            e, o = str(data["n"]).split("|")
            dim = SuperDim(int(e), int(o))
        return cls(dim, [[Fraction(x) for x in r] for r in data["gram"]], data["parity"])


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class QuadraticForm:
    """q(x) = sum a_ij x^i x^j over admissible pairs i <= j (0-based indices)."""

    dim: SuperDim
    coeffs: Dict[Tuple[int, int], Fraction]
    parity: str = EVEN

    def __post_init__(self):
        par = self.dim.parities()
        want = 0 if self.parity == EVEN else 1
        for (i, j), a in self.coeffs.items():
            if not 0 <= i <= j < self.dim.total:
                raise ValueError(f"index pair {(i, j)} must satisfy 0 <= i <= j < {self.dim.total}")
            if i == j and par[i]:
                raise ValueError(f"odd coordinate {i} cannot appear squared")
            if a and (par[i] + par[j]) % 2 != want:
                raise ValueError(f"pair {(i, j)} does not have parity {self.parity}")

    def evaluate(self, coords: Sequence[GPoly]) -> GPoly:
        ring = coords[0].ring
        total = ring.zero()
        for (i, j), a in sorted(self.coeffs.items()):
            if a:
                total = total + coords[i] * coords[j] * Fraction(a)
        return total


# ---------------------------------------------------------------------------
# standard models


def standard_even_form(m: int, n: int) -> FormSpec:
    """B(e_i, e_i) = 1 on the even part, B(e_{m+i}, e_{m+i+n}) = -1 = -B(e_{m+i+n}, e_{m+i})."""
    if m < 0 or n < 0:
        raise ValueError("m, n must be non-negative")
    d = m + 2 * n
    g = [[Fraction(0)] * d for _ in range(d)]
    for i in range(m):
        g[i][i] = Fraction(1)
    for i in range(n):
        g[m + i][m + i + n] = Fraction(-1)
        g[m + i + n][m + i] = Fraction(1)
    return FormSpec(SuperDim(m, 2 * n), g, EVEN)


def pfaffian_form(m: int, n: int) -> FormSpec:
    """Standard even form with the odd pairing halved.

    In this basis B(v, v) = sum x_a^2 + sum_i y_i y_{i+n}, the normalization
    in which the m = 1 binomial expansion of the super Pfaffian is written.
    """
    base = standard_even_form(m, n)
    g = [list(r) for r in base.gram]
    for i in range(n):
        g[m + i][m + i + n] = Fraction(-1, 2)
        g[m + i + n][m + i] = Fraction(1, 2)
    return FormSpec(base.dim, g, EVEN)


def standard_odd_form(n: int) -> FormSpec:
    """B(e_i, f_i) = B(f_i, e_i) = 1 on dim n|n, e_i even, f_i odd."""
    if n < 0:
        raise ValueError("n must be non-negative")
    d = 2 * n
    g = [[Fraction(0)] * d for _ in range(d)]
    for i in range(n):
        g[i][n + i] = Fraction(1)
        g[n + i][i] = Fraction(1)
    return FormSpec(SuperDim(n, n), g, ODD)


# ---------------------------------------------------------------------------
# evaluation on points


def evaluate_form(form: FormSpec, u: Sequence[GPoly], v: Sequence[GPoly]) -> GPoly:
    """B(u, v) for points given by GPoly coordinates (see module docstring)."""
    par = form.dim.parities()
    ring = u[0].ring if u else v[0].ring
    total = ring.zero()
    g = form.gram
    for a, ua in enumerate(u):
        if ua.is_zero():
            continue
        for b, vb in enumerate(v):
            c = g[a][b]
            if not c or vb.is_zero():
                continue
            if par[a] and par[b]:
                c = -c
            total = total + (ua * vb) * c
    return total


def bilinear_from_quadratic(q: QuadraticForm) -> Tuple[FormSpec, bool]:
    """Polarize q: B(x, y) = q(x + y) - q(x) - q(y).

    Computed symbolically on two generic points; the Gram entries are read
    off the coefficients of x^a y^b.  Returns (form, degenerate flag).
    """
    d = q.dim.total
    par = q.dim.parities()
    xs = [f"x{i}" for i in range(d)]
    ys = [f"y{i}" for i in range(d)]
    ring = RingSpec(
        even_vars=tuple(v for v, p in zip(xs, par) if not p) + tuple(v for v, p in zip(ys, par) if not p),
        odd_vars=tuple(v for v, p in zip(xs, par) if p) + tuple(v for v, p in zip(ys, par) if p),
    )
    x = [ring.var(v) for v in xs]
    y = [ring.var(v) for v in ys]
    s = [a + b for a, b in zip(x, y)]
    if d == 0:
        return FormSpec(q.dim, [], q.parity), False
    polar = q.evaluate(s) - q.evaluate(x) - q.evaluate(y)
    g = [[Fraction(0)] * d for _ in range(d)]
    for a in range(d):
        for b in range(d):
            # coefficient of x^a y^b, written in that order
            c = polar.coefficient_of(xs[a]) if par[a] else _even_coeff(polar, xs[a])
            c = c.coefficient_of(ys[b]) if par[b] else _even_coeff(c, ys[b])
            val = c.constant_term()
            g[a][b] = -val if (par[a] and par[b]) else val
    form = FormSpec(q.dim, g, q.parity, check=False)
    degenerate = d > 0 and det(form.gram) == 0
    return form, degenerate


def _even_coeff(p: GPoly, name: str) -> GPoly:
    return p.coefficient_of(name, 1)


# ---------------------------------------------------------------------------
# standardization


def _is_rational_square(x: Fraction) -> Optional[Fraction]:
    if x <= 0:
        return None
    from math import isqrt

    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _vec(d: int, i: int) -> List[Fraction]:
    v = [Fraction(0)] * d
    v[i] = Fraction(1)
    return v


def _axpy(a: Fraction, x: Sequence[Fraction], y: Sequence[Fraction]) -> List[Fraction]:
    return [a * xi + yi for xi, yi in zip(x, y)]


def standardize(f: FormSpec):
    """Find T with T^t G T equal to the standard model of f.

    Even forms: peel off even vectors with q(e) != 0 rescaled to q(e) = 1/2,
    then odd hyperbolic pairs with B(e, f) = -1.  Odd forms: pairs (e, f),
    e even, f odd, normalized to B(e, f) = 1 and corrected to
    (e - (alpha/2) f, f) with alpha = B(e, e).

    Returns ``(T, standard_form)`` or a :class:`NeedsSquareRoot`.
    """
    d = f.dim.total
    if d and det(f.gram) == 0:
        raise DegenerateForm("form is degenerate")
    if f.parity == EVEN:
        return _standardize_even(f)
    return _standardize_odd(f)


def _candidates(pool: List[List[Fraction]]):
    for v in pool:
        yield v
    for i in range(len(pool)):
        for j in range(i + 1, len(pool)):
            yield [a + b for a, b in zip(pool[i], pool[j])]
            yield [a - b for a, b in zip(pool[i], pool[j])]


def _standardize_even(f: FormSpec):
    m, odd = f.dim.even, f.dim.odd
    d = f.dim.total
    B = f.B
    even_pool = [_vec(d, i) for i in range(m)]
    chosen_even: List[List[Fraction]] = []
    while even_pool:
        first_obstruction = None
        pick = None
        for v in _candidates(even_pool):
            bvv = B(v, v)
            if bvv == 0:
                continue
            r = _is_rational_square(1 / bvv)
            if r is not None:
                pick = [r * a for a in v]
                break
            if first_obstruction is None:
                first_obstruction = NeedsSquareRoot(1 / bvv, tuple(v))
        if pick is None:
            # non-degenerate even part always has an anisotropic candidate
            return first_obstruction
        chosen_even.append(pick)
        even_pool = [_axpy(-B(pick, w), pick, w) for w in even_pool]
        even_pool = _drop_dependent(even_pool)
    odd_pool = [_vec(d, m + i) for i in range(odd)]
    es: List[List[Fraction]] = []
    fs: List[List[Fraction]] = []
    while odd_pool:
        e = odd_pool[0]
        partner = next((w for w in odd_pool[1:] if B(e, w) != 0), None)
        if partner is None:
            raise DegenerateForm("odd part is degenerate")
        fv = [a * (-1 / B(e, partner)) for a in partner]
        es.append(e)
        fs.append(fv)
        rest = [w for w in odd_pool[1:] if w is not partner]
        odd_pool = _drop_dependent([
            [wi - B(fv, w) * ei + B(e, w) * fi for wi, ei, fi in zip(w, e, fv)] for w in rest
        ])
    cols = chosen_even + es + fs
    T = transpose(cols) if cols else []
    std = standard_even_form(m, odd // 2)
    return SuperMatrix.from_rational(f.dim, f.dim, T), std


def _standardize_odd(f: FormSpec):
    n = f.dim.even
    if f.dim.odd != n:
        raise DegenerateForm("an odd non-degenerate form needs dim n|n")
    d = f.dim.total
    B = f.B
    even_pool = [_vec(d, i) for i in range(n)]
    odd_pool = [_vec(d, n + i) for i in range(n)]
    es, fs = [], []
    while even_pool:
        e = even_pool[0]
        partner = next((w for w in odd_pool if B(e, w) != 0), None)
        if partner is None:
            raise DegenerateForm("form is degenerate")
        fv = [a / B(e, partner) for a in partner]
        alpha = B(e, e)
        e = _axpy(-alpha / 2, fv, e)
        es.append(e)
        fs.append(fv)
        even_pool = _drop_dependent([
            [wi - B(fv, w) * ei - B(e, w) * fi for wi, ei, fi in zip(w, e, fv)] for w in even_pool[1:]
        ])
        odd_pool = _drop_dependent([
            [wi - B(fv, w) * ei - B(e, w) * fi for wi, ei, fi in zip(w, e, fv)]
            for w in odd_pool if w is not partner
        ])
    cols = es + fs
    T = transpose(cols) if cols else []
    return SuperMatrix.from_rational(f.dim, f.dim, T), standard_odd_form(n)


def _drop_dependent(vectors: List[List[Fraction]]) -> List[List[Fraction]]:
    if not vectors:
        return vectors
    e = Echelon(len(vectors[0]))
    out = []
    for v in vectors:
        if e.add({i: x for i, x in enumerate(v) if x}):
            out.append(v)
    return out


def conjugate_gram(T: SuperMatrix, f: FormSpec) -> List[List[Fraction]]:
    t = T.to_rational()
    return matmul(matmul(transpose(t), [list(r) for r in f.gram]), t)


# ---------------------------------------------------------------------------
# Lie superalgebra and component group


def _preservation_rows(f: FormSpec, xpar: int, unknowns: List[Tuple[int, int]]):
    """Linear conditions on the entries X[a][b] for B(X e_b, e_c) + s B(e_b, X e_c) = 0."""
    d = f.dim.total
    par = f.dim.parities()
    g = f.gram
    col = {ab: k for k, ab in enumerate(unknowns)}
    rows = []
    for b in range(d):
        sign = -1 if (xpar and par[b]) else 1
        for c in range(d):
            row: Dict[int, Fraction] = {}
            # B(X e_b, e_c) = sum_a X[a][b] G[a][c]
            for a in range(d):
                if g[a][c] and (a, b) in col:
                    k = col[(a, b)]
                    row[k] = row.get(k, 0) + g[a][c]
            # B(e_b, X e_c) = sum_a X[a][c] G[b][a]
            for a in range(d):
                if g[b][a] and (a, c) in col:
                    k = col[(a, c)]
                    row[k] = row.get(k, 0) + sign * g[b][a]
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    return rows


def lie_algebra_basis(f: FormSpec) -> Dict[str, List[SuperMatrix]]:
    """Rational basis of the Lie superalgebra of f, split as {'even': [...], 'odd': [...]}.

    Each part is the exact nullspace of the preservation conditions over the
    matrices of that parity; basis vectors come out in free-column order.
    """
    d = f.dim.total
    par = f.dim.parities()
    out: Dict[str, List[SuperMatrix]] = {}
    for xpar, name in ((0, EVEN), (1, ODD)):
        unknowns = [(a, b) for a in range(d) for b in range(d) if (par[a] + par[b]) % 2 == xpar]
        ech = Echelon(len(unknowns))
        for r in _preservation_rows(f, xpar, unknowns):
            ech.add(r)
        mats = []
        for vec in ech.nullspace():
            X = [[Fraction(0)] * d for _ in range(d)]
            for k, v in vec.items():
                a, b = unknowns[k]
                X[a][b] = v
            mats.append(SuperMatrix.from_rational(f.dim, f.dim, X, name))
        out[name] = mats
    return out


def lie_basis_list(f: FormSpec) -> List[SuperMatrix]:
    basis = lie_algebra_basis(f)
    return basis[EVEN] + basis[ODD]


def component_representatives(f: FormSpec) -> List[SuperMatrix]:
    """[Identity, reflection] for even forms with m >= 1, else [Identity]."""
    ident = SuperMatrix.identity(f.dim)
    if f.parity == EVEN and f.dim.even >= 1:
        vals = [-1] + [1] * (f.dim.total - 1)
        return [ident, SuperMatrix.diag(f.dim, vals)]
    return [ident]


def reflection(dim: SuperDim) -> SuperMatrix:
    return SuperMatrix.diag(dim, [-1] + [1] * (dim.total - 1))


def parity_automorphism(dim: SuperDim) -> SuperMatrix:
    return SuperMatrix.diag(dim, [1] * dim.even + [-1] * dim.odd)


def preserves(g: SuperMatrix, f: FormSpec) -> bool:
    """Rational even g preserves f iff g^t G g = G (no signs: g is block diagonal)."""
    t = g.to_rational()
    return matmul(matmul(transpose(t), [list(r) for r in f.gram]), t) == [list(r) for r in f.gram]


def infinitesimally_preserves(X: SuperMatrix, f: FormSpec) -> bool:
    d = f.dim.total
    par = f.dim.parities()
    x = X.to_rational()
    g = f.gram
    xpar = 0 if X.parity == EVEN else 1
    for b in range(d):
        sign = -1 if (xpar and par[b]) else 1
        for c in range(d):
            lhs = sum((x[a][b] * g[a][c] for a in range(d)), Fraction(0))
            rhs = sum((x[a][c] * g[b][a] for a in range(d)), Fraction(0))
            if lhs + sign * rhs:
                return False
    return True


def super_commutator(X: SuperMatrix, Y: SuperMatrix) -> SuperMatrix:
    """[X, Y] = XY - (-1)^(|X||Y|) YX for rational homogeneous matrices."""
    xy = (X @ Y).to_rational()
    yx = (Y @ X).to_rational()
    s = -1 if (X.parity == ODD and Y.parity == ODD) else 1
    par = EVEN if X.parity == Y.parity else ODD
    vals = [[a - s * b for a, b in zip(r1, r2)] for r1, r2 in zip(xy, yx)]
    return SuperMatrix.from_rational(X.dim_out, X.dim_in, vals, par)
