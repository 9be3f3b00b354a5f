"""Matching invariants and invariant multilinear forms on V^N.

A multilinear form t on V^N is stored by its values on homogeneous basis
tuples, ``t.coeffs[(i_1, ..., i_N)] = t(e_{i_1}, ..., e_{i_N})``.  The
invariant subspace is computed as the exact nullspace of the infinitesimal
conditions (every Lie superalgebra basis element, even and odd) together
with invariance under the component-group representatives.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .forms import FormSpec, component_representatives, lie_algebra_basis, standard_even_form, standard_odd_form
from .grassmann import EVEN, ODD
from .linalg import Echelon
from .superlinalg import SuperDim, SuperMatrix

log = logging.getLogger(__name__)

__all__ = [
    "Matching",
    "TensorForm",
    "InvariantBasis",
    "GuardExceeded",
    "DEFAULT_MAX_CELLS",
    "enumerate_matchings",
    "matching_tensor",
    "lie_act_dual",
    "group_act",
    "permute_slots",
    "koszul_sign",
    "invariant_subspace",
    "fft_spanning_report",
    "is_invariant",
]

DEFAULT_MAX_CELLS = 46656

Index = Tuple[int, ...]


class GuardExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Matching:
    """Perfect matching of {1..N}; pairs (a, b) with a < b sorted by a."""

    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        flat = [x for p in pairs for x in p]
        if sorted(flat) != list(range(1, len(flat) + 1)):
            raise ValueError(f"{pairs} is not a perfect matching of 1..{len(flat)}")

    @property
    def N(self) -> int:
        return 2 * len(self.pairs)

    def order(self) -> Tuple[int, ...]:
        """Slot order (a1, b1, a2, b2, ...), 1-based."""
        return tuple(x for p in self.pairs for x in p)

    def permuted(self, sigma: Sequence[int]) -> "Matching":
        """Image under the slot permutation k -> sigma[k-1] (1-based values)."""
        return Matching(tuple((sigma[a - 1], sigma[b - 1]) for a, b in self.pairs))

    def __str__(self) -> str:
        return "{" + ", ".join(f"({a},{b})" for a, b in self.pairs) + "}"


def enumerate_matchings(N: int) -> List[Matching]:
    """All (N-1)!! perfect matchings of {1..N} in canonical (lexicographic) order."""
    if N < 0 or N % 2:
        return []

    def rec(items: Tuple[int, ...]) -> Iterator[Tuple[Tuple[int, int], ...]]:
        if not items:
            yield ()
            return
        a = items[0]
        for k in range(1, len(items)):
            b = items[k]
            rest = items[1:k] + items[k + 1:]
            for tail in rec(rest):
                yield ((a, b),) + tail

    return [Matching(p) for p in rec(tuple(range(1, N + 1)))]


@dataclass
class TensorForm:
    N: int
    dim: SuperDim
    coeffs: Dict[Index, Fraction] = field(default_factory=dict)
    parity: int = 0

    def __post_init__(self):
        self.coeffs = {k: Fraction(v) for k, v in self.coeffs.items() if v}
        par = self.dim.parities()
        for idx in self.coeffs:
            if len(idx) != self.N:
                raise ValueError(f"index {idx} has the wrong arity")
            if sum(par[i] for i in idx) % 2 != self.parity:
                raise ValueError(f"index {idx} is not in the parity-{self.parity} stratum")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorForm):
            return NotImplemented
        return self.N == other.N and self.dim == other.dim and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def scale(self, c) -> "TensorForm":
        return TensorForm(self.N, self.dim, {k: v * c for k, v in self.coeffs.items()}, self.parity)

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other: "TensorForm") -> "TensorForm":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        par = self.parity if self.coeffs else other.parity
        return TensorForm(self.N, self.dim, out, par)

    def __sub__(self, other):
        return self + (-other)

    def to_json(self) -> dict:
        return {"N": self.N, "dim": str(self.dim), "parity": self.parity,
                "coeffs": {",".join(map(str, k)): _fmt(v) for k, v in sorted(self.coeffs.items())}}


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _homogeneous(coeffs: Dict[Index, Fraction], N: int, dim: SuperDim) -> TensorForm:
    par = dim.parities()
    ps = {sum(par[i] for i in k) % 2 for k in coeffs}
    if len(ps) > 1:
        raise ValueError("tensor is not homogeneous")
    return TensorForm(N, dim, coeffs, ps.pop() if ps else 0)


def koszul_sign(order: Sequence[int], parities: Sequence[int]) -> int:
    """Sign of rearranging homogeneous objects 1..N into ``order`` (1-based).

    ``parities[k]`` is the parity of object k+1; each transposition of two
    odd objects contributes -1.
    """
    s = 0
    n = len(order)
    for r in range(n):
        pr = parities[order[r] - 1]
        if not pr:
            continue
        for q in range(r + 1, n):
            if order[q] < order[r] and parities[order[q] - 1]:
                s += 1
    return -1 if s & 1 else 1


def _tuples(d: int, N: int) -> Iterator[Index]:
    return itertools.product(range(d), repeat=N)


def matching_tensor(f: FormSpec, P: Matching) -> TensorForm:
    """v_1..v_N -> sign * prod B(v_a, v_b) over the pairs of P.

    The sign is the Koszul sign of moving (v_1, ..., v_N) into pair order,
    i.e. the tensor is B^{(x) N/2} precomposed with the slot permutation.
    """
    d = f.dim.total
    N = P.N
    par = f.dim.parities()
    g = f.gram
    order = P.order()
    coeffs: Dict[Index, Fraction] = {}
    # only tuples with every pair on a nonzero gram entry contribute
    nz = [(a, b) for a in range(d) for b in range(d) if g[a][b]]
    for choice in itertools.product(nz, repeat=len(P.pairs)):
        idx = [0] * N
        val = Fraction(1)
        for (a, b), (ia, ib) in zip(P.pairs, choice):
            idx[a - 1] = ia
            idx[b - 1] = ib
            val *= g[ia][ib]
        sign = koszul_sign(order, [par[i] for i in idx])
        coeffs[tuple(idx)] = sign * val
    return _homogeneous(coeffs, N, f.dim)


def _feeds(X: SuperMatrix) -> Tuple[List[List[Tuple[int, Fraction]]], int]:
    """feeds[j] = [(i, X[j][i])]: a coefficient with slot value j feeds output slot value i."""
    x = X.to_rational()
    d = len(x)
    return [[(i, x[j][i]) for i in range(d) if x[j][i]] for j in range(d)], (0 if X.parity == EVEN else 1)


def lie_act_dual(X: SuperMatrix, t: TensorForm) -> TensorForm:
    """(X.t)(v_1..v_N) = -sum_k (-1)^(|X|(p_1+..+p_{k-1})) t(v_1, .., X v_k, .., v_N)."""
    if X.dim_in != t.dim or X.dim_out != t.dim:
        raise ValueError("dimension mismatch")
    # X e_i = sum_j X[j][i] e_j, so t(.., X e_i, ..) = sum_j X[j][i] t(.., e_j, ..)
    rows_of, xp = _feeds(X)
    par = t.dim.parities()
    out: Dict[Index, Fraction] = {}
    for idx, c in t.coeffs.items():
        for k in range(t.N):
            j = idx[k]
            for i, v in rows_of[j]:
                new = idx[:k] + (i,) + idx[k + 1:]
                pre = sum(par[s] for s in new[:k]) if xp else 0
                sign = -1 if (pre & 1) else 1
                out[new] = out.get(new, 0) - sign * v * c
    out = {k: v for k, v in out.items() if v}
    par_out = (t.parity + xp) % 2
    return TensorForm(t.N, t.dim, out, par_out)


def group_act(g: SuperMatrix, t: TensorForm) -> TensorForm:
    """(g.t)(v_1..v_N) = t(g v_1, .., g v_N) for a rational even g."""
    x = g.to_rational()
    d = len(x)
    cols = [[(j, x[j][i]) for j in range(d) if x[j][i]] for i in range(d)]
    out: Dict[Index, Fraction] = {}
    for idx in _tuples(d, t.N):
        total = Fraction(0)
        for choice in itertools.product(*(cols[i] for i in idx)):
            src = tuple(j for j, _ in choice)
            c = t.coeffs.get(src)
            if c:
                total += c * prod(v for _, v in choice)
        if total:
            out[idx] = total
    return TensorForm(t.N, t.dim, out, t.parity) if out else TensorForm(t.N, t.dim, {}, t.parity)


def permute_slots(t: TensorForm, sigma: Sequence[int]) -> TensorForm:
    """Koszul-signed slot permutation (1-based ``sigma``).

    (sigma.t)(v_1..v_N) = eps * t(v_sigma(1), .., v_sigma(N)), where eps is the
    Koszul sign of reordering (v_1..v_N) into that order.  With this
    convention the matching tensor of P goes to that of P.permuted(sigma).
    """
    N = t.N
    if sorted(sigma) != list(range(1, N + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{N}")
    par = t.dim.parities()
    out: Dict[Index, Fraction] = {}
    for widx, c in t.coeffs.items():
        vidx = [0] * N
        for k in range(N):
            vidx[sigma[k] - 1] = widx[k]
        vidx = tuple(vidx)
        eps = koszul_sign(tuple(sigma), [par[i] for i in vidx])
        out[vidx] = eps * c
    return TensorForm(N, t.dim, out, t.parity)


def is_invariant(t: TensorForm, lie: Sequence[SuperMatrix], comps: Sequence[SuperMatrix]) -> bool:
    if any(not lie_act_dual(X, t).is_zero() for X in lie):
        return False
    return all(group_act(g, t) == t for g in comps)


# ---------------------------------------------------------------------------
# invariant subspace by exact linear algebra


@dataclass
class InvariantBasis:
    N: int
    dim: SuperDim
    group: str
    parity: int
    basis: List[TensorForm]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _stratum(d: int, N: int, par: Sequence[int], parity: int) -> List[Index]:
    return [idx for idx in _tuples(d, N) if sum(par[i] for i in idx) % 2 == parity]


def check_cells(dim: SuperDim, N: int, max_cells: Optional[int]) -> int:
    cells = dim.total ** N
    if max_cells is not None and cells > max_cells:
        raise GuardExceeded(f"{dim.total}^{N} = {cells} coefficients exceeds the guard of {max_cells}")
    return cells


def invariant_subspace(lie: Sequence[SuperMatrix], comps: Sequence[SuperMatrix], N: int, dim: SuperDim,
                       target_parity: int, group: str = "", max_cells: Optional[int] = DEFAULT_MAX_CELLS
                       ) -> InvariantBasis:
    """Exact basis of invariant N-forms supported on the given parity stratum.

    Unknowns are the coefficients on stratum tuples (lexicographic order);
    rows are the coefficients of X.t for every Lie generator X and of
    g.t - t for every component representative g.
    """
    check_cells(dim, N, max_cells)
    d = dim.total
    par = dim.parities()
    unknowns = _stratum(d, N, par, target_parity)
    col = {idx: k for k, idx in enumerate(unknowns)}
    ech = Echelon(len(unknowns))

    # component rows first for diagonal representatives: they zero out whole tuples cheaply
    for g in comps:
        for row in _group_rows(g, unknowns, col, N):
            ech.add(row)
    for X in lie:
        feeds, xp = _feeds(X)
        rows: Dict[Index, Dict[int, Fraction]] = {}
        for idx in unknowns:
            k_src = col[idx]
            for k in range(N):
                for i, v in feeds[idx[k]]:
                    new = idx[:k] + (i,) + idx[k + 1:]
                    pre = sum(par[s] for s in new[:k]) if xp else 0
                    sign = -1 if pre & 1 else 1
                    r = rows.setdefault(new, {})
                    r[k_src] = r.get(k_src, 0) - sign * v
        for new in sorted(rows):
            r = {c: v for c, v in rows[new].items() if v}
            if r:
                ech.add(r)
    basis = []
    for vec in ech.nullspace():
        coeffs = {unknowns[c]: v for c, v in vec.items()}
        basis.append(TensorForm(N, dim, coeffs, target_parity))
    log.debug("invariant_subspace N=%d dim=%s parity=%d: %d unknowns, rank %d, nullity %d",
              N, dim, target_parity, len(unknowns), ech.rank, len(basis))
    return InvariantBasis(N, dim, group, target_parity, basis)


def _group_rows(g: SuperMatrix, unknowns: List[Index], col: Dict[Index, int], N: int):
    x = g.to_rational()
    d = len(x)
    cols = [[(j, x[j][i]) for j in range(d) if x[j][i]] for i in range(d)]
    for idx in unknowns:
        row: Dict[int, Fraction] = {col[idx]: Fraction(-1)}
        for choice in itertools.product(*(cols[i] for i in idx)):
            src = tuple(j for j, _ in choice)
            if src in col:
                c = col[src]
                row[c] = row.get(c, 0) + prod(v for _, v in choice)
        row = {c: v for c, v in row.items() if v}
        if row:
            yield row


def tensor_row(t: TensorForm, unknowns_col: Dict[Index, int]) -> Dict[int, Fraction]:
    return {unknowns_col[k]: v for k, v in t.coeffs.items()}


def group_setup(group: str, m: int, n: int) -> Tuple[FormSpec, List[SuperMatrix], List[SuperMatrix]]:
    """(form, Lie basis, component representatives) for 'osp' (dim m|2n) or 'pe' (dim n|n)."""
    if group == "osp":
        f = standard_even_form(m, n)
    elif group == "pe":
        f = standard_odd_form(n)
    else:
        raise ValueError(f"unknown group {group!r}")
    lb = lie_algebra_basis(f)
    return f, lb[EVEN] + lb[ODD], component_representatives(f)


def fft_spanning_report(group: str, m: int, n: int, N: int, *, max_cells: Optional[int] = DEFAULT_MAX_CELLS,
                        emit_basis: bool = False) -> dict:
    """Compare the span of the matching tensors with the full invariant space.

    Both parity strata are solved; PASS iff every matching tensor is
    invariant and rank(matching tensors) equals the total invariant dimension.
    """
    f, lie, comps = group_setup(group, m, n)
    dim = f.dim
    check_cells(dim, N, max_cells)
    matchings = enumerate_matchings(N)
    tensors = [matching_tensor(f, P) for P in matchings]
    all_invariant = all(is_invariant(t, lie, comps) for t in tensors)

    by_parity = {}
    spaces = {}
    for p in (0, 1):
        space = invariant_subspace(lie, comps, N, dim, p, group, max_cells)
        spaces[p] = space
        by_parity[str(p)] = space.dimension
    invariant_dim = sum(by_parity.values())

    d = dim.total
    all_idx = {idx: k for k, idx in enumerate(_tuples(d, N))} if tensors else {}
    ech = Echelon(len(all_idx))
    for t in tensors:
        ech.add(tensor_row(t, all_idx))
    rank = ech.rank
    # every nullspace vector must lie in the matching span for equality of spaces
    spans_all = all(ech.contains(tensor_row(b, all_idx)) for s in spaces.values() for b in s.basis) \
        if tensors else invariant_dim == 0
    passed = bool(all_invariant and rank == invariant_dim and spans_all)
    if group == "osp":
        head = {"group": group, "m": m, "n": n, "dim": str(dim)}
    else:
        head = {"group": group, "m": n, "n": n, "dim": str(dim)}
    report = {
        "schema": 1,
        **head,
        "N": N,
        "n_matchings": len(matchings),
        "rank": rank,
        "invariant_dim": invariant_dim,
        "invariant_dim_by_parity": by_parity,
        "matchings_invariant": all_invariant,
        "pass": passed,
    }
    if emit_basis:
        report["basis"] = [b.to_json() for p in (0, 1) for b in spaces[p].basis]
    return report
