"""The super Pfaffian: polynomial square root of det(B(v_i, v_j))^(2n+1).

Generic vectors v_1..v_m in V of dimension m|2n have even coordinates
``x{i}_{a}`` and odd coordinates ``y{i}_{b}``.  With D the Gram determinant,
D_red its reduced part and E = D - D_red (nilpotent), the square root of D^(2n+1)
reducing to vol^(2n+1) is

    sum_k binom((2n+1)/2, k) vol^(2n+1-2k) E^k,   vol^2 = D_red,

a finite sum living in the localization at D_red.  Clearing the denominator
exactly is the polynomiality statement being certified.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .forms import FormSpec, evaluate_form, lie_algebra_basis, pfaffian_form, reflection, standard_even_form
from .grassmann import EVEN, ODD, GPoly, NotDivisible, RingSpec, gp_divide_exact, gp_reduced_part, gp_substitute
from .superlinalg import SuperMatrix, determinant

log = logging.getLogger(__name__)

__all__ = [
    "GenericConfig",
    "PfaffianCertificate",
    "GuardExceeded",
    "gram_matrix",
    "gram_det",
    "vol_form",
    "pf_m1_closed",
    "half_binomial",
    "super_pfaffian",
    "verify_gram_factorization",
    "verify_sosp_invariance",
    "DEFAULT_MAX_M",
    "DEFAULT_MAX_N",
]

DEFAULT_MAX_M = 3
DEFAULT_MAX_N = 2


class GuardExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GenericConfig:
    """m generic points of V (dim m|2n) plus reserved parameters t (even), tau (odd).

    ``normalization`` selects the form: "unit" (default) has
    B(v, v) = sum x_a^2 + sum_i y_i y_{i+n}; "standard" uses the standard
    Gram matrix, where the odd pairing contributes 2 y_i y_{i+n}.
    """

    m: int
    n: int
    normalization: str = "unit"
    override_guard: bool = False
    ring: RingSpec = field(init=False, compare=False)
    form: FormSpec = field(init=False, compare=False)

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m, n must be non-negative")
        if not self.override_guard and (self.m > DEFAULT_MAX_M or self.n > DEFAULT_MAX_N):
            raise GuardExceeded(f"(m, n) = ({self.m}, {self.n}) exceeds the default guard "
                                f"m <= {DEFAULT_MAX_M}, n <= {DEFAULT_MAX_N}")
        even = tuple(f"x{i}_{a}" for i in range(1, self.m + 1) for a in range(1, self.m + 1)) + ("t",)
        odd = tuple(f"y{i}_{b}" for i in range(1, self.m + 1) for b in range(1, 2 * self.n + 1)) + ("tau",)
        object.__setattr__(self, "ring", RingSpec(even, odd))
        if self.normalization == "unit":
            form = pfaffian_form(self.m, self.n)
        elif self.normalization == "standard":
            form = standard_even_form(self.m, self.n)
        else:
            raise ValueError(f"unknown normalization {self.normalization!r}")
        object.__setattr__(self, "form", form)

    def vector(self, i: int) -> List[GPoly]:
        """Coordinates of v_i (1-based): m even then 2n odd."""
        r = self.ring
        return ([r.var(f"x{i}_{a}") for a in range(1, self.m + 1)]
                + [r.var(f"y{i}_{b}") for b in range(1, 2 * self.n + 1)])

    def vectors(self) -> List[List[GPoly]]:
        return [self.vector(i) for i in range(1, self.m + 1)]

    def coordinate_names(self, i: int) -> List[str]:
        return ([f"x{i}_{a}" for a in range(1, self.m + 1)]
                + [f"y{i}_{b}" for b in range(1, 2 * self.n + 1)])


@dataclass
class PfaffianCertificate:
    m: int
    n: int
    delta_pow: GPoly
    is_polynomial: bool
    square_ok: bool
    lie_invariant: Optional[bool] = None
    reflection_sign: Optional[Fraction] = None
    m1_closed_form_ok: Optional[bool] = None
    factorization_ok: Optional[bool] = None

    def passed(self) -> bool:
        flags = [self.is_polynomial, self.square_ok]
        if self.lie_invariant is not None:
            flags.append(self.lie_invariant)
        if self.reflection_sign is not None:
            flags.append(self.reflection_sign == -1)
        for extra in (self.m1_closed_form_ok, self.factorization_ok):
            if extra is not None:
                flags.append(extra)
        return all(flags)

    def to_json(self, include_delta: bool = False) -> dict:
        out = {
            "schema": 1,
            "m": self.m,
            "n": self.n,
            "is_polynomial": self.is_polynomial,
            "square_ok": self.square_ok,
            "lie_invariant": self.lie_invariant,
            "reflection_sign": None if self.reflection_sign is None else _fmt(self.reflection_sign),
            "m1_closed_form_ok": self.m1_closed_form_ok,
            "factorization_ok": self.factorization_ok,
            "delta_terms": len(self.delta_pow),
            "pass": self.passed(),
        }
        if include_delta:
            out["delta"] = str(self.delta_pow)
        return out


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------


def gram_matrix(cfg: GenericConfig, vectors: Optional[List[List[GPoly]]] = None) -> List[List[GPoly]]:
    vs = cfg.vectors() if vectors is None else vectors
    return [[evaluate_form(cfg.form, u, v) for v in vs] for u in vs]


def gram_det(cfg: GenericConfig) -> GPoly:
    """D = det B(v_i, v_j); the entries are even so the Leibniz expansion applies."""
    return determinant(gram_matrix(cfg), cfg.ring)


def vol_form(cfg: GenericConfig) -> GPoly:
    """det of the m x m matrix of even coordinates (sign fixed to +det)."""
    r = cfg.ring
    rows = [[r.var(f"x{i}_{a}") for a in range(1, cfg.m + 1)] for i in range(1, cfg.m + 1)]
    return determinant(rows, r)


def half_binomial(num: Fraction, k: int) -> Fraction:
    """Generalized binomial coefficient C(num, k) for rational num."""
    out = Fraction(1)
    for j in range(k):
        out = out * (num - j) / (j + 1)
    return out


def pf_m1_closed(n: int, ring: Optional[RingSpec] = None, x: str = "x", y: str = "y") -> GPoly:
    """sum_{k=0}^{n} C(n + 1/2, k) x^(2n+1-2k) (sum_i y_i y_{i+n})^k.

    Variables are ``x`` and ``y1 .. y{2n}`` unless another naming is given.
    """
    if ring is None:
        ring = RingSpec((x,), tuple(f"{y}{b}" for b in range(1, 2 * n + 1)))
    xv = ring.var(x)
    pair = ring.zero()
    for i in range(1, n + 1):
        pair = pair + ring.var(f"{y}{i}") * ring.var(f"{y}{i + n}")
    top = Fraction(2 * n + 1, 2)
    total = ring.zero()
    pair_k = ring.one()
    for k in range(n + 1):
        total = total + xv ** (2 * n + 1 - 2 * k) * pair_k * half_binomial(top, k)
        pair_k = pair_k * pair
    return total


def _pf_closed_in_cfg(cfg: GenericConfig) -> GPoly:
    return pf_m1_closed(cfg.n, cfg.ring, x="x1_1", y="y1_")


def super_pfaffian(cfg: GenericConfig, *, check_m1: bool = True) -> PfaffianCertificate:
    """Build Delta^(2n+1) by the localized binomial series and certify it."""
    if cfg.m < 1:
        raise ValueError("the super Pfaffian needs m >= 1")
    ring = cfg.ring
    m, n = cfg.m, cfg.n
    D = gram_det(cfg)
    D_red = gp_reduced_part(D)
    E = D - D_red
    vol = vol_form(cfg)
    top = Fraction(2 * n + 1, 2)
    K = m * n  # E^(K+1) = 0: E lies in the ideal of odd pairs, 2mn odd variables
    s = max(0, K - n)  # denominator power D_red^s
    # candidate = sum_k c_k vol^(2n+1-2k) E^k = numerator / D_red^s
    numerator = ring.zero()
    E_k = ring.one()
    for k in range(K + 1):
        if E_k.is_zero():
            break
        numerator = numerator + vol ** (2 * (n - k + s) + 1) * E_k * half_binomial(top, k)
        E_k = E_k * E
    log.debug("super_pfaffian m=%d n=%d: numerator has %d terms, dividing by D_red^%d",
              m, n, len(numerator), s)
    is_polynomial = True
    delta = numerator
    try:
        for _ in range(s):
            delta = gp_divide_exact(delta, D_red)
    except NotDivisible:
        is_polynomial = False
    if is_polynomial:
        square_ok = delta * delta == D ** (2 * n + 1)
    else:
        # compare numerator^2 against D^(2n+1) D_red^(2s) in the localization
        square_ok = numerator * numerator == D ** (2 * n + 1) * D_red ** (2 * s)
    m1 = None
    if check_m1 and m == 1 and cfg.normalization == "unit":
        m1 = delta == _pf_closed_in_cfg(cfg)
    return PfaffianCertificate(m, n, delta, is_polynomial, square_ok, m1_closed_form_ok=m1)


def verify_gram_factorization(cfg: GenericConfig) -> bool:
    """Check D = D_1 * B(v_m'', v_m'') with v_m'' = v_m minus its projection on v_1..v_{m-1}.

    With G_1 the leading Gram block and b_i = B(v_i, v_m), the cleared vector
    w = D_1 v_m - sum_i (adj(G_1) b)_i v_i equals D_1 v_m'', so the identity
    becomes D * D_1 = B(w, w).
    """
    if cfg.m < 2:
        raise ValueError("the factorization needs m >= 2")
    ring = cfg.ring
    m = cfg.m
    vs = cfg.vectors()
    G = gram_matrix(cfg, vs)
    D = determinant(G, ring)
    G1 = [row[: m - 1] for row in G[: m - 1]]
    D1 = determinant(G1, ring)
    k = m - 1
    adj = [[ring.zero()] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = [[G1[a][c] for c in range(k) if c != i] for a in range(k) if a != j]
            c = determinant(minor, ring)
            adj[i][j] = -c if (i + j) & 1 else c
    b = [G[i][m - 1] for i in range(k)]
    beta = [sum((adj[i][j] * b[j] for j in range(k)), ring.zero()) for i in range(k)]
    w = []
    for a in range(len(vs[-1])):
        coord = D1 * vs[-1][a]
        for i in range(k):
            coord = coord - beta[i] * vs[i][a]
        w.append(coord)
    return D * D1 == evaluate_form(cfg.form, w, w)


def _first_order_bindings(cfg: GenericConfig, X: SuperMatrix) -> Tuple[Dict[str, GPoly], str]:
    """Bindings v_i -> v_i + t X v_i (even X) or v_i -> v_i + (X v_i) tau (odd X)."""
    ring = cfg.ring
    x = X.to_rational()
    odd = X.parity == ODD
    param = ring.var("tau" if odd else "t")
    bindings = {}
    for i in range(1, cfg.m + 1):
        names = cfg.coordinate_names(i)
        coords = cfg.vector(i)
        for a, name in enumerate(names):
            delta = ring.zero()
            for b, c in enumerate(coords):
                if x[a][b]:
                    delta = delta + c * x[a][b]
            if delta.is_zero():
                continue
            bindings[name] = coords[a] + (delta * param if odd else param * delta)
    return bindings, ("tau" if odd else "t")


def lie_derivative(cfg: GenericConfig, X: SuperMatrix, p: GPoly) -> GPoly:
    """Coefficient of the parameter after the first-order substitution by X."""
    bindings, param = _first_order_bindings(cfg, X)
    if not bindings:
        return cfg.ring.zero()
    trunc = {"t": 1} if param == "t" else None
    moved = gp_substitute(p, bindings, cfg.ring, truncate=trunc)
    return moved.coefficient_of(param)


def verify_sosp_invariance(cfg: GenericConfig, cert: PfaffianCertificate,
                           lie: Optional[List[SuperMatrix]] = None) -> Tuple[bool, Fraction]:
    """Annihilation by every Lie basis element and the sign under the reflection.

    Odd generators use v -> v + (X v) tau with the parameter on the right of
    the coordinate column; this is the placement matching the infinitesimal
    preservation convention of the forms module.
    """
    if not cert.is_polynomial:
        raise ValueError("invariance is only checked for a certified polynomial")
    delta = cert.delta_pow
    if lie is None:
        lb = lie_algebra_basis(cfg.form)
        lie = lb[EVEN] + lb[ODD]
    lie_ok = all(lie_derivative(cfg, X, delta).is_zero() for X in lie)
    r = cfg.ring
    flips = {f"x{i}_1": -r.var(f"x{i}_1") for i in range(1, cfg.m + 1)}
    reflected = gp_substitute(delta, flips, r)
    if reflected == -delta:
        sign = Fraction(-1)
    elif reflected == delta:
        sign = Fraction(1)
    else:
        sign = Fraction(0)
    cert.lie_invariant = lie_ok
    cert.reflection_sign = sign
    return lie_ok, sign
