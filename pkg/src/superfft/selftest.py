"""Built-in property suites run by ``superfft selftest``.

Each suite is a generator of (check name, ok, detail) triples so the
runner can stop at the first failure and report it.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, Iterator, Optional, Tuple

from . import forms, grassmann, invariants, superlinalg, superpfaffian
from .grassmann import EVEN, ODD, NotDivisible, gp_divide_exact, gp_reduced_part, parse_gpoly
from .randomgen import (
    DEFAULT_RING,
    rand_block_diagonal,
    rand_gpoly,
    rand_grassmann_supermatrix,
    rand_osp_rational,
)
from .superlinalg import SuperDim, SuperMatrix, berezinian, berezinian_via_even_block

Check = Tuple[str, bool, str]


def grassmann_suite(rng: random.Random, cases: int = 200) -> Iterator[Check]:
    R = DEFAULT_RING
    a, b = R.var("a"), R.var("b")
    x = R.var("x")
    yield "theta1*theta2 normal form", str(a * b) == "a*b" and str(b * a) == "-a*b", str(b * a)
    yield "odd square", (a * a).is_zero(), str(a * a)
    sq = (x + a * b) ** 2
    yield "(x + ab)^2", sq == x * x + 2 * x * a * b, str(sq)
    for _ in range(cases):
        p_par, q_par = rng.randint(0, 1), rng.randint(0, 1)
        p = rand_gpoly(rng, R, parity=p_par)
        q = rand_gpoly(rng, R, parity=q_par)
        r = rand_gpoly(rng, R)
        sign = -1 if p_par and q_par else 1
        yield "supercommutativity", p * q == (q * p) * sign, f"p={p}; q={q}"
        yield "associativity", (p * q) * r == p * (q * r), f"p={p}; q={q}; r={r}"
        yield "distributivity", p * (q + r) == p * q + p * r, f"p={p}; q={q}; r={r}"
        odd = rand_gpoly(rng, R, parity=1)
        yield "odd element squares to zero", (odd * odd).is_zero(), str(odd)
        text = str(r)
        yield "text round trip", parse_gpoly(text, R) == r, text
        d = rand_gpoly(rng, R, parity=0, max_terms=2, max_exp=1)
        if gp_reduced_part(d).is_zero():
            d = d + 1
        prod = p * d
        try:
            qq = gp_divide_exact(prod, d)
            ok = qq * d == prod
        except NotDivisible:
            ok = False
        yield "division round trip", ok, f"p={p}; d={d}"
    nil = rand_gpoly(rng, R, nilpotent=True)
    yield "nilpotency bound", (nil ** (R.n_odd + 1)).is_zero(), str(nil)


def superlinalg_suite(rng: random.Random, cases: int = 60) -> Iterator[Check]:
    for dim in (SuperDim(1, 1), SuperDim(2, 2), SuperDim(1, 2)):
        for _ in range(cases):
            A = rand_block_diagonal(rng, dim)
            B = rand_block_diagonal(rng, dim)
            ok = berezinian(A @ B) == berezinian(A) * berezinian(B)
            yield f"Berezinian multiplicativity {dim}", ok, f"A={A}; B={B}"
    ring = grassmann.RingSpec((), ("a", "b", "c", "d"))
    for dim in (SuperDim(1, 1), SuperDim(2, 2)):
        for _ in range(max(1, cases // 6)):
            A = rand_grassmann_supermatrix(rng, dim, ring)
            B = rand_grassmann_supermatrix(rng, dim, ring)
            AB = A @ B
            yield f"block parity closure {dim}", AB.parity == EVEN, str(AB)
            lhs = berezinian(AB)
            rhs = berezinian(A) * berezinian(B)
            yield f"Grassmann Berezinian multiplicativity {dim}", lhs == rhs, f"A={A}; B={B}"
            yield f"Berezinian formulas agree {dim}", berezinian(A) == berezinian_via_even_block(A), str(A)
    refl = forms.reflection(SuperDim(1, 2))
    yield "Berezinian of the reflection", berezinian(refl) == -1, str(berezinian(refl))
    for m, n in ((1, 1), (2, 1), (1, 2)):
        f = forms.standard_even_form(m, n)
        for reflect in (False, True):
            g = rand_osp_rational(rng, m, n, reflect)
            ber = berezinian(g)
            yield f"osp element has Berezinian +-1 ({m}|{2 * n})", forms.preserves(g, f) and ber in (1, -1), str(g)


def forms_suite(rng: random.Random) -> Iterator[Check]:
    cases = [("osp", forms.standard_even_form(m, n)) for m, n in ((1, 0), (0, 1), (1, 1), (2, 1), (1, 2))]
    cases += [("pe", forms.standard_odd_form(n)) for n in (1, 2)]
    for tag, f in cases:
        lb = forms.lie_algebra_basis(f)
        basis = lb[EVEN] + lb[ODD]
        yield f"Lie basis preserves {tag} {f.dim}", all(forms.infinitesimally_preserves(X, f) for X in basis), ""
        T, std = forms.standardize(f)
        yield f"standardize {tag} {f.dim}", forms.conjugate_gram(T, f) == [list(r) for r in std.gram], ""
        yield f"-1 preserves {tag} {f.dim}", forms.preserves(SuperMatrix.diag(f.dim, [-1] * f.dim.total), f), ""
        if tag == "osp":
            yield f"parity automorphism preserves {f.dim}", forms.preserves(forms.parity_automorphism(f.dim), f), ""
    for m, n, even, odd in ((1, 1, 3, 2), (2, 1, 4, 4)):
        lb = forms.lie_algebra_basis(forms.standard_even_form(m, n))
        yield f"dim osp({m}|{2 * n})", (len(lb[EVEN]), len(lb[ODD])) == (even, odd), str((len(lb[EVEN]), len(lb[ODD])))


def invariants_suite(rng: random.Random) -> Iterator[Check]:
    for group, m, n, N in (("osp", 1, 1, 2), ("osp", 1, 1, 4), ("osp", 2, 1, 4), ("pe", 0, 1, 2),
                           ("pe", 0, 1, 4), ("osp", 1, 1, 3), ("pe", 0, 1, 3)):
        rep = invariants.fft_spanning_report(group, m, n, N)
        yield f"FFT {group} m={m} n={n} N={N}", rep["pass"], str(rep)
        if N % 2:
            yield f"odd N vanishing {group} N={N}", rep["invariant_dim"] == 0, str(rep)


def superpfaffian_suite(rng: random.Random) -> Iterator[Check]:
    r = superpfaffian.pf_m1_closed(1).ring
    yield "closed form n=1", superpfaffian.pf_m1_closed(1) == parse_gpoly("x^3 + 3/2*x*y1*y2", r), ""
    for m, n in ((1, 0), (1, 1), (1, 2), (2, 1)):
        cfg = superpfaffian.GenericConfig(m, n)
        D = superpfaffian.gram_det(cfg)
        vol = superpfaffian.vol_form(cfg)
        yield f"vol^2 = reduced(D) ({m},{n})", vol * vol == gp_reduced_part(D), ""
        cert = superpfaffian.super_pfaffian(cfg)
        superpfaffian.verify_sosp_invariance(cfg, cert)
        if m >= 2:
            cert.factorization_ok = superpfaffian.verify_gram_factorization(cfg)
        yield f"super Pfaffian certificate ({m},{n})", cert.passed(), str(cert.to_json())


SUITES: Dict[str, Callable[[random.Random], Iterator[Check]]] = {
    "grassmann": grassmann_suite,
    "superlinalg": superlinalg_suite,
    "forms": forms_suite,
    "invariants": invariants_suite,
    "superpfaffian": superpfaffian_suite,
}


def run(only: Optional[str] = None, seed: int = 0) -> Tuple[bool, dict]:
    """Run the suites in order; stop at the first failing check."""
    names = [only] if only else list(SUITES)
    counts = {}
    for name in names:
        rng = random.Random(f"{seed}:{name}")
        n = 0
        for check, ok, detail in SUITES[name](rng):
            n += 1
            if not ok:
                return False, {"schema": 1, "status": "fail", "suite": name, "check": check,
                               "detail": detail, "checks_run": n}
        counts[name] = n
    return True, {"schema": 1, "status": "pass", "checks": counts}
