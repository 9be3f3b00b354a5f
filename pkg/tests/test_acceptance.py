"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are collected and echoed in the pytest terminal summary; running
this file directly (``python tests/test_acceptance.py``) prints them too.
"""

import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import kron_oracle  # noqa: E402
from superfft.forms import reflection  # noqa: E402
from superfft.grassmann import NotDivisible, gp_divide_exact, gp_reduced_part, parse_gpoly  # noqa: E402
from superfft.invariants import enumerate_matchings, fft_spanning_report, group_setup, matching_tensor  # noqa: E402
from superfft.randomgen import DEFAULT_RING, rand_block_diagonal, rand_gpoly  # noqa: E402
from superfft.superlinalg import SuperDim, berezinian  # noqa: E402
from superfft import superpfaffian as sp  # noqa: E402

RESULTS = {}

PFAFFIAN_CONFIGS = [(1, 0), (1, 1), (1, 2), (2, 1), (3, 1)]
OSP_FFT = [(1, 1, 2), (1, 1, 4), (2, 1, 2), (2, 1, 4), (3, 1, 2), (3, 1, 4), (1, 2, 2), (1, 2, 4), (1, 1, 6)]
PE_FFT = [(1, 2), (1, 4), (2, 2), (2, 4)]


def report(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


def _certificates():
    cache = getattr(_certificates, "cache", None)
    if cache is None:
        t0 = time.perf_counter()
        cache = {}
        for m, n in PFAFFIAN_CONFIGS:
            cfg = sp.GenericConfig(m, n)
            cache[(m, n)] = (cfg, sp.super_pfaffian(cfg))
        _certificates.cache = cache
        _certificates.elapsed = time.perf_counter() - t0
    return cache


def test_criterion_01_grassmann_properties():
    rng = random.Random(20261014)
    R = DEFAULT_RING
    t0 = time.perf_counter()
    cases = failures = 0
    for _ in range(1000):
        pp, qp = rng.randint(0, 1), rng.randint(0, 1)
        p, q, r = rand_gpoly(rng, R, parity=pp), rand_gpoly(rng, R, parity=qp), rand_gpoly(rng, R)
        odd = rand_gpoly(rng, R, parity=1, max_terms=6)
        d = rand_gpoly(rng, R, parity=0, max_terms=3, max_exp=1)
        if gp_reduced_part(d).is_zero():
            d = d + R.var("x") + 1
        checks = [p * q == (q * p) * (-1 if pp and qp else 1),
                  (p * q) * r == p * (q * r),
                  (odd * odd).is_zero()]
        prod = p * d
        try:
            checks.append(gp_divide_exact(prod, d) * d == prod)
        except NotDivisible:
            checks.append(False)
        cases += len(checks)
        failures += checks.count(False)
    elapsed = time.perf_counter() - t0
    report(1, failures == 0 and cases >= 1000 and elapsed < 10,
           f"{cases} randomized cases, {failures} failures, {elapsed:.2f} s (limit 10 s)")


def test_criterion_02_closed_form():
    p = sp.pf_m1_closed(1)
    expected = parse_gpoly("x^3 + 3/2*x*y1*y2", p.ring)
    ok = p == expected and sorted(map(str, p.terms.values())) == ["1", "3/2"]
    report(2, ok, f"pf_m1_closed(1) = {p}")


def test_criterion_03_square_identity():
    certs = _certificates()
    rows = [(mn, c.is_polynomial, c.square_ok) for mn, (_, c) in certs.items()]
    ok = all(a and b for _, a, b in rows) and _certificates.elapsed < 300
    report(3, ok, "; ".join(f"{mn} poly={a} square={b}" for mn, a, b in rows)
           + f"; {_certificates.elapsed:.1f} s (limit 300 s)")


def test_criterion_04_pfaffian_invariance():
    rows = []
    for mn, (cfg, cert) in _certificates().items():
        lie_ok, sign = sp.verify_sosp_invariance(cfg, cert)
        rows.append((mn, lie_ok, sign))
    ok = all(lie_ok and sign == -1 for _, lie_ok, sign in rows)
    report(4, ok, "; ".join(f"{mn} lie={lie_ok} reflection={sign}" for mn, lie_ok, sign in rows))


def test_criterion_05_fft_osp():
    t0 = time.perf_counter()
    rows = []
    for m, n, N in OSP_FFT:
        rep = fft_spanning_report("osp", m, n, N)
        f, lie, comps = group_setup("osp", m, n)
        oracle = kron_oracle.invariant_dimension(lie, comps, N, f.dim.total)
        invariant = rep["matchings_invariant"] and all(
            kron_oracle.annihilates(lie, comps, N, matching_tensor(f, P).coeffs, f.dim.total)
            for P in enumerate_matchings(N))
        rows.append((f"({m}|{2 * n}) N={N}", invariant, rep["rank"], rep["invariant_dim"],
                     oracle, rep["pass"]))
    elapsed = time.perf_counter() - t0
    ok = all(inv and rank == dim == orc and p for _, inv, rank, dim, orc, p in rows) and elapsed < 600
    report(5, ok, "; ".join(f"{c} rank={r} dim={d} oracle={o}" for c, _, r, d, o, _ in rows)
           + f"; {elapsed:.1f} s (limit 600 s)")


def test_criterion_06_fft_pe():
    rows = []
    for n, N in PE_FFT:
        rep = fft_spanning_report("pe", n, n, N)
        f, lie, comps = group_setup("pe", n, n)
        oracle = kron_oracle.invariant_dimension(lie, comps, N, f.dim.total)
        stratum = str((N // 2) % 2)
        in_stratum = rep["invariant_dim_by_parity"][stratum]
        rows.append((f"pe({n}) N={N}", rep["rank"], in_stratum, rep["invariant_dim"], oracle, stratum,
                     rep["pass"]))
    ok = all(r == s == d == o and p for _, r, s, d, o, _, p in rows)
    report(6, ok, "; ".join(f"{c} rank={r} dim[parity {st}]={s} oracle={o}" for c, r, s, _, o, st, _ in rows))


def test_criterion_07_parity_vanishing():
    cases = [("osp", m, n, N) for m, n in ((1, 1), (2, 1), (3, 1), (1, 2)) for N in (1, 3)]
    cases += [("osp", 1, 1, 5), ("pe", 1, 1, 5)]
    cases += [("pe", n, n, N) for n in (1, 2) for N in (1, 3)]
    dims = []
    for group, m, n, N in cases:
        rep = fft_spanning_report(group, m, n, N)
        dims.append(rep["invariant_dim"])
    report(7, all(d == 0 for d in dims), f"{len(cases)} odd-N configurations, invariant dims {sorted(set(dims))}")


def test_criterion_08_volume_identity():
    rows = []
    for m in (1, 2, 3):
        for n in (0, 1, 2):
            cfg = sp.GenericConfig(m, n)
            vol = sp.vol_form(cfg)
            rows.append(((m, n), vol * vol == gp_reduced_part(sp.gram_det(cfg))))
    report(8, all(ok for _, ok in rows), f"vol^2 = reduced(D) on {len(rows)} configurations with m <= 3")


def test_criterion_09_gram_factorization():
    rows = [((m, n), sp.verify_gram_factorization(sp.GenericConfig(m, n))) for m, n in ((2, 0), (2, 1), (3, 1))]
    report(9, all(ok for _, ok in rows), "; ".join(f"{mn} {ok}" for mn, ok in rows))


def test_criterion_10_berezinian():
    rng = random.Random(10)
    dims = [SuperDim(1, 1), SuperDim(2, 2), SuperDim(1, 2)]
    bad = 0
    for k in range(500):
        dim = dims[k % 3]
        A, B = rand_block_diagonal(rng, dim), rand_block_diagonal(rng, dim)
        if berezinian(A @ B) != berezinian(A) * berezinian(B):
            bad += 1
    signs = {str(d): str(berezinian(reflection(d))) for d in (SuperDim(1, 2), SuperDim(2, 2), SuperDim(3, 4))}
    ok = bad == 0 and all(s == "-1" for s in signs.values())
    report(10, ok, f"500 random pairs, {bad} failures; reflection Berezinians {signs}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
