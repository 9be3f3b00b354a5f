"""Seeded random generators for property checks (stdlib ``random`` only)."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional

from .grassmann import GPoly, RingSpec
from .linalg import det, inverse, matmul
from .superlinalg import SuperDim, SuperMatrix

DEFAULT_RING = RingSpec(("x", "y", "z"), ("a", "b", "c", "d"))


def rand_coeff(rng: random.Random) -> Fraction:
    num = rng.randint(-5, 5)
    den = rng.choice((1, 1, 1, 2, 3))
    return Fraction(num, den)


def rand_gpoly(rng: random.Random, ring: RingSpec = DEFAULT_RING, *, parity: Optional[int] = None,
               max_terms: int = 4, max_exp: int = 2, nilpotent: bool = False) -> GPoly:
    """Random element; ``parity`` 0/1 restricts to homogeneous terms."""
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = tuple(rng.randint(0, max_exp) for _ in range(ring.n_even))
        mask = 0
        for j in range(ring.n_odd):
            if rng.random() < 0.4:
                mask |= 1 << j
        if parity is not None and bin(mask).count("1") % 2 != parity:
            if ring.n_odd == 0:
                continue
            mask ^= 1 << rng.randrange(ring.n_odd)
        if nilpotent and mask == 0:
            if ring.n_odd == 0:
                continue
            mask = 1 << rng.randrange(ring.n_odd)
            if parity == 0:
                if ring.n_odd < 2:
                    continue
                mask |= 1 << ((mask.bit_length()) % ring.n_odd)
        c = rand_coeff(rng)
        if c:
            terms[(exps, mask)] = c
    return GPoly(ring, terms)


def rand_invertible_rational(rng: random.Random, k: int) -> List[List[Fraction]]:
    while True:
        m = [[Fraction(rng.randint(-3, 3)) for _ in range(k)] for _ in range(k)]
        if k == 0 or det(m) != 0:
            return m


def rand_block_diagonal(rng: random.Random, dim: SuperDim) -> SuperMatrix:
    """Random invertible rational even super matrix (odd blocks vanish over Q)."""
    a = rand_invertible_rational(rng, dim.even)
    d = rand_invertible_rational(rng, dim.odd)
    n = dim.total
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(dim.even):
        for j in range(dim.even):
            rows[i][j] = a[i][j]
    for i in range(dim.odd):
        for j in range(dim.odd):
            rows[dim.even + i][dim.even + j] = d[i][j]
    return SuperMatrix.from_rational(dim, dim, rows)


def rand_grassmann_supermatrix(rng: random.Random, dim: SuperDim, ring: RingSpec) -> SuperMatrix:
    """Even super matrix with invertible rational diagonal blocks plus Grassmann entries."""
    base = rand_block_diagonal(rng, dim).to_rational()
    n = dim.total
    par = dim.parities()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            entry_par = (par[i] + par[j]) % 2
            extra = rand_gpoly(rng, ring, parity=entry_par, max_terms=2, max_exp=0, nilpotent=True)
            row.append(ring.const(base[i][j]) + extra)
        rows.append(row)
    return SuperMatrix(dim, dim, rows, "even", ring)


def cayley(skew: List[List[Fraction]], metric: List[List[Fraction]]) -> List[List[Fraction]]:
    """(I - A)^-1 (I + A) for A with A^t metric + metric A = 0: preserves the metric."""
    k = len(skew)
    eye = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    minus = [[eye[i][j] - skew[i][j] for j in range(k)] for i in range(k)]
    plus = [[eye[i][j] + skew[i][j] for j in range(k)] for i in range(k)]
    return matmul(inverse(minus), plus)


def rand_osp_rational(rng: random.Random, m: int, n: int, reflect: bool = False) -> SuperMatrix:
    """Random rational element of O(m) x Sp(2n) via Cayley transforms."""
    # orthogonal part: skew-symmetric A
    A = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            v = Fraction(rng.randint(-3, 3), rng.choice((1, 2)))
            A[i][j], A[j][i] = v, -v
    eye_m = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    O = cayley(A, eye_m) if m else []
    if reflect and m:
        O = [[-x for x in O[0]]] + O[1:]
    # symplectic part: J S with S symmetric gives A^t J + J A = 0
    k = 2 * n
    J = [[Fraction(0)] * k for _ in range(k)]
    for i in range(n):
        J[i][i + n] = Fraction(-1)
        J[i + n][i] = Fraction(1)
    S = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            v = Fraction(rng.randint(-2, 2), rng.choice((1, 2, 3)))
            S[i][j] = S[j][i] = v
    Asp = matmul(J, S)
    while True:
        try:
            Sp = cayley(Asp, J) if k else []
            break
        except ZeroDivisionError:
            Asp = [[x / 2 for x in r] for r in Asp]
    dim = SuperDim(m, k)
    rows = [[Fraction(0)] * (m + k) for _ in range(m + k)]
    for i in range(m):
        for j in range(m):
            rows[i][j] = O[i][j]
    for i in range(k):
        for j in range(k):
            rows[m + i][m + j] = Sp[i][j]
    return SuperMatrix.from_rational(dim, dim, rows)
