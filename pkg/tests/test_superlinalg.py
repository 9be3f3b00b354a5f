import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superfft.forms import preserves, reflection, standard_even_form
from superfft.grassmann import ParityError, RingSpec
from superfft.linalg import det
from superfft.randomgen import rand_block_diagonal, rand_grassmann_supermatrix, rand_osp_rational
from superfft.superlinalg import (
    Localized,
    SingularBlock,
    SuperDim,
    SuperMatrix,
    berezinian,
    berezinian_via_even_block,
    smat_apply,
    smat_mul,
)

G = RingSpec((), ("a", "b", "c", "d"))
a, b, c, d = G.vars("a", "b", "c", "d")
D11 = SuperDim(1, 1)


def test_superdim():
    dim = SuperDim(2, 3)
    assert dim.total == 5
    assert dim.parities() == (0, 0, 1, 1, 1)
    assert str(dim) == "2|3"
    with pytest.raises(ValueError):
        SuperDim(-1, 0)


def test_block_pattern_enforced():
    with pytest.raises(ParityError):
        SuperMatrix(D11, D11, [[a, 0], [0, 1]], "even", G)
    SuperMatrix(D11, D11, [[a * b, a], [b, 1]], "even", G)
    SuperMatrix(D11, D11, [[a, 1], [1, b]], "odd", G)


def test_identity_and_reflection_products():
    dim = SuperDim(2, 2)
    eye = SuperMatrix.identity(dim)
    r = reflection(dim)
    A = rand_block_diagonal(random.Random(1), dim)
    assert eye @ A == A and A @ eye == A
    assert r @ r == eye


def test_product_matches_entry_oracle():
    A = SuperMatrix(D11, D11, [[2 + a * b, a + c], [b, 3 + c * d]], "even", G)
    B = SuperMatrix(D11, D11, [[1 + a * c, d], [a + b, -1]], "even", G)
    e = A.entries
    f = B.entries
    hand = [[e[0][0] * f[0][0] + e[0][1] * f[1][0], e[0][0] * f[0][1] + e[0][1] * f[1][1]],
            [e[1][0] * f[0][0] + e[1][1] * f[1][0], e[1][0] * f[0][1] + e[1][1] * f[1][1]]]
    assert [list(r) for r in smat_mul(A, B).entries] == hand


def test_product_parity_and_dimension_checks():
    odd = SuperMatrix(D11, D11, [[a, 1], [1, b]], "odd", G)
    assert (odd @ odd).parity == "even"
    with pytest.raises(ValueError):
        smat_mul(SuperMatrix.identity(SuperDim(1, 0)), SuperMatrix.identity(D11))


def test_apply_examples():
    R = RingSpec(("x", "x1", "x2"), ("t", "t1", "t2"))
    x, x1, x2, t, t1, t2 = R.vars("x", "x1", "x2", "t", "t1", "t2")
    assert smat_apply(SuperMatrix.identity(D11), [x, t]) == [x, t]
    r = reflection(SuperDim(2, 2))
    assert smat_apply(r, [x1, x2, t1, t2]) == [-x1, x2, t1, t2]
    with pytest.raises(ParityError):
        smat_apply(SuperMatrix.identity(D11), [t, x])


def test_json_round_trip():
    A = SuperMatrix(D11, D11, [[2 + a * b, a + c], [b, Fraction(3, 2)]], "even", G)
    assert SuperMatrix.from_json(A.to_json(), G) == A


def test_berezinian_examples():
    for m, n in ((1, 1), (2, 2), (0, 2), (3, 0)):
        dim = SuperDim(m, n)
        assert berezinian(SuperMatrix.identity(dim)) == 1
    assert berezinian(reflection(SuperDim(1, 2))) == -1
    assert berezinian(reflection(SuperDim(3, 4))) == -1
    assert berezinian(SuperMatrix.diag(SuperDim(1, 1), [6, 3])) == 2


def test_berezinian_1x1_hand_oracle():
    # Ber [[p, al], [be, q]] = p/q - al*be/q^2 for rational p, q and odd al, be
    al, be = a + 2 * c, b - d
    A = SuperMatrix(D11, D11, [[5, al], [be, 2]], "even", G)
    expected = G.const(Fraction(5, 2)) - Fraction(1, 4) * al * be
    assert berezinian(A) == expected
    assert berezinian_via_even_block(A) == expected


def test_berezinian_singular_block():
    with pytest.raises(SingularBlock):
        berezinian(SuperMatrix.diag(D11, [1, 0]))
    with pytest.raises(ParityError):
        berezinian(SuperMatrix(D11, D11, [[a, 1], [1, b]], "odd", G))


def test_berezinian_nonpolynomial_stays_localized():
    R = RingSpec(("x",), ())
    x = R.var("x")
    A = SuperMatrix(D11, D11, [[1, 0], [0, x]], "even", R)
    val = berezinian(A)
    assert isinstance(val, Localized)
    assert val == Localized(R.one(), x, 1)


@given(st.integers(0, 10 ** 6), st.sampled_from([(1, 1), (2, 2), (1, 2)]))
def test_rational_multiplicativity(seed, mn):
    rng = random.Random(seed)
    dim = SuperDim(*mn)
    A, B = rand_block_diagonal(rng, dim), rand_block_diagonal(rng, dim)
    assert berezinian(A @ B) == berezinian(A) * berezinian(B)
    ra = A.to_rational()
    k = dim.even
    even = [r[:k] for r in ra[:k]]
    odd = [r[k:] for r in ra[k:]]
    assert berezinian(A) == det(even) / det(odd)


@given(st.integers(0, 10 ** 6), st.sampled_from([(1, 1), (2, 2), (1, 2)]))
def test_grassmann_multiplicativity_and_block_closure(seed, mn):
    rng = random.Random(seed)
    dim = SuperDim(*mn)
    A = rand_grassmann_supermatrix(rng, dim, G)
    B = rand_grassmann_supermatrix(rng, dim, G)
    AB = A @ B
    assert AB.parity == "even"
    assert berezinian(AB) == berezinian(A) * berezinian(B)
    assert berezinian(A) == berezinian_via_even_block(A)


@given(st.integers(0, 10 ** 6), st.sampled_from([(1, 1), (2, 1), (1, 2), (3, 1)]), st.booleans())
def test_orthosymplectic_elements_have_unit_berezinian(seed, mn, reflect):
    g = rand_osp_rational(random.Random(seed), *mn, reflect=reflect)
    assert preserves(g, standard_even_form(*mn))
    assert berezinian(g) == (-1 if reflect else 1)
