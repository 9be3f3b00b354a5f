import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import kron_oracle
from superfft.forms import standard_even_form, standard_odd_form
from superfft.invariants import (
    GuardExceeded,
    Matching,
    TensorForm,
    enumerate_matchings,
    fft_spanning_report,
    group_act,
    group_setup,
    invariant_subspace,
    is_invariant,
    koszul_sign,
    lie_act_dual,
    matching_tensor,
    permute_slots,
)
from superfft.linalg import Echelon
from superfft.superlinalg import SuperDim, SuperMatrix


def test_enumerate_matchings_counts():
    assert [str(P) for P in enumerate_matchings(2)] == ["{(1,2)}"]
    assert len(enumerate_matchings(4)) == 3
    assert len(enumerate_matchings(6)) == 15
    assert enumerate_matchings(0) == [Matching(())]
    assert enumerate_matchings(5) == []


def test_matching_validation_and_canonical_order():
    assert Matching(((4, 2), (3, 1))).pairs == ((1, 3), (2, 4))
    with pytest.raises(ValueError):
        Matching(((1, 2), (2, 3)))


def test_koszul_sign():
    assert koszul_sign((2, 1), (1, 1)) == -1
    assert koszul_sign((2, 1), (0, 1)) == 1
    assert koszul_sign((3, 1, 2), (1, 1, 1)) == 1


def test_matching_tensor_examples():
    t = matching_tensor(standard_even_form(1, 0), Matching(((1, 2),)))
    assert t.coeffs == {(0, 0): 1}
    t = matching_tensor(standard_even_form(0, 1), Matching(((1, 2),)))
    assert t.coeffs == {(0, 1): -1, (1, 0): 1}


def test_matching_tensor_with_crossing_pairs_on_odd_line():
    # t(v1..v4) = -B(v1,v3) B(v2,v4): moving v2 past v3 (both odd) costs a sign
    t = matching_tensor(standard_even_form(0, 1), Matching(((1, 3), (2, 4))))
    assert t.coeffs == {(0, 0, 1, 1): -1, (0, 1, 1, 0): 1, (1, 0, 0, 1): 1, (1, 1, 0, 0): -1}


def test_lie_act_dual_examples():
    f = standard_even_form(1, 1)
    t = matching_tensor(f, Matching(((1, 3), (2, 4))))
    eye = SuperMatrix.identity(f.dim)
    assert lie_act_dual(eye, t) == t.scale(-4)
    zero = SuperMatrix.diag(f.dim, [0, 0, 0])
    assert lie_act_dual(zero, t).is_zero()
    _, lie, _ = group_setup("osp", 1, 1)
    assert all(lie_act_dual(X, t).is_zero() for X in lie)


def test_group_act_reflection_on_even_line():
    f = standard_even_form(1, 1)
    r = SuperMatrix.diag(f.dim, [-1, 1, 1])
    t = TensorForm(1, f.dim, {(0,): Fraction(1)}, 0)
    assert group_act(r, t) == -t


@pytest.mark.parametrize("group,m,n,N", [("osp", 1, 1, 2), ("osp", 1, 1, 3), ("osp", 1, 1, 4), ("osp", 2, 1, 4),
                                         ("osp", 0, 1, 4), ("pe", 0, 1, 2), ("pe", 0, 1, 3), ("pe", 0, 2, 4)])
def test_solver_matches_kronecker_oracle(group, m, n, N):
    f, lie, comps = group_setup(group, m, n)
    d = f.dim.total
    rep = fft_spanning_report(group, m, n, N)
    assert rep["invariant_dim"] == kron_oracle.invariant_dimension(lie, comps, N, d)
    for P in enumerate_matchings(N):
        assert kron_oracle.annihilates(lie, comps, N, matching_tensor(f, P).coeffs, d)
    assert rep["pass"]


def test_invariant_subspace_example_osp12():
    f, lie, comps = group_setup("osp", 1, 1)
    space = invariant_subspace(lie, comps, 2, f.dim, 0)
    assert space.dimension == 1
    t = matching_tensor(f, Matching(((1, 2),)))
    ech = Echelon(9)
    col = {(i, j): 3 * i + j for i in range(3) for j in range(3)}
    ech.add({col[k]: v for k, v in space.basis[0].coeffs.items()})
    assert ech.contains({col[k]: v for k, v in t.coeffs.items()})
    assert invariant_subspace(lie, comps, 2, f.dim, 1).dimension == 0


def test_pe_bilinear_form_is_pi_valued():
    f, lie, comps = group_setup("pe", 0, 1)
    assert invariant_subspace(lie, comps, 2, f.dim, 0).dimension == 0
    odd = invariant_subspace(lie, comps, 2, f.dim, 1)
    assert odd.dimension == 1
    assert matching_tensor(f, Matching(((1, 2),))).parity == 1


def test_component_group_matters():
    # osp(1|2) alone fixes a volume-like 3-form; the reflection negates it
    f, lie, comps = group_setup("osp", 1, 1)
    lie_only = invariant_subspace(lie, [], 3, f.dim, 0)
    assert lie_only.dimension == 1
    assert lie_only.basis[0].coeffs[(0, 0, 0)] == 2
    assert invariant_subspace(lie, comps, 3, f.dim, 0).dimension == 0


@pytest.mark.parametrize("group,m,n", [("osp", 1, 1), ("osp", 2, 1), ("pe", 0, 1), ("pe", 0, 2)])
def test_invariant_basis_is_invariant_and_solver_idempotent(group, m, n):
    f, lie, comps = group_setup(group, m, n)
    N = 4
    for p in (0, 1):
        first = invariant_subspace(lie, comps, N, f.dim, p)
        assert all(is_invariant(t, lie, comps) for t in first.basis)
        again = invariant_subspace(lie, comps, N, f.dim, p)
        assert [t.coeffs for t in again.basis] == [t.coeffs for t in first.basis]


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 4, 6]))
def test_symmetric_group_equivariance_osp(seed, N):
    rng = random.Random(seed)
    f = standard_even_form(1, 1)
    P = rng.choice(enumerate_matchings(N))
    sigma = list(range(1, N + 1))
    rng.shuffle(sigma)
    assert permute_slots(matching_tensor(f, P), sigma) == matching_tensor(f, P.permuted(sigma))


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 4]))
def test_symmetric_group_equivariance_pe_up_to_sign(seed, N):
    rng = random.Random(seed)
    f = standard_odd_form(1)
    P = rng.choice(enumerate_matchings(N))
    sigma = list(range(1, N + 1))
    rng.shuffle(sigma)
    lhs = permute_slots(matching_tensor(f, P), sigma)
    rhs = matching_tensor(f, P.permuted(sigma))
    assert lhs == rhs or lhs == -rhs


@pytest.mark.parametrize("group,m,n,N", [("osp", 1, 1, 5), ("osp", 2, 1, 3), ("pe", 0, 1, 5), ("pe", 0, 2, 3)])
def test_parity_vanishing(group, m, n, N):
    rep = fft_spanning_report(group, m, n, N)
    assert rep["invariant_dim"] == 0 and rep["n_matchings"] == 0 and rep["pass"]


def test_osp_invariants_are_even():
    for m, n in ((1, 1), (2, 1), (0, 2)):
        rep = fft_spanning_report("osp", m, n, 4)
        assert rep["invariant_dim_by_parity"]["1"] == 0


def test_report_fields_and_basis_dump():
    rep = fft_spanning_report("osp", 1, 1, 2, emit_basis=True)
    assert rep["schema"] == 1 and rep["group"] == "osp" and rep["N"] == 2
    assert rep["rank"] == rep["invariant_dim"] == 1
    assert len(rep["basis"]) == 1
    pe = fft_spanning_report("pe", 0, 2, 2)
    assert (pe["m"], pe["n"], pe["dim"]) == (2, 2, "2|2")


def test_guard():
    with pytest.raises(GuardExceeded):
        fft_spanning_report("osp", 1, 1, 4, max_cells=80)
    assert fft_spanning_report("osp", 1, 1, 4, max_cells=81)["pass"]


def test_tensor_parity_guard():
    with pytest.raises(ValueError):
        TensorForm(1, SuperDim(1, 1), {(0,): Fraction(1)}, 1)
