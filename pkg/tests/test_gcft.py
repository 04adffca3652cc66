import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from betti_tate.gcft import (
    DerivedPair,
    RankOneLocal,
    compare_derived,
    conv_monodromy,
    conv_shift,
    shift_automorphic,
    spectral_tensor_skyscraper,
    verify_intertwine,
)
from betti_tate.laurent import Y
from betti_tate.mirror import apply_F
from betti_tate.modules import FPModule, map_ops
from betti_tate.nodal_graded import GeneratorId, WindowDiagram, structure_generator, twist
from betti_tate.sampling import random_rep
from betti_tate.strat_quiver import ProjectiveId, check_rep, rep_of_projective, zero_rep

O = lambda n: structure_generator(GeneratorId("O", n))  # noqa: E731
Occ = lambda n: structure_generator(GeneratorId("Occ", n))  # noqa: E731
T = FPModule.cyclic(Y - 1)
nonzero = st.fractions(-5, 5, max_denominator=4).filter(bool)


def nf(D: WindowDiagram, d: int):
    return D.piece(d).normal_form


def oracle_pair(M: WindowDiagram, a, d: int):
    ops = map_ops(M.piece(d).multiplication(Y - a))
    return ops.kernel.normal_form, ops.cokernel.normal_form


def test_local_system_json():
    L = RankOneLocal(-2, Fraction(3, 4))
    data = L.to_json()
    assert data == {"component": -2, "monodromy": "3/4"}
    assert RankOneLocal.from_json(json.loads(json.dumps(data))) == L
    with pytest.raises(ValueError):
        RankOneLocal(0, 0)
    with pytest.raises(ValueError):
        RankOneLocal.from_json({"component": "x", "monodromy": "1/1"})


def test_conv_shift_examples():
    for d in range(-1, 5):
        assert nf(conv_shift(O(0), 2), d) == nf(O(2), d)
    assert conv_shift(O(0), 2) == O(2)
    assert conv_shift(Occ(1), 0) == Occ(1)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(0, 1000))
def test_conv_shift_group_law(a, b, seed):
    M = apply_F(random_rep(seed))
    assert conv_shift(conv_shift(M, a), b) == conv_shift(M, a + b)


def test_monodromy_two_on_O0():
    P = conv_monodromy(O(0), 2)
    assert P.h_minus1.is_empty
    assert P.h0.lo == 0
    assert nf(P.h0, 0) == FPModule.cyclic(Y - 2).normal_form
    for d in range(-2, 5):
        assert (nf(P.h_minus1, d), nf(P.h0, d)) == oracle_pair(O(0), 2, d)
        if d != 0:
            assert P.h0.piece(d).is_zero()


def test_monodromy_one_on_Occ0():
    P = conv_monodromy(Occ(0), 1)
    for d in range(-1, 4):
        assert nf(P.h_minus1, d) == nf(Occ(0), d) == nf(P.h0, d)


def test_monodromy_one_on_O0():
    P = conv_monodromy(O(0), 1)
    assert P.h_minus1.piece(0).is_zero()
    for d in range(1, 5):
        assert nf(P.h_minus1, d) == T.normal_form
    for d in range(0, 5):
        assert nf(P.h0, d) == T.normal_form
    assert P.h0.piece(-1).is_zero()


def test_monodromy_rejects_zero():
    with pytest.raises(ValueError):
        conv_monodromy(O(0), 0)
    with pytest.raises(ValueError):
        spectral_tensor_skyscraper(O(0), 0)


def test_tensor_route_examples():
    assert spectral_tensor_skyscraper(O(0), 2).h0.describe() == conv_monodromy(O(0), 2).h0.describe()
    Z = spectral_tensor_skyscraper(WindowDiagram.empty(), 3)
    assert Z.h0.is_empty and Z.h_minus1.is_empty


@settings(max_examples=30)
@given(st.integers(0, 10_000), nonzero, st.integers(-3, 3))
def test_tensor_route_twist_equivariant(seed, a, n):
    M = apply_F(random_rep(seed))
    lhs = spectral_tensor_skyscraper(twist(M, n), a)
    rhs = spectral_tensor_skyscraper(M, a)
    assert lhs.h0 == twist(rhs.h0, n) and lhs.h_minus1 == twist(rhs.h_minus1, n)


@settings(max_examples=40)
@given(st.integers(0, 10_000), nonzero)
def test_routes_agree_degreewise(seed, a):
    M = apply_F(random_rep(seed))
    assert compare_derived(M, M, a).passed
    A, B = conv_monodromy(M, a), spectral_tensor_skyscraper(M, a)
    for d in range(-3, 6):
        assert nf(A.h0, d) == nf(B.h0, d) == oracle_pair(M, a, d)[1]
        assert nf(A.h_minus1, d) == nf(B.h_minus1, d) == oracle_pair(M, a, d)[0]


@pytest.mark.parametrize("a", [2, -1, Fraction(1, 3), 5])
@pytest.mark.parametrize("g", [GeneratorId("O", n) for n in (-1, 0, 2)] + [GeneratorId("Occ", n) for n in (0, 3)])
def test_no_kernel_away_from_one(g, a):
    assert conv_monodromy(structure_generator(g), a).h_minus1.is_empty


@settings(max_examples=30)
@given(st.integers(0, 10_000), nonzero, st.integers(-3, 3))
def test_monodromy_commutes_with_shift(seed, a, n):
    M = apply_F(random_rep(seed))
    one = conv_monodromy(conv_shift(M, n), a)
    two = conv_monodromy(M, a)
    assert json.dumps(one.h0.to_json()) == json.dumps(conv_shift(two.h0, n).to_json())
    assert json.dumps(one.h_minus1.to_json()) == json.dumps(conv_shift(two.h_minus1, n).to_json())


@settings(max_examples=30)
@given(st.integers(0, 10_000), nonzero)
def test_outputs_are_valid_diagrams(seed, a):
    M = apply_F(random_rep(seed))
    for P in (conv_monodromy(M, a), spectral_tensor_skyscraper(M, a)):
        assert P.h0.is_valid() and P.h_minus1.is_valid()


def test_inverse_orientation_flag():
    M = O(0)
    flipped = conv_monodromy(M, 2, inverse_orientation=True)
    assert flipped.h0 == conv_monodromy(M, Fraction(1, 2)).h0
    assert spectral_tensor_skyscraper(M, 2, inverse_orientation=True).h0.describe() == flipped.h0.describe()


def test_derived_pair_json_tags():
    data = conv_monodromy(O(0), 2).to_json()
    assert set(data) == {"local", "h_minus1", "h0"}


def test_shift_automorphic_matches_twist():
    V = rep_of_projective(ProjectiveId(0, 2, 1))
    for n in (-2, 0, 3):
        W = shift_automorphic(V, n)
        assert check_rep(W).passed
        assert apply_F(W) == twist(apply_F(V), n)


def test_intertwine_examples():
    assert verify_intertwine(rep_of_projective(ProjectiveId(0, 1, 0)), 2, 1).passed
    assert verify_intertwine(zero_rep(0, 2), 3, -1).passed
    rep = verify_intertwine(rep_of_projective(ProjectiveId(0, 1, 1)), 1, -2)
    assert rep.passed, rep.failures


def test_intertwine_reports_invalid_input():
    R = FPModule.free(1)
    from betti_tate.strat_quiver import QuiverRep, quiver_presentation
    V = QuiverRep(quiver_presentation(0, 0), (R,), ())
    assert not verify_intertwine(V, 2, 0).passed


@settings(max_examples=25)
@given(st.integers(0, 10_000), nonzero, st.integers(-2, 2))
def test_intertwine_random(seed, a, n):
    rep = verify_intertwine(random_rep(seed), a, n)
    assert rep.passed, rep.failures
