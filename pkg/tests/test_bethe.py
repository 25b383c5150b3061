import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from bethelab import bethe, chain, field, words
from bethelab.bethe import BetheParams
from bethelab.chain import lambda_fn
from bethelab.errors import PoleCollision, RankMismatch, SizeGuardExceeded, ZeroParameter
from bethelab.kernel import set_f
from conftest import complex_setup, draw, random_setup, split_types

Q = mpq(5, 3)


@pytest.mark.parametrize("fn,letter", [(bethe.prebv_B, (1, 2)), (bethe.prebv_Bhat, (1, 2)),
                                       (bethe.prebv_C, (2, 1)), (bethe.prebv_Chat, (2, 1))])
def test_single_excitation_gl2(fn, letter):
    t = BetheParams([[mpq(7, 2)]])
    ws = fn(t, Q)
    assert ws.terms == {(letter + (mpq(7, 2),),): 1}


@pytest.mark.parametrize("n", [(2,), (1, 1), (2, 1), (1, 2, 1), (2, 1, 1)])
def test_extreme_term_has_unit_coefficient(rng, n):
    t = BetheParams(split_types(draw(rng, sum(n)), n))
    N = len(n) + 1
    word = words.canonical_word(tuple((k, k + 1, z) for k in range(1, N) for z in t[k]))
    assert bethe.prebv_B(t, Q).terms[word] == 1
    assert bethe.oracle_perm("B", t, Q).terms[word] == 1


@pytest.mark.parametrize("n", [(2,), (3,), (1, 1), (2, 1), (1, 2), (2, 2), (1, 1, 1), (1, 0, 1), (2, 1, 1)])
@pytest.mark.parametrize("variant", ["B", "Bhat"])
def test_partition_sum_equals_permutation_oracle(rng, n, variant):
    t = BetheParams(split_types(draw(rng, sum(n)), n))
    q = field.random_q(rng)
    assert words.canonicalize(bethe.oracle_perm(variant, t, q)) == bethe.PREBV[variant](t, q)


def test_term_count_recorded(rng):
    t = BetheParams(split_types(draw(rng, 6), (2, 2, 2)))
    B = bethe.prebv_B(t, Q)
    assert B.source_terms == 44
    assert B.tag == "B"


def test_oracle_guard(rng):
    t = BetheParams(split_types(draw(rng, 7), (4, 3)))
    with pytest.raises(SizeGuardExceeded):
        bethe.oracle_perm("B", t, Q)
    with pytest.raises(ValueError):
        bethe.oracle_perm("C", BetheParams([[1]]), Q)


@pytest.mark.parametrize("N,L,n", [(3, 3, (2, 1)), (3, 2, (1, 1)), (4, 2, (1, 1, 1)), (3, 2, (2, 2))])
def test_bv1_and_duals_exact(rng, N, L, n):
    model, t = random_setup(rng, N, L, n)
    B = bethe.bv_right(model, "B", t)
    assert (B == bethe.bv_right(model, "Bhat", t)).all()
    assert field.max_abs(B) != 0
    C = bethe.bv_left(model, "C", t)
    assert (C == bethe.bv_left(model, "Chat", t)).all()
    assert field.max_abs(C) != 0


def test_bv1_float(rng):
    model, t = complex_setup(rng, 3, 3, (2, 1))
    B = bethe.bv_right(model, "B", t)
    Bh = bethe.bv_right(model, "Bhat", t)
    assert np.linalg.norm(B - Bh) < 1e-12 * np.linalg.norm(B)


def test_empty_params_give_vacuum(rng):
    model = chain.ChainModel.create(3, Q, draw(rng, 2))
    t = BetheParams.empty(3)
    assert (bethe.bv_right(model, "B", t) == chain.vacuum(model)).all()
    assert (bethe.bv_left(model, "Chat", t) == chain.dual_vacuum(model)).all()
    assert (bethe.gl3_explicit(model, [], [], "left-2") == chain.vacuum(model)).all()


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (2, 2), (1, 2)])
def test_gl3_explicit_matches_prebv(rng, a, b):
    model, t = random_setup(rng, 3, 2, (a, b))
    us, vs = t[1], t[2]
    for side, (fn, variant) in {"right-1": (bethe.bv_right, "B"), "right-2": (bethe.bv_right, "Bhat"),
                                "left-1": (bethe.bv_left, "C"), "left-2": (bethe.bv_left, "Chat")}.items():
        assert (bethe.gl3_explicit(model, us, vs, side) == fn(model, variant, t)).all(), side


def test_gl3_rank_check(rng):
    model = chain.ChainModel.create(4, Q, draw(rng, 1))
    with pytest.raises(RankMismatch):
        bethe.gl3_explicit(model, [1], [2], "right-1")
    with pytest.raises(RankMismatch):
        bethe.normalized_bv_gl3(model, [1], [2])
    with pytest.raises(RankMismatch):
        bethe.bv_right(model, "B", BetheParams([[2]]))


def test_normalized_bv(rng):
    model, t = random_setup(rng, 3, 2, (1, 1))
    u, v = t[1][0], t[2][0]
    raw = bethe.bv_right(model, "B", t)
    norm = bethe.normalized_bv_gl3(model, [u], [v])
    factor = set_f([v], [u], model.q)
    factor *= lambda_fn(model, 2, u) * lambda_fn(model, 2, v)
    assert (norm * factor == raw).all()
    empty = bethe.normalized_bv_gl3(model, [], [])
    assert (empty == chain.vacuum(model)).all()


def test_normalized_bv_is_pole_free_at_collision():
    model = chain.ChainModel.create(3, 1.3 + 0.2j, [0.4 - 0.3j, -0.8 + 0.5j], field.FLOAT)
    u = 0.7 + 0.1j
    raw, norm = [], []
    for eps in [1e-2, 1e-3, 1e-4, 1e-5]:
        v = u + eps
        t = BetheParams([[u], [v]], field.FLOAT)
        raw.append(np.linalg.norm(bethe.bv_right(model, "B", t)))
        norm.append(np.linalg.norm(bethe.normalized_bv_gl3(model, [u], [v])))
    assert raw[-1] > 100 * raw[0]
    assert max(norm) < 2 * min(norm)


def test_omega_reverse():
    t = BetheParams([[1], [2, 3], [4, 5, 6]])
    r = bethe.omega_reverse(t)
    assert r.n == (3, 2, 1)
    assert bethe.omega_reverse(r) == t
    one = BetheParams([[1, 2]])
    assert bethe.omega_reverse(one) == one


def test_params_validation():
    with pytest.raises(PoleCollision):
        BetheParams([[1, 1]])
    with pytest.raises(PoleCollision):
        BetheParams([[1], [1]])
    with pytest.raises(ZeroParameter):
        BetheParams([[0]])
    # non-adjacent types may share a value
    BetheParams([[1], [2], [1]])


@pytest.mark.parametrize("n", [(1, 0), (0, 1), (1, 1), (2, 1)])
def test_morphisms_on_operators(rng, n):
    model, t = random_setup(rng, 3, 2, n)
    q = model.q
    inv = model.with_q(1 / q)
    lhs = words.apply_phi(bethe.prebv_Bhat(t, q))
    assert words.sums_equal(lhs, bethe.prebv_B(bethe.omega_reverse(t), 1 / q), inv)
    assert words.sums_equal(words.apply_psi(bethe.prebv_B(t, q)), bethe.prebv_C(t.inverse(), 1 / q), inv)
    assert words.sums_equal(words.apply_psi(bethe.prebv_Bhat(t, q)),
                            bethe.prebv_Chat(t.inverse(), 1 / q), inv)


def test_phi_at_rank_four_on_vacuum(rng):
    model, t = random_setup(rng, 4, 2, (1, 1, 1))
    inv = model.with_q(1 / model.q)
    lhs = words.apply_phi(bethe.prebv_Bhat(t, model.q))
    rhs = bethe.prebv_B(bethe.omega_reverse(t), 1 / model.q)
    assert (chain.evaluate_word(inv, lhs) == chain.evaluate_word(inv, rhs)).all()


@settings(max_examples=8, deadline=None)
@given(st.sampled_from([(1, 1), (2, 1), (1, 2), (2, 2)]), st.integers(0, 10**6))
def test_bv1_property(n, seed):
    model, t = random_setup(np.random.default_rng(seed), 3, 2, n)
    assert (bethe.bv_right(model, "B", t) == bethe.bv_right(model, "Bhat", t)).all()
