import itertools

import pytest
from gmpy2 import mpq
from hypothesis import assume, given, settings, strategies as st

from bethelab import kernel
from bethelab.errors import CardinalityMismatch, InvalidQ, PoleCollision
from conftest import draw

rationals = st.builds(mpq, st.integers(-40, 40), st.integers(1, 12)).filter(lambda x: x != 0)


def test_f_and_g_closed_form_values():
    assert kernel.eval_f(3, 1, 2) == mpq(11, 4)
    assert kernel.eval_g(3, 1, 2) == mpq(3, 4)
    assert kernel.g_left(3, 1, 2) == mpq(9, 4)
    assert kernel.g_right(3, 1, 2) == mpq(3, 4)


@given(u=rationals, v=rationals, q=rationals)
def test_f_splits_into_g_left_and_g_right(u, v, q):
    assume(u != v)
    assert kernel.eval_f(u, v, q) == kernel.g_left(u, v, q) + 1 / q
    assert kernel.eval_f(u, v, q) == kernel.g_right(u, v, q) + q


def test_poles_raise():
    with pytest.raises(PoleCollision):
        kernel.eval_f(2, 2, 3)
    with pytest.raises(ZeroDivisionError):
        kernel.eval_g(mpq(1, 2), mpq(1, 2), 3)
    with pytest.raises(InvalidQ):
        kernel.eval_f(1, 2, 0)


def test_float_backend_runs_unchanged():
    assert abs(kernel.eval_f(3.0, 1.0, 2.0) - 2.75) < 1e-15
    assert abs(kernel.izergin([1.5j], [0.5], 2.0) - kernel.eval_g(1.5j, 0.5, 2.0)) < 1e-15


def test_izergin_size_one_is_g():
    x, y, q = mpq(3, 2), mpq(-1, 3), mpq(7, 5)
    assert kernel.izergin([x], [y], q) == kernel.eval_g(x, y, q)
    assert kernel.izergin([x], [y], q, kernel.LEFT) == kernel.g_left(x, y, q)
    assert kernel.izergin([x], [y], q, kernel.RIGHT) == kernel.g_right(x, y, q)


def test_izergin_empty_and_mismatch():
    assert kernel.izergin([], [], mpq(2)) == 1
    with pytest.raises(CardinalityMismatch):
        kernel.izergin([1, 2], [3], mpq(2))


def _izergin_by_sum(xs, ys, q):
    # Independent oracle for K(ys | xs): symmetrised product over permutations of ys.
    total = 0
    for perm in itertools.permutations(ys):
        term = mpq(1)
        n = len(xs)
        for a in range(n):
            term *= kernel.eval_g(perm[a], xs[a], q)
            for b in range(a + 1, n):
                term *= kernel.eval_f(perm[b], perm[a], q) * kernel.eval_f(perm[a], xs[b], q)
        total += term
    return total


@pytest.mark.parametrize("n", [1, 2, 3])
def test_izergin_matches_permutation_sum(rng, n):
    for _ in range(5):
        vals = draw(rng, 2 * n)
        q = mpq(7, 3)
        xs, ys = vals[:n], vals[n:]
        assert kernel.izergin(ys, xs, q) == _izergin_by_sum(xs, ys, q)


def test_izergin_symmetric_in_each_set(rng):
    vals = draw(rng, 6)
    xs, ys, q = vals[:3], vals[3:], mpq(-5, 2)
    ref = kernel.izergin(xs, ys, q)
    for p in itertools.permutations(xs):
        assert kernel.izergin(list(p), ys, q) == ref
    assert kernel.izergin(xs, ys[::-1], q) == ref


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("side", [1, 2])
def test_ident_residuals_vanish(rng, n, side):
    for _ in range(3):
        vals = draw(rng, 2 * n)
        assert kernel.ident_residual(side, vals[:n], vals[n:], mpq(4, 3)) == 0


def test_symmetrize_counts_permutations():
    assert kernel.symmetrize(lambda p: 1, [[1, 2, 3]]) == 6
    assert kernel.symmetrize(lambda p: 1, [[1, 2], [3, 4, 5]]) == 12


@settings(max_examples=40, deadline=None)
@given(u=rationals, v=rationals, q=rationals, a=rationals, b=rationals)
def test_prop_fct_relations(u, v, q, a, b):
    assume(len({u, v, a, b}) == 4 and abs(q) != 1)
    assume(q * u != v / q and q * v != u / q and q * a != b / q and q * b != a / q)
    assume(q * u != b / q and q * a != v / q)
    res = kernel.prop_fct_residuals(u, v, q, [u, a], [v, b])
    assert len(res) == 6
    assert all(r == 0 for r in res.values())


@settings(max_examples=25, deadline=None)
@given(st.lists(rationals, min_size=4, max_size=4, unique=True), rationals)
def test_ident1_property(vals, q):
    assume(abs(q) != 1)
    xs, ys = vals[:2], vals[2:]
    assume(all(q * x != y / q for x in ys for y in xs))
    assume(all(q * x != y / q for x in xs for y in ys))
    assert kernel.ident_residual(1, ys, xs, q) == 0
