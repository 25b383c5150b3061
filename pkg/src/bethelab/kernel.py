"""Rational building blocks of the trigonometric theory.

f(u, v) = (q u - v/q) / (u - v),   g(u, v) = (q - 1/q) / (u - v),
g_left(u, v) = u g(u, v),           g_right(u, v) = v g(u, v),

plus set-products, Izergin determinants and the symmetrisation operator.
Every function is plain arithmetic, so it runs on ``mpq`` and ``complex``
alike.  An empty set or product always evaluates to one.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Sequence

from gmpy2 import mpq

from . import field
from .errors import CardinalityMismatch, InvalidQ, PoleCollision

PLAIN, LEFT, RIGHT = "plain", "left", "right"
VARIANTS = (PLAIN, LEFT, RIGHT)


def _one(like):
    return field.parse_scalar(1, field.backend_of(like))


def _check_q(q):
    if q == 0:
        raise InvalidQ("q must be nonzero")


def _q(x):
    # plain ints would otherwise drift into float division
    return mpq(x) if type(x) is int else x


def eval_f(u, v, q):
    _check_q(q)
    u, v, q = _q(u), _q(v), _q(q)
    if u == v:
        raise PoleCollision(f"f({u}, {v}): coinciding arguments")
    return (q * u - v / q) / (u - v)


def eval_g(u, v, q, variant: str = PLAIN):
    _check_q(q)
    u, v, q = _q(u), _q(v), _q(q)
    if u == v:
        raise PoleCollision(f"g({u}, {v}): coinciding arguments")
    g = (q - 1 / q) / (u - v)
    if variant == PLAIN:
        return g
    if variant == LEFT:
        return u * g
    if variant == RIGHT:
        return v * g
    raise ValueError(f"unknown variant {variant!r}")


def g_left(u, v, q):
    return eval_g(u, v, q, LEFT)


def g_right(u, v, q):
    return eval_g(u, v, q, RIGHT)


def set_f(xs: Sequence, ys: Sequence, q):
    """Product of f(x, y) over all x in ``xs`` and y in ``ys``."""
    out = _one(q)
    for x in xs:
        for y in ys:
            out *= eval_f(x, y, q)
    return out


def izergin(xs: Sequence, ys: Sequence, q, variant: str = PLAIN):
    """Izergin determinant K_n(xs | ys) and its left/right modifications.

    K = prod_{i,j}(q x_i - y_j/q) / prod_{i<j}(x_i - x_j)(y_j - y_i)
        * det[(q - 1/q) / ((x_i - y_j)(q x_i - y_j/q))].
    ``left`` multiplies by prod x_i, ``right`` by prod y_j.
    """
    _check_q(q)
    q = _q(q)
    xs = [_q(x) for x in xs]
    ys = [_q(y) for y in ys]
    n = len(xs)
    if len(ys) != n:
        raise CardinalityMismatch(f"Izergin determinant needs #x == #y, got {n} and {len(ys)}")
    backend = field.backend_of(q, list(xs), list(ys))
    one = field.parse_scalar(1, backend)
    if n == 0:
        return one
    for a, b in itertools.combinations(xs, 2):
        if a == b:
            raise PoleCollision("Izergin determinant: repeated x")
    for a, b in itertools.combinations(ys, 2):
        if a == b:
            raise PoleCollision("Izergin determinant: repeated y")
    num = one
    rows = []
    for x in xs:
        row = []
        for y in ys:
            h = q * x - y / q
            if x == y or h == 0:
                raise PoleCollision(f"Izergin determinant: pole at x={x}, y={y}")
            num *= h
            row.append((q - 1 / q) / ((x - y) * h))
        rows.append(row)
    den = one
    for i, j in itertools.combinations(range(n), 2):
        den *= (xs[i] - xs[j]) * (ys[j] - ys[i])
    value = num / den * field.det(rows, backend)
    if variant == LEFT:
        value *= math.prod(xs, start=one)
    elif variant == RIGHT:
        value *= math.prod(ys, start=one)
    elif variant != PLAIN:
        raise ValueError(f"unknown variant {variant!r}")
    return value


def _b(ys, q):
    out = _one(q)
    for l, lp in itertools.combinations(range(len(ys)), 2):
        out *= eval_f(ys[lp], ys[l], q)
    return out


def bgf(ys: Sequence, xs: Sequence, q):
    """The triple (B(ys), G(ys|xs), F(ys|xs)).

    B = prod_{l<l'} f(y_l', y_l), G = prod_l g(y_l, x_l),
    F = prod_{l<l'} f(y_l, x_l').
    """
    n = len(ys)
    if len(xs) != n:
        raise CardinalityMismatch(f"#y={n} but #x={len(xs)}")
    b = _b(ys, q)
    g = f = _one(q)
    for l, lp in itertools.combinations(range(n), 2):
        f *= eval_f(ys[l], xs[lp], q)
    for l in range(n):
        g *= eval_g(ys[l], xs[l], q)
    return b, g, f


def symmetrize(fn: Callable, tbar: Sequence[Sequence]):
    """Sum of ``fn`` over all independent permutations of each list in ``tbar``.

    ``fn`` receives a tuple of tuples (one per type).
    """
    total = None
    for perm in itertools.product(*(itertools.permutations(t) for t in tbar)):
        term = fn(perm)
        total = term if total is None else total + term
    return total


def ident_residual(side: int, ys: Sequence, xs: Sequence, q):
    """Sym(B G F) - K_n(ys | xs), symmetrising ys (side 1) or xs (side 2)."""
    if side == 1:
        sym = symmetrize(lambda p: math.prod(bgf(p[0], xs, q)), [ys])
    elif side == 2:
        def term(p):
            _, g, f = bgf(ys, p[0], q)
            return _b(p[0], q) * g * f
        sym = symmetrize(term, [xs])
    else:
        raise ValueError("side must be 1 or 2")
    return sym - izergin(ys, xs, q)


def prop_fct_residuals(u, v, q, us: Sequence, vs: Sequence) -> dict:
    """Residuals of the q -> 1/q reflection relations of f, g_left/right and
    the modified Izergin determinants (six relations)."""
    qi = 1 / q
    ui, vi = 1 / u, 1 / v
    usi = [1 / x for x in us]
    vsi = [1 / x for x in vs]
    return {
        "g_left(v,u;1/q)-g_right(u,v;q)": g_left(v, u, qi) - g_right(u, v, q),
        "g_left(1/u,1/v;1/q)-g_right(u,v;q)": g_left(ui, vi, qi) - g_right(u, v, q),
        "f(v,u;1/q)-f(u,v;q)": eval_f(v, u, qi) - eval_f(u, v, q),
        "f(1/u,1/v;1/q)-f(u,v;q)": eval_f(ui, vi, qi) - eval_f(u, v, q),
        "K_left(vs|us;1/q)-K_right(us|vs;q)":
            izergin(vs, us, qi, LEFT) - izergin(us, vs, q, RIGHT),
        "K_left(1/us|1/vs;1/q)-K_right(us|vs;q)":
            izergin(usi, vsi, qi, LEFT) - izergin(us, vs, q, RIGHT),
    }
