"""Off-shell Bethe vectors of the U_q(gl_N) chain.

Four pre-Bethe vectors are built as :class:`~bethelab.words.WordSum` objects
from sums over partitions of the Bethe parameters:

* ``B``  - raising entries T_{k,j}, j > k, grouped by type, left Izergin factors;
* ``Bhat`` - raising entries T_{j,k+1}, grouped by column, right Izergin factors;
* ``C``, ``Chat`` - the dual (lowering) combinations acting on <0|.

``oracle_perm`` rebuilds B and Bhat from the original permutation sums
(symmetrisation over S_{n_1} x ... x S_{n_{N-1}} with factorial weights); it
shares no code with the partition sums beyond the scalar kernel.  Diagonal
entries stay in the words as letters T_kk; they turn into lambda factors
only when a word hits the vacuum.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from . import field
from .chain import (LEFT_ON_VACUUM, RIGHT_ON_VACUUM, ChainModel, MonodromyEntry,
                    dual_vacuum, evaluate_word, lambda_fn, vacuum)
from .errors import PoleCollision, RankMismatch, SizeGuardExceeded, ZeroParameter
from .kernel import LEFT, RIGHT, eval_f, g_left, g_right, izergin, set_f
from .partitions import (enumerate_assignments, enumerate_lower, enumerate_upper,
                         cumulative_vectors, precedes, precedes_t, valid_pairs)
from .words import WordSum, canonicalize

ORACLE_GUARD = 6


class BetheParams:
    """Typed Bethe parameters t^1, ..., t^{N-1}."""

    def __init__(self, types: Sequence[Sequence], backend: str | None = None):
        if backend is None:
            backend = field.backend_of(*[list(t) for t in types])
        self.backend = backend
        self.types = tuple(tuple(field.parse_scalar(x, backend) for x in t) for t in types)
        if len(self.types) < 1:
            raise ValueError("need at least one type (N >= 2)")
        self.validate()

    @classmethod
    def empty(cls, N: int, backend: str = field.EXACT) -> "BetheParams":
        return cls([[] for _ in range(N - 1)], backend)

    def validate(self) -> None:
        for k, t in enumerate(self.types, start=1):
            if len(set(t)) != len(t):
                raise PoleCollision(f"type-{k} parameters must be pairwise distinct")
            if any(x == 0 for x in t):
                raise ZeroParameter(f"type-{k} parameters must be nonzero")
        for k in range(1, len(self.types)):
            if set(self.types[k - 1]) & set(self.types[k]):
                raise PoleCollision(f"types {k} and {k + 1} share a parameter")

    @property
    def N(self) -> int:
        return len(self.types) + 1

    @property
    def n(self) -> tuple:
        return tuple(len(t) for t in self.types)

    def __getitem__(self, k: int) -> tuple:
        """Type-k parameters, 1-based."""
        return self.types[k - 1]

    def inverse(self) -> "BetheParams":
        return BetheParams([[1 / x for x in t] for t in self.types], self.backend)

    def __eq__(self, other) -> bool:
        return isinstance(other, BetheParams) and self.types == other.types

    def __repr__(self) -> str:
        return f"BetheParams({[list(map(str, t)) for t in self.types]})"


def omega_reverse(t: BetheParams) -> BetheParams:
    """t'^k = t^{N-k} (cardinalities reversed accordingly)."""
    return BetheParams(list(reversed(t.types)), t.backend)


def _as_params(t) -> BetheParams:
    return t if isinstance(t, BetheParams) else BetheParams(t)


def _q(q, t: BetheParams):
    return field.parse_scalar(q, t.backend)


# ---------------------------------------------------------------- partition sums

def _weight(asg: dict, N: int, q, order, variant: str):
    """f-products over ordered subset pairs and Izergin factors for one partition."""
    one = field.parse_scalar(1, field.backend_of(q))
    w = one
    for k in range(1, N):
        pairs = valid_pairs(k, N)
        for p in pairs:
            for pp in pairs:
                if order(p, pp):
                    w *= set_f(asg[(k,) + pp], asg[(k,) + p], q)
    for k in range(2, N):
        for p in valid_pairs(k, N):
            for pp in valid_pairs(k - 1, N):
                if order(p, pp):
                    w *= set_f(asg[(k,) + p], asg[(k - 1,) + pp], q)
        for i, j in valid_pairs(k, N):
            if i <= k - 1 and i < j:
                w *= izergin(asg[(k, i, j)], asg[(k - 1, i, j)], q, variant)
    return w


def _letters(i, j, subset):
    return [(i, j, z) for z in subset]


def _word_B(asg, N):
    word = []
    for k in range(1, N):
        for j in range(N, k, -1):
            word += _letters(k, j, asg[(k, k, j - 1)])
    return word, _diag_B(asg, N)


def _diag_B(asg, N):
    diag = []
    for k in range(2, N):
        for p in valid_pairs(k, N):
            if precedes(p, (k, k)):
                diag += _letters(k, k, asg[(k,) + p])
    return diag


def _word_Bhat(asg, N):
    word = []
    for k in range(N - 1, 0, -1):
        for j in range(1, k + 1):
            word += _letters(j, k + 1, asg[(k, j, k)])
    return word, _diag_Bhat(asg, N)


def _diag_Bhat(asg, N):
    diag = []
    for k in range(1, N - 1):
        for p in valid_pairs(k, N):
            if precedes_t((k, k), p):
                diag += _letters(k + 1, k + 1, asg[(k,) + p])
    return diag


def _word_C(asg, N):
    word = []
    for k in range(N - 1, 0, -1):
        for j in range(k + 1, N + 1):
            word += _letters(j, k, asg[(k, k, j - 1)])
    return word


def _word_Chat(asg, N):
    word = []
    for k in range(1, N):
        for j in range(k, 0, -1):
            word += _letters(k + 1, j, asg[(k, j, k)])
    return word


def _partition_sum(t, q, tag: str) -> WordSum:
    t = _as_params(t)
    q = _q(q, t)
    N = t.N
    upper_kind = tag in ("B", "C")
    matrices = enumerate_upper(t.n) if upper_kind else enumerate_lower(t.n)
    order = precedes if upper_kind else precedes_t
    variant = {"B": LEFT, "C": RIGHT, "Bhat": RIGHT, "Chat": LEFT}[tag]
    out = WordSum(N, q, tag=tag)
    count = 0
    for m in matrices:
        for asg in enumerate_assignments(t.types, m):
            count += 1
            w = _weight(asg, N, q, order, variant)
            if tag == "B":
                creation, diag = _word_B(asg, N)
                word = creation + diag
            elif tag == "Bhat":
                creation, diag = _word_Bhat(asg, N)
                word = creation + diag
            elif tag == "C":
                word = _diag_B(asg, N) + _word_C(asg, N)
            else:
                word = _diag_Bhat(asg, N) + _word_Chat(asg, N)
            out.add_term(word, w)
    out.source_terms = count
    out = canonicalize(out)
    out.tag = tag
    return out


def prebv_B(t, q) -> WordSum:
    """Pre-Bethe vector B^n(t) as a sum over upper-permissible partitions."""
    return _partition_sum(t, q, "B")


def prebv_Bhat(t, q) -> WordSum:
    """Pre-Bethe vector Bhat^n(t) as a sum over lower-permissible partitions."""
    return _partition_sum(t, q, "Bhat")


def prebv_C(t, q) -> WordSum:
    return _partition_sum(t, q, "C")


def prebv_Chat(t, q) -> WordSum:
    return _partition_sum(t, q, "Chat")


PREBV = {"B": prebv_B, "Bhat": prebv_Bhat, "C": prebv_C, "Chat": prebv_Chat}


# ---------------------------------------------------------------- permutation sums

def _omega(tt, q):
    """prod_k prod_{l < l'} f(t^k_{l'}, t^k_l)."""
    one = field.parse_scalar(1, field.backend_of(q))
    out = one
    for tk in tt:
        for a, b in itertools.combinations(range(len(tk)), 2):
            out *= eval_f(tk[b], tk[a], q)
    return out


def _oracle_B_term(tt, m, n, N, q):
    # T(k, l): 1-based access into the permuted parameters
    def T(k, l):
        return tt[k - 1][l - 1]

    M = cumulative_vectors(m)
    coef = _omega(tt, q)
    for j in range(1, N):
        for i in range(j, N):
            lo, hi = n[j - 1] - m[(j, i)], n[j - 1] - m[(j, i + 1)]
            coef /= math.factorial(hi - lo)
            for l in range(lo + 1, hi + 1):
                for lp in range(lo + 1, l):
                    coef /= eval_f(T(j, l), T(j, lp), q)
    for i in range(2, N):
        for j in range(1, i):
            Mi, Mim1 = M[j][i - 1], M[j][i - 2]
            for l in range(m[(j, i)]):
                y = T(i, Mi - l)
                coef *= g_left(y, T(i - 1, Mim1 - l), q)
                for lp in range(Mim1 - l + 1, n[i - 2] + 1):
                    coef *= eval_f(y, T(i - 1, lp), q)
    word = []
    for j in range(1, N):
        for i in range(N - 1, j - 1, -1):
            for l in range(n[j - 1] - m[(j, i)] + 1, n[j - 1] - m[(j, i + 1)] + 1):
                word.append((j, i + 1, T(j, l)))
    for j in range(1, N):
        for l in range(1, n[j - 1] - m[(j, j)] + 1):
            word.append((j, j, T(j, l)))
    return coef, word


def _oracle_Bhat_term(tt, s, n, N, q):
    def T(k, l):
        return tt[k - 1][l - 1]

    S = cumulative_vectors(s)
    coef = _omega(tt, q)
    for j in range(1, N):
        for i in range(1, j + 1):
            lo, hi = s[(j, i - 1)], s[(j, i)]
            coef /= math.factorial(hi - lo)
            for l in range(lo + 1, hi + 1):
                for lp in range(lo + 1, l):
                    coef /= eval_f(T(j, l), T(j, lp), q)
    for j in range(2, N):
        for i in range(1, j):
            off_y = n[i] - S[j][i]          # n_{i+1} - S^j_{i+1}
            off_x = n[i - 1] - S[j][i - 1]  # n_i - S^j_i
            for l in range(1, s[(j, i)] + 1):
                x = T(i, off_x + l)
                coef *= g_right(T(i + 1, off_y + l), x, q)
                for lp in range(1, off_y + l):
                    coef *= eval_f(T(i + 1, lp), x, q)
    word = []
    for j in range(N - 1, 0, -1):
        for i in range(1, j + 1):
            for l in range(s[(j, i - 1)] + 1, s[(j, i)] + 1):
                word.append((i, j + 1, T(j, l)))
    for j in range(1, N):
        # diagonal tail runs over l = s^j_j + 1 .. n_j
        for l in range(s[(j, j)] + 1, n[j - 1] + 1):
            word.append((j + 1, j + 1, T(j, l)))
    return coef, word


def oracle_perm(variant: str, t, q, guard: int = ORACLE_GUARD) -> WordSum:
    """B or Bhat from the permutation-sum formulas (brute force)."""
    t = _as_params(t)
    q = _q(q, t)
    n, N = t.n, t.N
    if sum(n) > guard:
        raise SizeGuardExceeded(f"sum(n) = {sum(n)} exceeds the oracle guard {guard}")
    if variant == "B":
        matrices, term = enumerate_upper(n), _oracle_B_term
    elif variant == "Bhat":
        matrices, term = enumerate_lower(n), _oracle_Bhat_term
    else:
        raise ValueError("variant must be 'B' or 'Bhat'")
    out = WordSum(N, q, tag=f"oracle-{variant}")
    perms = list(itertools.product(*(itertools.permutations(tk) for tk in t.types)))
    for m in matrices:
        for tt in perms:
            coef, word = term(tt, m, n, N, q)
            out.add_term(word, coef)
    out = canonicalize(out)
    out.tag = f"oracle-{variant}"
    return out


# ---------------------------------------------------------------- vectors

def _check_model(model: ChainModel, t: BetheParams):
    if model.N != t.N:
        raise RankMismatch(f"rank-{t.N} parameters on a rank-{model.N} chain")


def bv_right(model: ChainModel, variant: str, t) -> np.ndarray:
    """B|0> or Bhat|0> on ``model``."""
    if variant not in ("B", "Bhat"):
        raise ValueError("right Bethe vectors come from 'B' or 'Bhat'")
    t = _as_params(t) if isinstance(t, BetheParams) else BetheParams(t, model.backend)
    _check_model(model, t)
    return evaluate_word(model, PREBV[variant](t, model.q), RIGHT_ON_VACUUM)


def bv_left(model: ChainModel, variant: str, t) -> np.ndarray:
    """Components of <0|C or <0|Chat on ``model``."""
    if variant not in ("C", "Chat"):
        raise ValueError("left Bethe vectors come from 'C' or 'Chat'")
    t = _as_params(t) if isinstance(t, BetheParams) else BetheParams(t, model.backend)
    _check_model(model, t)
    return evaluate_word(model, PREBV[variant](t, model.q), LEFT_ON_VACUUM)


GL3_SIDES = ("right-1", "right-2", "left-1", "left-2")


def _subsets(xs):
    """All (chosen, rest) splits of xs, chosen of every size."""
    idx = range(len(xs))
    for r in range(len(xs) + 1):
        for pick in itertools.combinations(idx, r):
            yield [xs[i] for i in pick], [xs[i] for i in idx if i not in pick]


def gl3_explicit(model: ChainModel, us, vs, side: str) -> np.ndarray:
    """The N = 3 Bethe vectors written directly as two-fold partition sums.

    right-1: sum K_l(vI|uI) f(uI,uII) f(vII,vI) T13(uI) T12(uII) T23(vII) lambda2(vI) |0>
    right-2: sum K_r(vI|uI) f(uI,uII) f(vII,vI) T13(vI) T23(vII) T12(uII) lambda2(uI) |0>
    left-1:  sum K_r(vI|uI) f(uI,uII) f(vII,vI) lambda2(vI) <0| T32(vII) T21(uII) T31(uI)
    left-2:  sum K_l(vI|uI) f(uI,uII) f(vII,vI) lambda2(uI) <0| T21(uII) T32(vII) T31(vI)
    """
    if model.N != 3:
        raise RankMismatch("the explicit two-fold formulas are for N = 3 only")
    if side not in GL3_SIDES:
        raise ValueError(f"side must be one of {GL3_SIDES}")
    q = model.q
    us = [model.scalar(x) for x in us]
    vs = [model.scalar(x) for x in vs]
    right = side.startswith("right")
    acc = field.zeros(model.dim, model.backend)
    one = field.parse_scalar(1, model.backend)
    for uI, uII in _subsets(us):
        for vI, vII in _subsets(vs):
            if len(uI) != len(vI):
                continue
            variant = LEFT if side in ("right-1", "left-2") else RIGHT
            coef = izergin(vI, uI, q, variant) * set_f(uI, uII, q) * set_f(vII, vI, q)
            lam_set = vI if side in ("right-1", "left-1") else uI
            for x in lam_set:
                coef *= lambda_fn(model, 2, x)
            if side == "right-1":
                ops = [(1, 3, uI), (1, 2, uII), (2, 3, vII)]
            elif side == "right-2":
                ops = [(1, 3, vI), (2, 3, vII), (1, 2, uII)]
            elif side == "left-1":
                ops = [(3, 2, vII), (2, 1, uII), (3, 1, uI)]
            else:
                ops = [(2, 1, uII), (3, 2, vII), (3, 1, vI)]
            letters = [(i, j, z) for i, j, zs in ops for z in zs]
            if right:
                vec = vacuum(model)
                for i, j, z in reversed(letters):
                    vec = MonodromyEntry(model, i, j, z).apply(vec)
            else:
                vec = dual_vacuum(model)
                for i, j, z in letters:
                    vec = MonodromyEntry(model, i, j, z).apply_left(vec)
            acc = acc + coef * one * vec
    return acc


def normalized_bv_gl3(model: ChainModel, us, vs, variant: str = "B") -> np.ndarray:
    """B(u, v) / (f(v, u) lambda_2(u) lambda_2(v)), the pole-free normalisation."""
    if model.N != 3:
        raise RankMismatch("the normalisation is defined for N = 3 only")
    t = BetheParams([us, vs], model.backend)
    norm = set_f(t[2], t[1], model.q)
    for x in t[1] + t[2]:
        norm *= lambda_fn(model, 2, x)
    if norm == 0:
        raise ZeroDivisionError("normalisation factor vanishes")
    return bv_right(model, variant, t) / norm
