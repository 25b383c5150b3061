"""Inhomogeneous L-site chain in the vector representation.

T(z) = R_{0L}(z, xi_L) ... R_{01}(z, xi_1) with auxiliary space 0, so site 1
acts first.  Site 1 is the most significant tensor factor of the N**L
dimensional quantum space.  The reference state is e_1 (x) ... (x) e_1, on
which lambda_1(z) = prod_k f(z, xi_k) and lambda_i(z) = 1 for i >= 2.

Monodromy entries are never stored as dense matrices on the hot path: a
"column pass" pushes a stack of N vectors through the L sites and returns
T_{aj}(z) v for every a at once.  Covectors use the transposed "row pass".
Matrix indices of letters and entries are 1-based, as in T_{ij}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from . import field
from ._kernels import site_step
from .errors import DimensionMismatch, InvalidQ, PoleCollision
from .kernel import eval_f, g_left, g_right
from .rmatrix import build_r


@dataclass(frozen=True)
class ChainModel:
    N: int
    q: object
    xi: tuple
    backend: str = field.EXACT

    @classmethod
    def create(cls, N: int, q, xi=(), backend: str = field.EXACT) -> "ChainModel":
        q = field.parse_scalar(q, backend)
        xi = tuple(field.parse_scalar(x, backend) for x in xi)
        model = cls(int(N), q, xi, backend)
        model.validate()
        return model

    def validate(self) -> None:
        if self.N < 2:
            raise ValueError("rank N must be at least 2")
        if self.q == 0:
            raise InvalidQ("q must be nonzero")
        if self.backend == field.EXACT and abs(self.q) == 1:
            raise InvalidQ("rational q = +-1 is a root of unity")
        if len(set(self.xi)) != len(self.xi):
            raise ValueError("inhomogeneities must be pairwise distinct")
        if any(x == 0 for x in self.xi):
            raise ValueError("inhomogeneities must be nonzero")

    @property
    def L(self) -> int:
        return len(self.xi)

    @property
    def dim(self) -> int:
        return self.N ** self.L

    def scalar(self, x):
        return field.parse_scalar(x, self.backend)

    def with_q(self, q) -> "ChainModel":
        return ChainModel.create(self.N, q, self.xi, self.backend)

    def _site_data(self, z, k: int, transpose: bool = False):
        xi = self.xi[k]
        if z == xi:
            raise PoleCollision(f"spectral parameter {z} hits inhomogeneity xi_{k + 1}")
        f = eval_f(z, xi, self.q)
        gl, gr = g_left(z, xi, self.q), g_right(z, xi, self.q)
        C = field.zeros((self.N, self.N), self.backend)
        for a in range(self.N):
            for c in range(self.N):
                if a < c:
                    C[a, c] = gl
                elif a > c:
                    C[a, c] = gr
        return f, (C.T.copy() if transpose else C)


def _as_stack(model: ChainModel, v: np.ndarray):
    v = np.asarray(v)
    if v.shape[0] != model.dim:
        raise DimensionMismatch(f"vector of length {v.shape[0]} on a {model.dim}-dim chain")
    return v.reshape(model.dim, -1), v.ndim == 1


def column_pass(model: ChainModel, j: int, z, v: np.ndarray) -> np.ndarray:
    """Stack W with W[a-1] = T_{a j}(z) v for a = 1..N."""
    z = model.scalar(z)
    V, flat = _as_stack(model, v)
    N, L = model.N, model.L
    W = field.zeros((N,) + V.shape, model.backend)
    W[j - 1] = V
    B = V.shape[1]
    for k in range(L):
        f, C = model._site_data(z, k)
        W = site_step(W.reshape(N, N ** k, N, N ** (L - k - 1) * B), f, C)
    W = W.reshape((N,) + V.shape)
    return W[:, :, 0] if flat else W


def row_pass(model: ChainModel, i: int, z, w: np.ndarray) -> np.ndarray:
    """Stack W with W[b-1] = (w^T T_{i b}(z))^T for b = 1..N."""
    z = model.scalar(z)
    V, flat = _as_stack(model, w)
    N, L = model.N, model.L
    W = field.zeros((N,) + V.shape, model.backend)
    W[i - 1] = V
    B = V.shape[1]
    for k in reversed(range(L)):
        f, C = model._site_data(z, k, transpose=True)
        W = site_step(W.reshape(N, N ** k, N, N ** (L - k - 1) * B), f, C)
    W = W.reshape((N,) + V.shape)
    return W[:, :, 0] if flat else W


class MonodromyEntry:
    """T_{ij}(z) as a lazily applied operator."""

    def __init__(self, model: ChainModel, i: int, j: int, z):
        if not (1 <= i <= model.N and 1 <= j <= model.N):
            raise IndexError(f"T_{i}{j} outside rank {model.N}")
        self.model, self.i, self.j = model, i, j
        self.z = model.scalar(z)
        if self.z in model.xi:
            raise PoleCollision(f"spectral parameter {self.z} hits an inhomogeneity")

    def apply(self, v):
        return column_pass(self.model, self.j, self.z, v)[self.i - 1]

    def apply_left(self, w):
        return row_pass(self.model, self.i, self.z, w)[self.j - 1]

    def dense(self) -> np.ndarray:
        return self.apply(field.eye(self.model.dim, self.model.backend))


def monodromy_entry(model: ChainModel, i: int, j: int, z) -> MonodromyEntry:
    return MonodromyEntry(model, i, j, z)


class TransferMatrix:
    """sum_i T_ii(z)."""

    def __init__(self, model: ChainModel, z):
        self.model = model
        self.z = model.scalar(z)
        if self.z in model.xi:
            raise PoleCollision(f"spectral parameter {self.z} hits an inhomogeneity")

    def apply(self, v):
        return sum(column_pass(self.model, i, self.z, v)[i - 1] for i in range(1, self.model.N + 1))

    def apply_left(self, w):
        return sum(row_pass(self.model, i, self.z, w)[i - 1] for i in range(1, self.model.N + 1))

    def dense(self) -> np.ndarray:
        return self.apply(field.eye(self.model.dim, self.model.backend))


def transfer_matrix(model: ChainModel, z) -> TransferMatrix:
    return TransferMatrix(model, z)


def vacuum(model: ChainModel) -> np.ndarray:
    v = field.zeros(model.dim, model.backend)
    v[0] = field.parse_scalar(1, model.backend)
    return v


def dual_vacuum(model: ChainModel) -> np.ndarray:
    """Components of <0| (the same unit vector, read as a covector)."""
    return vacuum(model)


def lambda_fn(model: ChainModel, i: int, z):
    z = model.scalar(z)
    one = field.parse_scalar(1, model.backend)
    if i != 1:
        return one
    out = one
    for x in model.xi:
        out *= eval_f(z, x, model.q)
    return out


def monodromy_blocks(model: ChainModel, z) -> np.ndarray:
    """Dense T(z) as an array of shape (N, N, D, D) of quantum-space blocks."""
    eye = field.eye(model.dim, model.backend)
    blocks = field.zeros((model.N, model.N, model.dim, model.dim), model.backend)
    for j in range(1, model.N + 1):
        blocks[:, j - 1] = column_pass(model, j, z, eye)
    return blocks


def rtt_residual(model: ChainModel, u, v):
    """Max entry of R(u,v)(T(u)x1)(1xT(v)) - (1xT(v))(T(u)x1)R(u,v)."""
    u, v = model.scalar(u), model.scalar(v)
    N = model.N
    R = build_r(u, v, model.q, N)
    Tu = monodromy_blocks(model, u)
    Tv = monodromy_blocks(model, v)
    # (T(u)x1)(1xT(v)) at ((a,b),(j,l)) = T_aj(u) T_bl(v); reverse order for the other side
    uv = {}
    vu = {}
    worst = field.max_abs(np.zeros(0, dtype=object if model.backend == field.EXACT else complex))
    nz = [(r, c) for r in range(N * N) for c in range(N * N) if R[r, c] != 0]
    rows: dict = {}
    cols: dict = {}
    for r, c in nz:
        rows.setdefault(r, []).append(c)
        cols.setdefault(c, []).append(r)
    for i in range(N):
        for k in range(N):
            for j in range(N):
                for l in range(N):
                    lhs = 0
                    for c in rows.get(i * N + k, ()):
                        a, b = divmod(c, N)
                        key = (a, j, b, l)
                        if key not in uv:
                            uv[key] = Tu[a, j].dot(Tv[b, l])
                        lhs = lhs + R[i * N + k, c] * uv[key]
                    rhs = 0
                    for r in cols.get(j * N + l, ()):
                        a, b = divmod(r, N)
                        key = (k, b, i, a)
                        if key not in vu:
                            vu[key] = Tv[k, b].dot(Tu[i, a])
                        rhs = rhs + vu[key] * R[r, j * N + l]
                    worst = max(worst, field.max_abs(lhs - rhs))
    return worst


RIGHT_ON_VACUUM = "right-on-vacuum"
LEFT_ON_VACUUM = "left-on-vacuum"
FULL_OPERATOR = "full-operator"
SIDES = (RIGHT_ON_VACUUM, LEFT_ON_VACUUM, FULL_OPERATOR)


def _build_trie(terms, reverse: bool):
    # node: [terminal coefficient or None, {letter: child}]
    root = [None, {}]
    for coeff, word in terms:
        node = root
        for letter in (reversed(word) if reverse else word):
            node = node[1].setdefault(tuple(letter), [None, {}])
        node[0] = coeff if node[0] is None else node[0] + coeff
    return root


def evaluate_word(model: ChainModel, wsum, side: str = RIGHT_ON_VACUUM) -> np.ndarray:
    """Evaluate a weighted sum of words of monodromy entries on the chain.

    ``wsum`` is anything with ``.items()`` yielding ``(word, coefficient)``
    pairs whose words are sequences of ``(i, j, z)`` letters (e.g. a
    :class:`bethelab.words.WordSum`).  Right mode returns the vector
    ``sum c * w |0>``, left mode the covector components of
    ``sum c * <0| w``, full mode the dense operator.
    """
    if side not in SIDES:
        raise ValueError(f"unknown side {side!r}")
    N = getattr(wsum, "N", model.N)
    if N != model.N:
        raise DimensionMismatch(f"rank-{N} words on a rank-{model.N} chain")
    terms = [(c, w) for w, c in wsum.items()]
    if side == FULL_OPERATOR:
        start = field.eye(model.dim, model.backend)
    elif side == RIGHT_ON_VACUUM:
        start = vacuum(model)
    else:
        start = dual_vacuum(model)
    acc = field.zeros(start.shape, model.backend)
    left = side == LEFT_ON_VACUUM
    trie = _build_trie(terms, reverse=not left)

    # siblings sharing (column, z) [right] or (row, z) [left] share one pass
    def visit(node, vec):
        nonlocal acc
        if node[0] is not None:
            acc = acc + node[0] * vec
        groups: dict = {}
        for letter, child in node[1].items():
            i, j, z = letter
            groups.setdefault((i if left else j, z), []).append((i if left else j, i, j, child))
        for (idx, z), members in groups.items():
            if left:
                W = row_pass(model, idx, z, vec)
                for _, i, j, child in members:
                    visit(child, W[j - 1])
            else:
                W = column_pass(model, idx, z, vec)
                for _, i, j, child in members:
                    visit(child, W[i - 1])

    visit(trie, start)
    return acc
