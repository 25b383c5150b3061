import itertools

import numpy as np
import pytest
from gmpy2 import mpq

from bethelab import chain, field
from bethelab._kernels import jit_enabled, set_jit
from bethelab.errors import DimensionMismatch, InvalidQ, PoleCollision
from bethelab.rmatrix import build_r
from bethelab.words import WordSum
from conftest import draw


def embed_pair(R, N, nspaces, a, b, backend):
    """Operator R on spaces (a, b) of an nspaces-fold tensor product."""
    D = N ** nspaces
    out = field.zeros((D, D), backend)
    for idx in itertools.product(range(N), repeat=nspaces):
        for c1, c2 in itertools.product(range(N), repeat=2):
            val = R[idx[a] * N + idx[b], c1 * N + c2]
            if val == 0:
                continue
            col = list(idx)
            col[a], col[b] = c1, c2
            r = int(np.ravel_multi_index(idx, (N,) * nspaces))
            c = int(np.ravel_multi_index(col, (N,) * nspaces))
            out[r, c] += val
    return out


def dense_monodromy(model, z):
    """T(z) = R_{0L} ... R_{01} built from full Kronecker embeddings."""
    N, L = model.N, model.L
    D = N ** (L + 1)
    M = field.eye(D, model.backend)
    for k in range(L):
        R = build_r(z, model.xi[k], model.q, N)
        M = embed_pair(R, N, L + 1, 0, k + 1, model.backend).dot(M)
    d = model.dim
    return np.array([[M[i * d:(i + 1) * d, j * d:(j + 1) * d] for j in range(N)] for i in range(N)])


@pytest.mark.parametrize("N,L", [(2, 1), (2, 3), (3, 2), (4, 1)])
def test_monodromy_matches_dense_oracle_exact(rng, N, L):
    vals = draw(rng, L + 1)
    model = chain.ChainModel.create(N, mpq(3, 2), vals[1:])
    assert (chain.monodromy_blocks(model, vals[0]) == dense_monodromy(model, vals[0])).all()


@pytest.mark.parametrize("use_jit", [True, False])
def test_monodromy_matches_dense_oracle_float(use_jit):
    prev = jit_enabled()
    set_jit(use_jit)
    try:
        model = chain.ChainModel.create(3, 1.1 + 0.3j, [0.4 - 0.2j, -1.3 + 0.1j, 0.7j], field.FLOAT)
        got = chain.monodromy_blocks(model, 0.25 + 0.5j)
        assert np.allclose(got, dense_monodromy(model, 0.25 + 0.5j), atol=1e-13)
    finally:
        set_jit(prev)


def test_vacuum_eigenvalues(rng):
    vals = draw(rng, 4)
    model = chain.ChainModel.create(3, mpq(5, 2), vals[1:])
    z = vals[0]
    vac = chain.vacuum(model)
    for i in range(1, 4):
        Tii = chain.monodromy_entry(model, i, i, z)
        assert (Tii.apply(vac) == chain.lambda_fn(model, i, z) * vac).all()
        assert (Tii.apply_left(vac) == chain.lambda_fn(model, i, z) * vac).all()
    for i, j in [(2, 1), (3, 1), (3, 2)]:
        assert field.max_abs(chain.monodromy_entry(model, i, j, z).apply(vac)) == 0
        assert field.max_abs(chain.monodromy_entry(model, j, i, z).apply_left(vac)) == 0


def test_single_site_values():
    model = chain.ChainModel.create(2, 2, [1])
    assert chain.monodromy_entry(model, 1, 1, 5).apply(chain.vacuum(model))[0] == mpq(19, 8)
    assert list(chain.monodromy_entry(model, 1, 2, 5).apply(chain.vacuum(model))) == [0, mpq(15, 8)]
    assert list(chain.monodromy_entry(model, 2, 1, 5).apply_left(chain.vacuum(model))) == [0, mpq(3, 8)]


def test_apply_left_is_transpose(rng):
    vals = draw(rng, 3)
    model = chain.ChainModel.create(3, mpq(4, 3), vals[1:])
    e = chain.monodromy_entry(model, 2, 3, vals[0])
    D = e.dense()
    w = np.array([mpq(k + 1, 3) for k in range(model.dim)], dtype=object)
    assert (e.apply_left(w) == D.T.dot(w)).all()


def test_transfer_matrix_is_trace(rng):
    vals = draw(rng, 3)
    model = chain.ChainModel.create(2, mpq(4, 3), vals[1:])
    blocks = chain.monodromy_blocks(model, vals[0])
    assert (chain.transfer_matrix(model, vals[0]).dense() == blocks[0, 0] + blocks[1, 1]).all()


def test_transfer_matrices_commute(rng):
    vals = draw(rng, 4)
    model = chain.ChainModel.create(3, mpq(-3, 2), vals[2:])
    A = chain.transfer_matrix(model, vals[0]).dense()
    B = chain.transfer_matrix(model, vals[1]).dense()
    assert (A.dot(B) == B.dot(A)).all()


@pytest.mark.parametrize("N,L", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_rtt_exact(rng, N, L):
    vals = draw(rng, L + 2)
    model = chain.ChainModel.create(N, field.random_q(rng), vals[2:])
    assert chain.rtt_residual(model, vals[0], vals[1]) == 0


def test_evaluate_word_modes(rng):
    vals = draw(rng, 5)
    model = chain.ChainModel.create(3, mpq(5, 3), vals[:2])
    u, v, w = vals[2:]
    ws = WordSum(3, model.q, [(((1, 2, u), (2, 3, v)), mpq(2)), (((1, 3, w),), mpq(-1, 3))])
    T12 = chain.monodromy_entry(model, 1, 2, u).dense()
    T23 = chain.monodromy_entry(model, 2, 3, v).dense()
    T13 = chain.monodromy_entry(model, 1, 3, w).dense()
    op = 2 * T12.dot(T23) - mpq(1, 3) * T13
    vac = chain.vacuum(model)
    assert (chain.evaluate_word(model, ws, chain.FULL_OPERATOR) == op).all()
    assert (chain.evaluate_word(model, ws, chain.RIGHT_ON_VACUUM) == op.dot(vac)).all()
    assert (chain.evaluate_word(model, ws, chain.LEFT_ON_VACUUM) == op.T.dot(vac)).all()


def test_empty_word_is_identity(rng):
    model = chain.ChainModel.create(2, mpq(2), draw(rng, 2))
    ws = WordSum.word(2, model.q, ())
    assert (chain.evaluate_word(model, ws) == chain.vacuum(model)).all()


def test_model_validation():
    with pytest.raises(InvalidQ):
        chain.ChainModel.create(2, 1, [1])
    with pytest.raises(InvalidQ):
        chain.ChainModel.create(2, -1, [1])
    with pytest.raises(ValueError):
        chain.ChainModel.create(2, 2, [1, 1])
    with pytest.raises(ValueError):
        chain.ChainModel.create(2, 2, [0])
    model = chain.ChainModel.create(2, 2, [1, 3])
    with pytest.raises(PoleCollision):
        chain.monodromy_entry(model, 1, 2, 3)
    with pytest.raises(DimensionMismatch):
        chain.monodromy_entry(model, 1, 2, 5).apply(np.zeros(3, dtype=object))
