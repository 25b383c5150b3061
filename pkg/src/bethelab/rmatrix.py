"""Trigonometric R-matrix on C^N (x) C^N and its symmetry relations.

Flattening convention: E_ij (x) E_kl sits at row (i-1)N + k, column
(j-1)N + l (0-based: row i*N + k, column j*N + l).
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpq

from . import field
from .kernel import eval_f, g_left, g_right


def _backend(*values):
    return field.backend_of(*values)


def build_r(u, v, q, N: int) -> np.ndarray:
    if N < 2:
        raise ValueError("N must be at least 2")
    backend = _backend(u, v, q)
    if backend == field.EXACT:
        u, v, q = mpq(u), mpq(v), mpq(q)
    f = eval_f(u, v, q)
    gl = g_left(u, v, q)
    gr = g_right(u, v, q)
    one = field.parse_scalar(1, backend)
    R = field.zeros((N * N, N * N), backend)
    for i in range(N):
        for j in range(N):
            R[i * N + j, i * N + j] = f if i == j else one
    for i in range(N):
        for j in range(i + 1, N):
            # E_ij (x) E_ji and E_ji (x) E_ij
            R[i * N + j, j * N + i] = gl
            R[j * N + i, i * N + j] = gr
    return R


def build_u_matrix(N: int, backend: str = field.EXACT) -> np.ndarray:
    """Anti-diagonal reversal matrix sum_i E_{i, N+1-i}."""
    if N < 2:
        raise ValueError("N must be at least 2")
    U = field.zeros((N, N), backend)
    one = field.parse_scalar(1, backend)
    for i in range(N):
        U[i, N - 1 - i] = one
    return U


def permutation(N: int, backend: str = field.EXACT) -> np.ndarray:
    """P_12 exchanging the two tensor factors."""
    P = field.zeros((N * N, N * N), backend)
    one = field.parse_scalar(1, backend)
    for i in range(N):
        for k in range(N):
            P[i * N + k, k * N + i] = one
    return P


def swap_spaces(R: np.ndarray, N: int) -> np.ndarray:
    """R_21 = P R_12 P."""
    P = permutation(N, field.EXACT if R.dtype == object else field.FLOAT)
    return P.dot(R).dot(P)


def r_property_residuals(u, v, q, N: int) -> dict:
    """Max-magnitude residual of every symmetry relation of R(u, v; q).

    Keys name the relation; values are exact rationals on the exact backend.
    """
    backend = _backend(u, v, q)
    if backend == field.EXACT:
        u, v, q = mpq(u), mpq(v), mpq(q)
    qi = 1 / q
    R12 = build_r(u, v, q, N)
    R21 = swap_spaces(R12, N)
    R21_vu = swap_spaces(build_r(v, u, q, N), N)
    ident = field.eye(N * N, backend)
    U = build_u_matrix(N, backend)
    UU = np.kron(U, U)  # U^{-1} = U
    out = {
        "unitarity": field.max_abs(
            R12.dot(R21_vu) - eval_f(u, v, q) * eval_f(v, u, q) * ident),
        "double_transpose": field.max_abs(R12.T - R21),
        "u_conjugation": field.max_abs(UU.dot(R12).dot(UU) - R21),
        "r21_inverse_args": field.max_abs(
            R21_vu - swap_spaces(build_r(1 / u, 1 / v, q, N), N)),
        "r21_q_inverse": field.max_abs(R21_vu - build_r(u, v, qi, N)),
        "r12_inverse_args": field.max_abs(build_r(1 / v, 1 / u, q, N) - R12),
    }
    return out
