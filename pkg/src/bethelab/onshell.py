"""Bethe equations, the transfer-matrix eigenvalue and eigenvector checks.

For type i and root t = t^i_j the equations read

    lambda_i(t) / lambda_{i+1}(t)
        = prod_{m != j} f(t, t^i_m) / f(t^i_m, t)
          * prod_m f(t, t^{i-1}_m)^{-1} * prod_m f(t^{i+1}_m, t)

with empty t^0 and t^N.  Writing f(u, v) = h(u, v) / (u - v), h(u, v) = q u - v/q,
the within-type ratio equals -h(t, t_m) / h(t_m, t); the cleared form used by
the solver multiplies through by every remaining denominator, so it is a
polynomial in the roots without the (t_j - t_m) factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import field
from .bethe import BetheParams, bv_left, bv_right
from .chain import ChainModel, TransferMatrix, lambda_fn
from .errors import DegenerateJacobian, NoConvergence, PoleCollision, RankMismatch, ZeroVector
from .kernel import eval_f


def _h(u, v, q):
    return q * u - v / q


def _types(model: ChainModel, t: BetheParams):
    if t.N != model.N:
        raise RankMismatch(f"rank-{t.N} parameters on a rank-{model.N} chain")
    empty: tuple = ()
    return (empty,) + t.types + (empty,)


def _check_poles(model: ChainModel, t: BetheParams) -> None:
    for k, tk in enumerate(t.types, start=1):
        for x in tk:
            if x in model.xi:
                raise PoleCollision(f"type-{k} root {x} hits an inhomogeneity")


def bethe_residual(model: ChainModel, t: BetheParams) -> list:
    """LHS - RHS of every Bethe equation, ordered by type then root."""
    _check_poles(model, t)
    tt = _types(model, t)
    q = model.q
    out = []
    for i in range(1, model.N):
        for j, x in enumerate(tt[i]):
            lhs = lambda_fn(model, i, x) / lambda_fn(model, i + 1, x)
            rhs = field.parse_scalar(1, model.backend)
            for m, y in enumerate(tt[i]):
                if m != j:
                    rhs *= eval_f(x, y, q) / eval_f(y, x, q)
            for y in tt[i - 1]:
                rhs /= eval_f(x, y, q)
            for y in tt[i + 1]:
                rhs *= eval_f(y, x, q)
            out.append(lhs - rhs)
    return out


def _cleared(model: ChainModel, tt: list) -> np.ndarray:
    """Polynomial form of the equations for complex roots ``tt`` (t^0 .. t^N)."""
    q = complex(model.q)
    xi = [complex(x) for x in model.xi]
    out = []
    for i in range(1, model.N):
        n_i = len(tt[i])
        for j, x in enumerate(tt[i]):
            # lambda_1 = prod h(x, xi) / prod (x - xi); lambda_a = 1 otherwise
            num = [1.0, 1.0]
            den = [1.0, 1.0]
            for s, a in enumerate((i, i + 1)):
                if a == 1:
                    num[s] = math.prod(_h(x, e, q) for e in xi)
                    den[s] = math.prod(x - e for e in xi)
            left = (-1) ** (n_i - 1) * num[0] * den[1]
            right = num[1] * den[0]
            for m, y in enumerate(tt[i]):
                if m != j:
                    left *= _h(y, x, q)
                    right *= _h(x, y, q)
            for y in tt[i - 1]:
                left *= _h(x, y, q)
                right *= x - y
            for y in tt[i + 1]:
                left *= y - x
                right *= _h(y, x, q)
            out.append(left - right)
    return np.array(out, dtype=complex)


@dataclass
class BetheSolution:
    params: BetheParams
    residuals: list
    iterations: int
    converged: bool
    guess_index: int = 0
    history: list = dc_field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max((abs(r) for r in self.residuals), default=0.0)


def _split(x: np.ndarray, n: Sequence[int]) -> list:
    out, pos = [()], 0
    for k in n:
        out.append(tuple(complex(v) for v in x[pos:pos + k]))
        pos += k
    return out + [()]


def _admissible(model: ChainModel, tt: list, tol: float) -> bool:
    xi = [complex(x) for x in model.xi]
    for i in range(1, model.N):
        for j, x in enumerate(tt[i]):
            if abs(x) < tol or any(abs(x - e) < tol for e in xi):
                return False
            if any(abs(x - y) < tol for m, y in enumerate(tt[i]) if m != j):
                return False
            if any(abs(x - y) < tol for y in tt[i - 1] + tt[i + 1]):
                return False
    return True


def _deflation(x: np.ndarray, n: Sequence[int]) -> complex:
    """prod 1/(a - b) over same-type and adjacent-type root pairs.

    Collided root sets solve the cleared system but are inadmissible; dividing
    by the differences removes those zeros without adding new ones.
    """
    blocks, pos = [], 0
    for k in n:
        blocks.append(x[pos:pos + k])
        pos += k
    out = 1.0 + 0j
    for r, block in enumerate(blocks):
        for a in range(len(block)):
            for b in range(a + 1, len(block)):
                out /= block[a] - block[b]
        if r + 1 < len(blocks):
            for a in block:
                for b in blocks[r + 1]:
                    out /= a - b
    return out


def _system(model, x, n) -> np.ndarray:
    return _cleared(model, _split(x, n)) * _deflation(x, n)


def _newton(model, x0, n, tolerance, max_iter):
    x = np.array(x0, dtype=complex)
    F = _system(model, x, n)
    it = 0
    for it in range(1, max_iter + 1):
        size = x.size
        J = np.empty((size, size), dtype=complex)
        for c in range(size):
            step = 1e-7 * (1 + abs(x[c]))
            xp, xm = x.copy(), x.copy()
            xp[c] += step
            xm[c] -= step
            J[:, c] = (_system(model, xp, n) - _system(model, xm, n)) / (2 * step)
        if not np.all(np.isfinite(J)) or np.linalg.cond(J) > 1e14:
            raise DegenerateJacobian(f"singular Jacobian at iteration {it}")
        dx = np.linalg.solve(J, -F)
        norm0 = np.linalg.norm(F)
        damp = 1.0
        while damp > 1e-6:
            xn = x + damp * dx
            Fn = _system(model, xn, n)
            if np.linalg.norm(Fn) < norm0 or damp < 1e-5:
                break
            damp /= 2
        x, F = xn, Fn
        if np.linalg.norm(damp * dx) <= tolerance * (1 + np.linalg.norm(x)):
            return x, it, True
    return x, it, False


def random_guesses(rng: np.random.Generator, n: Sequence[int], count: int, scale: float = 1.0) -> list:
    """``count`` complex Gaussian starting points with the cardinalities ``n``."""
    return [[list(scale * (rng.normal(size=k) + 1j * rng.normal(size=k))) for k in n]
            for _ in range(count)]


def solve_bethe(model: ChainModel, n: Sequence[int], guesses, tolerance: float = 1e-13,
                max_iter: int = 100, min_vector_norm: float | None = 1e-8) -> BetheSolution:
    """Damped Newton on the cleared equations, trying each guess in turn.

    ``guesses`` is a list of initial points, each given per type like
    BetheParams input.  The first admissible converged root set wins; with
    ``min_vector_norm`` set, root sets whose Bethe vector (nearly) vanishes
    are skipped as well.
    """
    if model.backend != field.FLOAT:
        raise ValueError("solve_bethe works on the float backend")
    n = tuple(int(k) for k in n)
    if len(n) != model.N - 1:
        raise RankMismatch(f"{len(n)} cardinalities for rank {model.N}")
    degenerate = 0
    tried = 0
    for idx, guess in enumerate(guesses):
        g = BetheParams(guess, field.FLOAT)
        if g.n != n:
            raise ValueError(f"guess {idx} has cardinalities {g.n}, expected {n}")
        tried += 1
        x0 = [x for tk in g.types for x in tk]
        try:
            x, iters, ok = _newton(model, x0, n, tolerance, max_iter)
        except (DegenerateJacobian, np.linalg.LinAlgError):
            degenerate += 1
            continue
        tt = _split(x, n)
        if not ok or not _admissible(model, tt, 1e-8):
            continue
        params = BetheParams(list(tt[1:-1]), field.FLOAT)
        res = bethe_residual(model, params)
        if max((abs(r) for r in res), default=0.0) > 1e-8:
            continue
        if min_vector_norm is not None:
            if np.linalg.norm(bv_right(model, "B", params)) < min_vector_norm:
                continue
        return BetheSolution(params, res, iters, True, idx)
    if tried and degenerate == tried:
        raise DegenerateJacobian("Jacobian degenerate from every starting point")
    raise NoConvergence(f"no admissible root set from {tried} starting points")


def tau(model: ChainModel, z, t: BetheParams):
    """sum_i lambda_i(z) prod f(z, t^{i-1}) prod f(t^i, z)."""
    z = model.scalar(z)
    if z in model.xi:
        raise PoleCollision(f"spectral parameter {z} hits an inhomogeneity")
    tt = _types(model, t)
    if any(z == x for tk in t.types for x in tk):
        raise PoleCollision(f"spectral parameter {z} hits a Bethe root")
    q = model.q
    total = field.parse_scalar(0, model.backend)
    for i in range(1, model.N + 1):
        term = lambda_fn(model, i, z)
        for y in tt[i - 1]:
            term *= eval_f(z, y, q)
        for y in tt[i]:
            term *= eval_f(y, z, q)
        total += term
    return total


def _norm(v: np.ndarray, backend: str):
    # exact: max-norm keeps the ratio rational
    if backend == field.EXACT:
        return field.max_abs(v)
    return float(np.linalg.norm(v))


def _relative(defect, vec, backend):
    size = _norm(vec, backend)
    if size == 0:
        raise ZeroVector("the Bethe vector vanishes")
    return _norm(defect, backend) / size


def eigen_residual_right(model: ChainModel, t: BetheParams, z, variant: str = "B", vector=None):
    """|T(z) B - tau(z) B| / |B| for the right Bethe vector."""
    B = bv_right(model, variant, t) if vector is None else vector
    TB = TransferMatrix(model, z).apply(B)
    return _relative(TB - tau(model, z, t) * B, B, model.backend)


def eigen_residual_left(model: ChainModel, t: BetheParams, z, variant: str = "C", vector=None):
    """|C T(z) - tau(z) C| / |C| for the left Bethe vector."""
    C = bv_left(model, variant, t) if vector is None else vector
    CT = TransferMatrix(model, z).apply_left(C)
    return _relative(CT - tau(model, z, t) * C, C, model.backend)
