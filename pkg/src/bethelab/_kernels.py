"""Hot inner loop: one site of the monodromy product acting on a stack of vectors.

For site k the R-matrix entry (R_0k)_{ac} is a local operator: diagonal
(``f`` on state a, 1 elsewhere) when a == c, and ``C[a, c] * E_{ca}`` when
a != c.  Propagating the stack W_c (one vector per auxiliary index) through
the site gives

    W'_a[s] = f * W_a[a]                  if s == a
    W'_a[s] = W_a[s] + C[a, s] * W_s[a]   otherwise

where the bracket is the local index of site k.  W has shape
(N, P, N, Q): auxiliary index, sites before k, site k, sites after k
(times any batch columns).

Float arrays go through a numba kernel unless ``BETHELAB_DISABLE_JIT`` is set
to a non-empty value other than ``0``; object arrays (exact rationals) always
use the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

ENV_FLAG = "BETHELAB_DISABLE_JIT"


def _env_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip() not in ("", "0")


_use_jit = njit is not None and not _env_disabled()


def jit_enabled() -> bool:
    return _use_jit


def set_jit(enabled: bool) -> None:
    """Switch the float path between the numba and numpy kernels at runtime."""
    global _use_jit
    if enabled and njit is None:
        raise RuntimeError("numba is not available")
    _use_jit = bool(enabled)


def site_step_numpy(W: np.ndarray, f, C: np.ndarray) -> np.ndarray:
    N = W.shape[0]
    out = W.copy()
    for a in range(N):
        out[a, :, a, :] = f * W[a, :, a, :]
        for s in range(N):
            if s != a:
                out[a, :, s, :] = W[a, :, s, :] + C[a, s] * W[s, :, a, :]
    return out


if njit is not None:

    @njit(cache=True, nogil=True)
    def _site_step_jit(W, f, C):
        N, P, _, Q = W.shape
        out = np.empty_like(W)
        for a in range(N):
            for p in range(P):
                for s in range(N):
                    if s == a:
                        for r in range(Q):
                            out[a, p, s, r] = f * W[a, p, a, r]
                    else:
                        c = C[a, s]
                        for r in range(Q):
                            out[a, p, s, r] = W[a, p, s, r] + c * W[s, p, a, r]
        return out

else:  # pragma: no cover
    _site_step_jit = None


def site_step(W: np.ndarray, f, C: np.ndarray) -> np.ndarray:
    if _use_jit and W.dtype == np.complex128:
        return _site_step_jit(np.ascontiguousarray(W), complex(f),
                              np.ascontiguousarray(C, dtype=np.complex128))
    return site_step_numpy(W, f, C)
