"""Coefficient fields.

Two backends are supported:

* ``exact``: ``gmpy2.mpq`` rationals.  Equality is exact, so identities of the
  theory become zero-residual assertions.
* ``float``: Python ``complex`` / numpy ``complex128``.  Used for root finding
  and for the large benchmark cases.

All scalar routines in the package are written against ordinary arithmetic
operators, so they work unchanged on both backends; only determinants,
array allocation and zero tests need to know which backend is active.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from .errors import ConfigError

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

#: default absolute tolerance for float-backend equality tests
FLOAT_ATOL = 1e-12


def is_exact_value(x) -> bool:
    return isinstance(x, (int, Fraction)) or type(x).__name__ == "mpq"


def backend_of(*values) -> str:
    """``exact`` if every value is rational, ``float`` otherwise."""
    for x in values:
        if isinstance(x, (list, tuple)):
            if backend_of(*x) == FLOAT:
                return FLOAT
        elif not is_exact_value(x):
            return FLOAT
    return EXACT


def parse_scalar(x, backend: str = EXACT):
    """Convert ``x`` to a scalar of ``backend``.

    Accepts ints, ``Fraction``/``mpq``, strings ``"p/r"`` or ``"1.5"``,
    floats, complex numbers and ``[re, im]`` pairs (the JSON encoding of
    complex floats).
    """
    if backend not in BACKENDS:
        raise ConfigError(f"unknown backend {backend!r}")
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ConfigError(f"complex scalars are [re, im] pairs, got {x!r}")
        if backend == EXACT:
            raise ConfigError("complex values are not representable on the exact backend")
        return complex(float(x[0]), float(x[1]))
    if backend == EXACT:
        if isinstance(x, complex):
            if x.imag != 0:
                raise ConfigError(f"{x!r} is not rational")
            x = x.real
        if isinstance(x, float):
            return mpq(Fraction(x).limit_denominator(10**12))
        if isinstance(x, str):
            try:
                return mpq(x.strip())
            except ValueError:
                return mpq(Fraction(x.strip()))
        return mpq(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            return complex(Fraction(s))
        return complex(s.replace("i", "j"))
    if is_exact_value(x):
        return complex(Fraction(int(mpq(x).numerator), int(mpq(x).denominator)))
    return complex(x)


def to_json(x):
    """JSON encoding: rationals as ``"p/r"`` strings, complex as ``[re, im]``."""
    if is_exact_value(x):
        return str(mpq(x))
    if isinstance(x, numbers.Complex):
        z = complex(x)
        return [z.real, z.imag]
    raise TypeError(f"cannot encode {type(x).__name__}")


def dtype_for(backend: str):
    return object if backend == EXACT else np.complex128


def zeros(shape, backend: str) -> np.ndarray:
    if backend == EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(mpq(0))
        return out
    return np.zeros(shape, dtype=np.complex128)


def eye(n: int, backend: str) -> np.ndarray:
    out = zeros((n, n), backend)
    one = mpq(1) if backend == EXACT else 1.0
    for i in range(n):
        out[i, i] = one
    return out


def as_array(values, backend: str) -> np.ndarray:
    if backend == EXACT:
        arr = np.empty(len(values), dtype=object)
        for i, v in enumerate(values):
            arr[i] = mpq(v)
        return arr
    return np.asarray([complex(v) for v in values], dtype=np.complex128)


def max_abs(arr):
    """Largest entry magnitude; exact rational on the exact backend."""
    arr = np.asarray(arr)
    if arr.size == 0:
        return mpq(0) if arr.dtype == object else 0.0
    if arr.dtype == object:
        return max(abs(x) for x in arr.flat)
    return float(np.max(np.abs(arr)))


def is_zero(x, atol: float = FLOAT_ATOL) -> bool:
    if is_exact_value(x):
        return x == 0
    return abs(x) <= atol


def det(rows, backend: str | None = None):
    """Determinant of a square matrix given as a nested sequence.

    Exact backend: Bareiss fraction-free elimination with row pivoting.
    Float backend: LU with partial pivoting (``numpy.linalg.det``).
    """
    n = len(rows)
    if n == 0:
        return mpq(1) if backend != FLOAT else 1.0
    if backend is None:
        backend = backend_of(*[list(r) for r in rows])
    if backend == FLOAT:
        return complex(np.linalg.det(np.asarray(rows, dtype=np.complex128)))
    a = [[mpq(x) for x in row] for row in rows]
    sign = 1
    prev = mpq(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return mpq(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) / prev
        prev = akk
    return sign * a[n - 1][n - 1]


def random_rationals(rng: np.random.Generator, count: int, *, exclude=(), numer=24, denom=9,
                     nonzero=True, predicate=None):
    """Draw ``count`` pairwise distinct rationals ``p/r`` with ``|p| <= numer``,
    ``1 <= r <= denom``.

    Values in ``exclude`` are never returned; ``predicate(candidate, chosen)``
    may veto further candidates (used to keep generic points off the poles).
    """
    chosen: list = []
    banned = {mpq(x) for x in exclude}
    attempts = 0
    while len(chosen) < count:
        attempts += 1
        if attempts > 10000 * (count + 1):
            raise RuntimeError("could not draw enough generic rationals")
        p = int(rng.integers(-numer, numer + 1))
        r = int(rng.integers(1, denom + 1))
        x = mpq(p, r)
        if (nonzero and x == 0) or x in banned or x in chosen:
            continue
        if predicate is not None and not predicate(x, chosen):
            continue
        chosen.append(x)
    return chosen


def random_q(rng: np.random.Generator):
    """A rational deformation parameter away from 0 and +-1."""
    while True:
        (q,) = random_rationals(rng, 1, numer=7, denom=5)
        if abs(q) != 1:
            return q
