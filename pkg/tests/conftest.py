import numpy as np
import pytest
from gmpy2 import mpq

from bethelab import field
from bethelab.bethe import BetheParams
from bethelab.chain import ChainModel


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def draw(rng, count, exclude=()):
    return field.random_rationals(rng, count, exclude=exclude)


def split_types(vals, n):
    out, pos = [], 0
    for k in n:
        out.append(list(vals[pos:pos + k]))
        pos += k
    return out


def random_setup(rng, N, L, n, q=None):
    """Chain and Bethe parameters with all values pairwise distinct."""
    vals = draw(rng, L + sum(n))
    q = field.random_q(rng) if q is None else mpq(q)
    model = ChainModel.create(N, q, vals[:L])
    return model, BetheParams(split_types(vals[L:], n))


def complex_setup(rng, N, L, n, q=1.25 + 0.1j):
    xi = list(rng.normal(size=L) + 1j * rng.normal(size=L))
    model = ChainModel.create(N, q, xi, field.FLOAT)
    t = BetheParams([list(rng.normal(size=k) + 1j * rng.normal(size=k)) for k in n], field.FLOAT)
    return model, t
