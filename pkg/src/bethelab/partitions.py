"""Permissible matrices and partitions of Bethe parameters.

An upper permissible matrix holds m^i_j (row i, column j, i <= j <= N-1) with
non-increasing rows and column sums n_j.  A lower permissible matrix holds
s^j_i (row j, column i, i <= j) with non-decreasing rows and column sums n_i.
Both are stored under the key (row, column).

Each matrix fixes the sizes of the subsets t^k_{i,j} (1 <= i <= k <= j <= N-1)
into which the type-k parameters are split; the size depends on (i, j) only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CardinalityMismatch

UPPER, LOWER = "upper", "lower"


@dataclass(frozen=True)
class PermissibleMatrix:
    kind: str
    n: tuple
    entries: tuple  # ((row, col), value) pairs, row-major

    @property
    def N(self) -> int:
        return len(self.n) + 1

    def __getitem__(self, key):
        row, col = key
        for k, v in self.entries:
            if k == key:
                return v
        # m^i_N = 0, s^j_0 = 0 and everything outside the triangle
        return 0

    def as_dict(self) -> dict:
        return dict(self.entries)


def valid_pairs(k: int, N: int) -> list:
    """Labels (i, j) of the subsets of t^k, sorted by the ``precedes`` order."""
    return [(i, j) for i in range(1, k + 1) for j in range(k, N)]


def all_pairs(N: int) -> list:
    return [(i, j) for i in range(1, N) for j in range(i, N)]


def precedes(p, pp) -> bool:
    """(i,j) < (i',j') iff i < i', or i == i' and j < j'."""
    return p[0] < pp[0] or (p[0] == pp[0] and p[1] < pp[1])


def precedes_t(p, pp) -> bool:
    """(i,j) <t (i',j') iff j < j', or j == j' and i < i'."""
    return p[1] < pp[1] or (p[1] == pp[1] and p[0] < pp[0])


def _bounded_compositions(total: int, upper: Sequence[int]) -> Iterator[tuple]:
    """Tuples x with 0 <= x_r <= upper[r] and sum(x) <= total."""
    if not upper:
        yield ()
        return
    for x in range(min(total, upper[0]) + 1):
        for rest in _bounded_compositions(total - x, upper[1:]):
            yield (x,) + rest


def _lower_bounded_compositions(total: int, lower: Sequence[int]) -> Iterator[tuple]:
    """Tuples x with x_r >= lower[r] and sum(x) == total."""
    if not lower:
        if total == 0:
            yield ()
        return
    if len(lower) == 1:
        if total >= lower[0]:
            yield (total,)
        return
    slack = total - sum(lower)
    for x in range(lower[0], lower[0] + slack + 1):
        for rest in _lower_bounded_compositions(total - x, lower[1:]):
            yield (x,) + rest


def _check_n(n) -> tuple:
    n = tuple(int(x) for x in n)
    if any(x < 0 for x in n):
        raise ValueError(f"cardinalities must be nonnegative, got {n}")
    return n


def enumerate_upper(n: Sequence[int]) -> list:
    n = _check_n(n)
    N = len(n) + 1
    out = []

    def rec(col: int, cur: dict):
        if col == N:
            entries = tuple(sorted(cur.items()))
            out.append(PermissibleMatrix(UPPER, n, entries))
            return
        prev = [cur[(r, col - 1)] for r in range(1, col)]
        for head in _bounded_compositions(n[col - 1], prev):
            nxt = dict(cur)
            for r, x in enumerate(head, start=1):
                nxt[(r, col)] = x
            nxt[(col, col)] = n[col - 1] - sum(head)
            rec(col + 1, nxt)

    rec(1, {})
    out.sort(key=lambda m: tuple(v for _, v in m.entries))
    return out


def enumerate_lower(n: Sequence[int]) -> list:
    n = _check_n(n)
    N = len(n) + 1
    out = []

    def rec(col: int, cur: dict):
        if col == N:
            entries = tuple(sorted(cur.items()))
            out.append(PermissibleMatrix(LOWER, n, entries))
            return
        floor = [cur.get((r, col - 1), 0) for r in range(col, N)]
        for column in _lower_bounded_compositions(n[col - 1], floor):
            nxt = dict(cur)
            for r, x in enumerate(column, start=col):
                nxt[(r, col)] = x
            rec(col + 1, nxt)

    rec(1, {})
    out.sort(key=lambda m: tuple(v for _, v in m.entries))
    return out


def cumulative_vectors(matrix: PermissibleMatrix) -> dict:
    """Row partial sums, keyed by j.

    Upper: M^j = m^1 + ... + m^j for j = 0..N-1 (M^0 = 0).
    Lower: S^j = s^j + ... + s^{N-1} for j = 1..N (S^N = 0).
    Vectors have components a = 1..N-1 stored at index a-1.
    """
    N = matrix.N
    zero = (0,) * (N - 1)
    if matrix.kind == UPPER:
        out = {0: zero}
        for j in range(1, N):
            out[j] = tuple(out[j - 1][a - 1] + matrix[(j, a)] for a in range(1, N))
        return out
    out = {N: zero}
    for j in range(N - 1, 0, -1):
        out[j] = tuple(out[j + 1][a - 1] + matrix[(j, a)] for a in range(1, N))
    return out


def subset_cardinalities(matrix: PermissibleMatrix) -> dict:
    """#t^k_{i,j} for every pair 1 <= i <= j <= N-1."""
    if matrix.kind == UPPER:
        return {(i, j): matrix[(i, j)] - matrix[(i, j + 1)] for i, j in all_pairs(matrix.N)}
    return {(i, j): matrix[(j, i)] - matrix[(j, i - 1)] for i, j in all_pairs(matrix.N)}


def _splits(items: tuple, sizes: Sequence[int]) -> Iterator[tuple]:
    """Ordered splits of ``items`` into consecutive labelled blocks of ``sizes``;
    each block keeps the input order of its elements."""
    if not sizes:
        if not items:
            yield ()
        return
    idx = range(len(items))
    for chosen in itertools.combinations(idx, sizes[0]):
        picked = tuple(items[i] for i in chosen)
        rest = tuple(items[i] for i in idx if i not in chosen)
        for tail in _splits(rest, sizes[1:]):
            yield (picked,) + tail


def enumerate_assignments(tbar: Sequence[Sequence], matrix) -> list:
    """All splits of every t^k into subsets t^k_{i,j} of the prescribed sizes.

    ``matrix`` is a :class:`PermissibleMatrix` or an explicit cardinality map.
    Each assignment is a dict keyed by (k, i, j).
    """
    card = subset_cardinalities(matrix) if isinstance(matrix, PermissibleMatrix) else dict(matrix)
    N = len(tbar) + 1
    per_type = []
    for k in range(1, N):
        pairs = valid_pairs(k, N)
        sizes = [card.get(p, 0) for p in pairs]
        if sum(sizes) != len(tbar[k - 1]):
            raise CardinalityMismatch(
                f"type {k}: {len(tbar[k - 1])} parameters but subsets of total size {sum(sizes)}")
        per_type.append([
            {(k,) + p: block for p, block in zip(pairs, split)}
            for split in _splits(tuple(tbar[k - 1]), sizes)
        ])
    out = []
    for combo in itertools.product(*per_type):
        merged = {}
        for part in combo:
            merged.update(part)
        out.append(merged)
    return out


def assignment_count(matrix) -> int:
    """prod_k multinomial(n_k; subset sizes at level k)."""
    card = subset_cardinalities(matrix) if isinstance(matrix, PermissibleMatrix) else dict(matrix)
    N = max((j for _, j in card), default=0) + 1
    total = 1
    for k in range(1, N):
        sizes = [card.get(p, 0) for p in valid_pairs(k, N)]
        total *= math.factorial(sum(sizes)) // math.prod(math.factorial(s) for s in sizes)
    return total


def total_terms(n: Sequence[int]) -> int:
    """Number of terms in a partition sum: sum over permissible matrices."""
    return sum(assignment_count(m) for m in enumerate_upper(n))
