"""Formal sums of ordered products of monodromy entries.

A letter is a tuple ``(i, j, z)`` standing for T_{ij}(z) (1-based indices);
a word is a tuple of letters read left to right as an operator product.
:class:`WordSum` maps words to scalar coefficients and carries the rank N
and the deformation parameter q of the algebra its letters live in.

The only rewrite rule used for canonical forms is that entries with equal
matrix indices commute: maximal runs of adjacent letters with the same
(i, j) are sorted by their spectral parameter.
"""

from __future__ import annotations

from . import field
from .errors import DimensionMismatch, ZeroParameter


def param_key(z):
    if isinstance(z, complex):
        return (z.real, z.imag)
    return (z, 0)


def canonical_word(word: tuple) -> tuple:
    out = []
    run: list = []
    for letter in word:
        if run and letter[:2] != run[-1][:2]:
            out.extend(sorted(run, key=lambda x: param_key(x[2])))
            run = []
        run.append(tuple(letter))
    out.extend(sorted(run, key=lambda x: param_key(x[2])))
    return tuple(out)


class WordSum:
    """Weighted sum of words; ``tag`` records where a pre-Bethe vector came from."""

    def __init__(self, N: int, q, terms=None, tag: str | None = None):
        self.N = int(N)
        self.q = q
        self.tag = tag
        # number of summands the sum was built from, before merging equal words
        self.source_terms: int | None = None
        self.terms: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for word, coeff in items:
                self.add_term(word, coeff)

    @classmethod
    def word(cls, N: int, q, letters, coeff=None) -> "WordSum":
        if coeff is None:
            coeff = field.parse_scalar(1, field.backend_of(q))
        return cls(N, q, [(tuple(tuple(x) for x in letters), coeff)])

    def add_term(self, word, coeff) -> None:
        word = tuple(tuple(x) for x in word)
        for i, j, _ in word:
            if not (1 <= i <= self.N and 1 <= j <= self.N):
                raise IndexError(f"letter T_{i}{j} outside rank {self.N}")
        if word in self.terms:
            self.terms[word] = self.terms[word] + coeff
        else:
            self.terms[word] = coeff

    def items(self):
        return self.terms.items()

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def _compatible(self, other: "WordSum") -> None:
        if self.N != other.N:
            raise DimensionMismatch(f"rank {self.N} vs rank {other.N}")
        if self.q != other.q:
            raise ValueError(f"q tags differ: {self.q} vs {other.q}")

    def copy(self) -> "WordSum":
        return WordSum(self.N, self.q, dict(self.terms), self.tag)

    def __add__(self, other: "WordSum") -> "WordSum":
        self._compatible(other)
        out = self.copy()
        out.tag = None
        for w, c in other.items():
            out.add_term(w, c)
        return out

    def __neg__(self) -> "WordSum":
        return WordSum(self.N, self.q, {w: -c for w, c in self.items()})

    def __sub__(self, other: "WordSum") -> "WordSum":
        return self + (-other)

    def scale(self, c) -> "WordSum":
        return WordSum(self.N, self.q, {w: c * x for w, x in self.items()}, self.tag)

    def __mul__(self, other):
        if isinstance(other, WordSum):
            self._compatible(other)
            out = WordSum(self.N, self.q)
            for w1, c1 in self.items():
                for w2, c2 in other.items():
                    out.add_term(w1 + w2, c1 * c2)
            return out
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WordSum):
            return NotImplemented
        return self.N == other.N and self.q == other.q and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"WordSum(N={self.N}, q={self.q}, terms={len(self.terms)}, tag={self.tag!r})"


def canonicalize(wsum: WordSum) -> WordSum:
    """Sort equal-index runs, merge identical words, drop zero coefficients."""
    merged: dict = {}
    for w, c in wsum.items():
        cw = canonical_word(w)
        merged[cw] = merged[cw] + c if cw in merged else c
    out = WordSum(wsum.N, wsum.q, tag=wsum.tag)
    out.source_terms = wsum.source_terms
    for w in sorted(merged, key=lambda w: [(a, b, param_key(z)) for a, b, z in w]):
        if merged[w] != 0:
            out.terms[w] = merged[w]
    return out


def apply_phi(wsum: WordSum) -> WordSum:
    """The isomorphism T(u) -> U T~^t(u) U^{-1}, entrywise
    T_{ij}(z) -> T~_{N+1-j, N+1-i}(z).

    Products keep their order and numeric coefficients are unchanged (the
    map is linear); the image lives in the algebra with parameter 1/q.
    """
    N = wsum.N
    out = WordSum(N, 1 / wsum.q)
    for w, c in wsum.items():
        out.add_term(tuple((N + 1 - j, N + 1 - i, z) for i, j, z in w), c)
    return out


def apply_phi_inverse(wsum: WordSum) -> WordSum:
    # the index map is an involution; only the q tag goes back
    return apply_phi(wsum)


def apply_psi(wsum: WordSum) -> WordSum:
    """The anti-isomorphism T(u) -> T~^t(1/u): T_{ij}(z) -> T~_{ji}(1/z),
    reversing every product.  Coefficients are unchanged."""
    out = WordSum(wsum.N, 1 / wsum.q)
    for w, c in wsum.items():
        letters = []
        for i, j, z in reversed(w):
            if z == 0:
                raise ZeroParameter("psi needs nonzero spectral parameters")
            letters.append((j, i, 1 / z))
        out.add_term(tuple(letters), c)
    return out


def sums_equal(a: WordSum, b: WordSum, model=None, atol: float = 1e-10) -> bool:
    """Equality of two sums as operators on ``model`` (a :class:`ChainModel`).

    Identical canonical forms short-circuit to True; otherwise both sums are
    evaluated as dense operators and compared (exactly on the exact backend).
    """
    a._compatible(b)
    ca, cb = canonicalize(a), canonicalize(b)
    if ca == cb:
        return True
    if model is None:
        return False
    if model.N != a.N or model.q != a.q:
        raise ValueError("model rank/q does not match the sums")
    from .chain import FULL_OPERATOR, evaluate_word

    diff = evaluate_word(model, ca - cb, FULL_OPERATOR)
    worst = field.max_abs(diff)
    if model.backend == field.EXACT:
        return worst == 0
    scale = max(field.max_abs(evaluate_word(model, ca, FULL_OPERATOR)), 1.0)
    return bool(worst <= atol * scale)


def max_coefficient(wsum: WordSum):
    vals = [abs(c) for c in wsum.terms.values()]
    return max(vals) if vals else 0

