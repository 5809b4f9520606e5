"""Exact shuffle algebra of words in the two logarithmic 1-forms.

A word is a plain string over the alphabet {"0", "1"}; the letter "0"
stands for the form dz/z and "1" for dz/(1-z).  The empty string is the
empty word, so serialization of a word is the identity map and the
canonical ordering is shortlex (length, then "0" < "1").

Coefficients are exact rationals throughout: the shuffle and
deconcatenation identities proved here serve as oracles for the
floating-point integral routines and must hold on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

ALPHABET = ("0", "1")

Word = str


def check_word(w: str) -> str:
    if any(ch not in ALPHABET for ch in w):
        raise ValueError(f"word {w!r} uses letters outside {{'0','1'}}")
    return w


def word_basis(r: int) -> list[Word]:
    """All words of length <= r in shortlex order; there are 2**(r+1) - 1."""
    if r < 0:
        raise ValueError("r must be >= 0")
    out: list[Word] = [""]
    layer = [""]
    for _ in range(r):
        layer = [w + ch for w in layer for ch in ALPHABET]
        out.extend(sorted(layer))
    return out


@lru_cache(maxsize=None)
def shuffle_words(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    """Riffle shuffles of two words with multiplicities."""
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    counts: dict[Word, int] = {}
    for w, c in shuffle_words(u[1:], v):
        counts[u[0] + w] = counts.get(u[0] + w, 0) + c
    for w, c in shuffle_words(u, v[1:]):
        counts[v[0] + w] = counts.get(v[0] + w, 0) + c
    return tuple(sorted(counts.items()))


@dataclass(frozen=True)
class ShuffleElement:
    """Finitely supported rational combination of words (degree-0 bar algebra)."""

    coeffs: dict[Word, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {check_word(w): Fraction(c) for w, c in self.coeffs.items() if c != 0}
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_word(cls, w: Word, c=1) -> "ShuffleElement":
        return cls({w: Fraction(c)})

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.coeffs), default=0)

    def __add__(self, other: "ShuffleElement") -> "ShuffleElement":
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, Fraction(0)) + c
        return ShuffleElement(out)

    def __sub__(self, other: "ShuffleElement") -> "ShuffleElement":
        return self + other.scale(-1)

    def scale(self, c) -> "ShuffleElement":
        c = Fraction(c)
        return ShuffleElement({w: c * x for w, x in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ShuffleElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def to_json(self) -> dict[str, str]:
        return {w: str(c) for w, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, data: dict[str, str]) -> "ShuffleElement":
        return cls({w: Fraction(c) for w, c in data.items()})


def shuffle_product(a: ShuffleElement, b: ShuffleElement) -> ShuffleElement:
    """Bilinear extension of the riffle shuffle; degrees add."""
    out: dict[Word, Fraction] = {}
    for u, cu in a.coeffs.items():
        for v, cv in b.coeffs.items():
            for w, m in shuffle_words(u, v):
                out[w] = out.get(w, Fraction(0)) + cu * cv * m
    return ShuffleElement(out)


def deconcat_coproduct(w: Word) -> list[tuple[Word, Word]]:
    """All len(w)+1 splittings (prefix, suffix) of w, in order."""
    check_word(w)
    return [(w[:k], w[k:]) for k in range(len(w) + 1)]


# --- symbolic bar differential ----------------------------------------------

FormalLetters = dict[str, Fraction]  # symbol name -> coefficient
BarWord = tuple[str, ...]  # word over the extended symbol alphabet


def _clean(terms: FormalLetters) -> FormalLetters:
    return {k: Fraction(v) for k, v in terms.items() if v != 0}


@dataclass
class SymbolicFormTable:
    """Symbolic exterior derivatives and wedges of the letters.

    ``degree`` assigns each letter its form degree (default 1),
    ``d`` its exterior derivative as a formal sum of symbols, and
    ``wedge`` the product of an ordered pair of letters.  Wedges are
    completed by graded antisymmetry; on the default table for the
    thrice-punctured line every derivative and wedge vanishes, because
    both forms are closed and products of 1-forms vanish on a curve.
    """

    degree: dict[str, int] = field(default_factory=lambda: {"0": 1, "1": 1})
    d: dict[str, FormalLetters] = field(default_factory=dict)
    wedge: dict[tuple[str, str], FormalLetters] = field(default_factory=dict)

    def __post_init__(self):
        self.d = {k: _clean(v) for k, v in self.d.items()}
        completed: dict[tuple[str, str], FormalLetters] = {}
        for (a, b), terms in self.wedge.items():
            terms = _clean(terms)
            completed[(a, b)] = terms
            sign = (-1) ** (self.letter_degree(a) * self.letter_degree(b))
            flipped = {k: sign * v for k, v in terms.items()}
            if (b, a) in self.wedge:
                if _clean(self.wedge[(b, a)]) != flipped:
                    raise ValueError(f"wedge table not graded-antisymmetric at ({a},{b})")
            completed.setdefault((b, a), flipped)
        self.wedge = completed

    def letter_degree(self, letter: str) -> int:
        if letter not in self.degree:
            raise KeyError(f"letter {letter!r} missing from form table")
        return self.degree[letter]

    def derivative(self, letter: str) -> FormalLetters:
        self.letter_degree(letter)
        return self.d.get(letter, {})

    def wedge_of(self, a: str, b: str) -> FormalLetters:
        self.letter_degree(a)
        self.letter_degree(b)
        return self.wedge.get((a, b), {})

    @classmethod
    def default(cls) -> "SymbolicFormTable":
        return cls()


def bar_differential(w, table: SymbolicFormTable | None = None) -> dict[BarWord, Fraction]:
    """Symbolic differential of the iterated integral of the word ``w``.

    Two sums: one term per letter with the letter replaced by its
    derivative, one term per adjacent pair replaced by its wedge, with
    signs (-1)**(nu[j-1]+1) and (-1)**(nu[j]+1) where nu[j] accumulates
    (degree - 1) over the first j letters.  Degree-1 letters make every
    nu vanish, so on the default table the result is identically zero:
    this is the symbolic form of homotopy invariance on a curve.

    ``w`` may be a plain word string or a tuple of symbol names.
    """
    if table is None:
        table = SymbolicFormTable.default()
    letters: BarWord = tuple(w) if not isinstance(w, tuple) else w
    degs = [table.letter_degree(ch) for ch in letters]
    r = len(letters)
    nu = [0] * (r + 1)
    for j in range(1, r + 1):
        nu[j] = nu[j - 1] + (degs[j - 1] - 1)

    out: dict[BarWord, Fraction] = {}

    def accumulate(word: BarWord, coeff: Fraction):
        if coeff != 0:
            out[word] = out.get(word, Fraction(0)) + coeff

    for j in range(1, r + 1):
        sign = Fraction((-1) ** (nu[j - 1] + 1))
        for sym, c in table.derivative(letters[j - 1]).items():
            accumulate(letters[: j - 1] + (sym,) + letters[j:], sign * c)
    for j in range(1, r):
        sign = Fraction((-1) ** (nu[j] + 1))
        for sym, c in table.wedge_of(letters[j - 1], letters[j]).items():
            accumulate(letters[: j - 1] + (sym,) + letters[j + 1:], sign * c)

    return {word: c for word, c in out.items() if c != 0}
