"""Alphabets, words, free reduction, letter statistics and letter maps.

A letter over an alphabet with symbols ``s_0, ..., s_{n-1}`` is a nonzero
integer: ``+(i+1)`` is the generator ``s_i`` and ``-(i+1)`` its inverse.
Words are immutable tuples of letters tied to their alphabet, so relator
matching is exact tuple comparison.

Text syntax (used by every file format and the CLI): words are
whitespace-separated tokens, ``name`` for a positive letter and
``name^-1`` for its inverse; the lone token ``1`` is the empty word.
As an input convenience, an uppercased generator name denotes the
inverse provided the uppercased spelling is not itself a generator
(``T`` is a real generator in some presentations here and never means
``t^-1`` there).
"""

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import AlphabetMismatchError, WordSyntaxError


class Alphabet:
    """An ordered list of distinct generator names."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str]):
        syms = tuple(symbols)
        if len(set(syms)) != len(syms):
            raise WordSyntaxError(f"duplicate symbols in alphabet: {syms}")
        self.symbols = syms
        self._index = {s: i for i, s in enumerate(syms)}

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"Alphabet({' '.join(self.symbols)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AlphabetMismatchError(f"unknown symbol {name!r} for {self!r}") from None

    def letter(self, name: str, sign: int = 1) -> int:
        """Signed-integer encoding of ``name`` or its inverse."""
        if sign not in (1, -1):
            raise WordSyntaxError(f"sign must be +1 or -1, got {sign}")
        return sign * (self.index(name) + 1)

    def spell(self, letter: int) -> str:
        name = self.symbols[abs(letter) - 1]
        return name if letter > 0 else name + "^-1"


def invert(letters: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(letters))


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    """Freely reduce a letter sequence with a stack."""
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A word in the free monoid over ``alphabet``; not reduced unless stated."""

    alphabet: Alphabet
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.alphabet)
        for x in self.letters:
            if x == 0 or abs(x) > n:
                raise AlphabetMismatchError(f"letter {x} out of range for {self.alphabet!r}")

    @staticmethod
    def parse(alphabet: Alphabet, text: str) -> "Word":
        """Parse the whitespace-separated token syntax."""
        tokens = text.split()
        if tokens == ["1"] or not tokens:
            return Word(alphabet)
        letters = []
        for tok in tokens:
            name, sign = tok, 1
            if tok.endswith("^-1"):
                name, sign = tok[:-3], -1
            if name not in alphabet and sign == 1:
                lowered = name.lower()
                if name != lowered and lowered in alphabet:
                    name, sign = lowered, -1
            if name not in alphabet:
                raise WordSyntaxError(f"cannot read token {tok!r} over {alphabet!r}")
            letters.append(alphabet.letter(name, sign))
        return Word(alphabet, tuple(letters))

    def text(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(self.alphabet.spell(x) for x in self.letters)

    def __repr__(self) -> str:
        return f"Word({self.text()})"

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise AlphabetMismatchError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.alphabet, invert(self.letters))

    def __pow__(self, n: int) -> "Word":
        base = self.letters if n >= 0 else invert(self.letters)
        return Word(self.alphabet, base * abs(n))

    def is_reduced(self) -> bool:
        return all(a != -b for a, b in zip(self.letters, self.letters[1:]))


def free_reduce(w: Word) -> Word:
    """The unique freely reduced word equal to ``w`` in the free group."""
    return Word(w.alphabet, reduce_letters(w.letters))


def exponent_sum(w: Word, symbol: str) -> int:
    """h_x(w): occurrences of x minus occurrences of x^-1."""
    target = w.alphabet.index(symbol) + 1
    return sum(1 if x == target else -1 if x == -target else 0 for x in w.letters)


def letter_count(w: Word, symbol: str) -> int:
    """l_x(w): total occurrences of x and x^-1."""
    target = w.alphabet.index(symbol) + 1
    return sum(1 for x in w.letters if abs(x) == target)


def cyclic_conjugates(w: Word) -> frozenset[tuple[int, ...]]:
    """All rotations of ``w`` and of its inverse, as letter tuples."""
    seen: set[tuple[int, ...]] = set()
    for base in (w.letters, invert(w.letters)):
        if not base:
            seen.add(())
            continue
        for i in range(len(base)):
            seen.add(base[i:] + base[:i])
    return frozenset(seen)


ERASE = 0


@dataclass(frozen=True)
class LetterMap:
    """A map from source symbols to a target letter, its inverse, or erasure.

    ``images[i]`` is the signed target letter for source symbol ``i``, or
    ``ERASE`` (0).  When built as a retraction the source and target
    presentations ride along so diagram projection can check and use them.
    """

    source: Alphabet
    target: Alphabet
    images: tuple[int, ...]
    source_presentation: object = field(default=None, compare=False)
    target_presentation: object = field(default=None, compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.images) != len(self.source):
            raise AlphabetMismatchError("image assignment must be total on the source alphabet")
        n = len(self.target)
        for x in self.images:
            if abs(x) > n:
                raise AlphabetMismatchError(f"image letter {x} out of range for target")

    @staticmethod
    def from_dict(source: Alphabet, target: Alphabet, images: dict[str, str | None],
                  **extra) -> "LetterMap":
        """Build from ``{source_name: target_token | None}`` (None erases).

        Target tokens use the word syntax (``name`` or ``name^-1``).
        Unlisted source symbols must not occur; listing is required.
        """
        out = []
        for name in source.symbols:
            if name not in images:
                raise AlphabetMismatchError(f"no image given for {name!r}")
            tok = images[name]
            if tok is None:
                out.append(ERASE)
            else:
                wd = Word.parse(target, tok)
                if len(wd) != 1:
                    raise WordSyntaxError(f"image of {name!r} must be a single letter or None")
                out.append(wd.letters[0])
        return LetterMap(source, target, tuple(out), **extra)

    def image_of(self, letter: int) -> int:
        """Signed image of a signed source letter (0 when erased)."""
        img = self.images[abs(letter) - 1]
        return img if letter > 0 else -img

    @staticmethod
    def identity(alphabet: Alphabet) -> "LetterMap":
        return LetterMap(alphabet, alphabet, tuple(range(1, len(alphabet) + 1)),
                         name="identity")


def map_word(w: Word, theta: LetterMap) -> Word:
    """Letter-by-letter image of ``w``; erased letters drop out, no reduction."""
    if w.alphabet != theta.source:
        raise AlphabetMismatchError("word is not over the letter map's source alphabet")
    letters = []
    for x in w.letters:
        img = theta.image_of(x)
        if img != ERASE:
            letters.append(img)
    return Word(theta.target, tuple(letters))
