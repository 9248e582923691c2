"""Binary words, conjugation-marked symbols, admissible multisets, torus steps.

A word is a tuple of bits; the canonical order on words is first by length,
then lexicographic.  A symbol is a word together with a conjugation mark, and
an admissible word is a nonempty multiset of same-length symbols in which no
word appears both marked and unmarked.  Admissible words index the basic
product vectors of the Fock layer, and almost everything downstream is keyed
by their canonical (sorted) form.

A torus step assigns a unit scalar to each word of a fixed length: a step
function into the circle, constant on the depth-n cells of Cantor space.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from . import scalars
from .errors import CapExceeded
from .scalars import EXACT, FLOAT, Scalar

Word = Tuple[int, ...]

# Hard bound on word length; every depth-increasing operation checks it.
MAX_WORD_LENGTH = 32

# Default bound on the number of multisets an enumeration may touch.
MAX_ENUMERATION = 2_000_000


def make_word(bits: Iterable[int] | str) -> Word:
    """Build a word from an iterable of bits or a string like ``"011"``."""
    if isinstance(bits, str):
        bits = (int(ch) for ch in bits)
    w = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in w):
        raise ValueError("word bits must be 0 or 1")
    if len(w) > MAX_WORD_LENGTH:
        raise CapExceeded(f"word longer than {MAX_WORD_LENGTH}")
    return w


def word_text(w: Word) -> str:
    return "".join(str(b) for b in w) if w else "e"


def word_key(w: Word) -> Tuple[int, Word]:
    """Sort key for the canonical order: length first, then lexicographic."""
    return (len(w), w)


def word_index(w: Word) -> int:
    """The rank of ``w`` among words of its own length, in lexicographic order."""
    i = 0
    for b in w:
        i = (i << 1) | b
    return i


def all_words(length: int) -> List[Word]:
    """All words of the given length, lexicographically."""
    if length < 0:
        raise ValueError("negative word length")
    if length > MAX_WORD_LENGTH:
        raise CapExceeded(f"word length above {MAX_WORD_LENGTH}")
    return [tuple(bits) for bits in itertools.product((0, 1), repeat=length)]


@dataclass(frozen=True)
class Symbol:
    """A word with an optional conjugation mark."""

    word: Word
    barred: bool = False

    @property
    def level(self) -> int:
        return len(self.word)

    def conj(self) -> "Symbol":
        return Symbol(self.word, not self.barred)

    def append(self, bit: int) -> "Symbol":
        # Appending commutes with the mark: the child of a marked symbol is
        # the marked child, so the underlying word grows either way.
        if bit not in (0, 1):
            raise ValueError("bit must be 0 or 1")
        if len(self.word) + 1 > MAX_WORD_LENGTH:
            raise CapExceeded(f"word longer than {MAX_WORD_LENGTH}")
        return Symbol(self.word + (bit,), self.barred)

    def sort_key(self) -> Tuple[bool, int, Word]:
        return (self.barred, len(self.word), self.word)

    @classmethod
    def parse(cls, text: str) -> "Symbol":
        """Parse ``"011"`` or ``"011*"`` (trailing star marks conjugation)."""
        barred = text.endswith("*")
        return cls(make_word(text[:-1] if barred else text), barred)

    def __str__(self) -> str:
        return word_text(self.word) + ("*" if self.barred else "")


def sym(text: str) -> Symbol:
    return Symbol.parse(text)


def _distinct_permutations(items: Tuple) -> Iterator[Tuple]:
    """Distinct permutations of a sorted tuple, in lexicographic order."""
    if not items:
        yield ()
        return
    seen_first = None
    for i, x in enumerate(items):
        if x == seen_first:
            continue
        seen_first = x
        for rest in _distinct_permutations(items[:i] + items[i + 1:]):
            yield (x,) + rest


@dataclass(frozen=True)
class AdmissibleWord:
    """A nonempty multiset of same-length symbols, no word marked both ways.

    Entries are stored sorted (unmarked before marked, then by word), so two
    multisets are equal exactly when the dataclasses are.  The degree is the
    number of entries counted with multiplicity; ``degrees`` splits it into
    the unmarked count p and the marked count q.
    """

    entries: Tuple[Symbol, ...]

    def __post_init__(self) -> None:
        entries = tuple(sorted(self.entries, key=Symbol.sort_key))
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("admissible word must be nonempty")
        level = entries[0].level
        if any(s.level != level for s in entries):
            raise ValueError("all symbols must have the same length")
        plain = {s.word for s in entries if not s.barred}
        marked = {s.word for s in entries if s.barred}
        clash = plain & marked
        if clash:
            raise ValueError(
                f"word {word_text(sorted(clash)[0])} appears both marked and unmarked")

    @classmethod
    def of(cls, symbols: Iterable[Symbol]) -> "AdmissibleWord":
        return cls(tuple(symbols))

    @classmethod
    def parse(cls, text: str) -> "AdmissibleWord":
        """Parse a space-separated symbol list such as ``"0 0 1*"``."""
        return cls(tuple(Symbol.parse(tok) for tok in text.split()))

    @property
    def level(self) -> int:
        return self.entries[0].level

    @property
    def degree(self) -> int:
        return len(self.entries)

    def symbol_multiplicities(self) -> Dict[Symbol, int]:
        out: Dict[Symbol, int] = {}
        for s in self.entries:
            out[s] = out.get(s, 0) + 1
        return out

    def multiplicities(self) -> Dict[Word, int]:
        """m_s: how often each word occurs, marked or not."""
        out: Dict[Word, int] = {}
        for s in self.entries:
            out[s.word] = out.get(s.word, 0) + 1
        return out

    @property
    def degrees(self) -> Tuple[int, int]:
        p = sum(1 for s in self.entries if not s.barred)
        return (p, len(self.entries) - p)

    def gram_diagonal(self) -> int:
        """Product of the multiplicity factorials; the squared norm of the
        basic vector this word indexes."""
        out = 1
        for m in self.multiplicities().values():
            out *= math.factorial(m)
        return out

    def unmarked_words(self) -> Tuple[Word, ...]:
        return tuple(s.word for s in self.entries if not s.barred)

    def marked_words(self) -> Tuple[Word, ...]:
        return tuple(s.word for s in self.entries if s.barred)

    def variants(self) -> List[Tuple[Tuple[Word, ...], Tuple[Word, ...]]]:
        """All distinct ordered arrangements (unmarked block, marked block)."""
        lefts = list(_distinct_permutations(self.unmarked_words()))
        rights = list(_distinct_permutations(self.marked_words()))
        return [(a, b) for a in lefts for b in rights]

    def variant_count(self) -> int:
        """p! q! / prod(m_s!), the number of distinct arrangements."""
        p, q = self.degrees
        denom = 1
        for m in self.multiplicities().values():
            denom *= math.factorial(m)
        return math.factorial(p) * math.factorial(q) // denom

    def append_all(self, bits: Sequence[int]) -> "AdmissibleWord":
        """Append one bit to each entry (entries taken in sorted order)."""
        if len(bits) != len(self.entries):
            raise ValueError("need one bit per entry")
        return AdmissibleWord(tuple(s.append(b) for s, b in zip(self.entries, bits)))

    def __str__(self) -> str:
        return "[" + " ".join(str(s) for s in self.entries) + "]"


def symbols_at(level: int) -> List[Symbol]:
    """All symbols of the given level, in canonical sort order."""
    words = all_words(level)
    return [Symbol(w, False) for w in words] + [Symbol(w, True) for w in words]


def enumerate_admissible(level: int, degree: int,
                         max_enumeration: int = MAX_ENUMERATION) -> Iterator[AdmissibleWord]:
    """Every admissible word of the given level and degree, canonically ordered.

    The stream follows the lexicographic order of sorted symbol multisets.
    Raises CapExceeded up front if the number of candidate multisets is above
    ``max_enumeration``.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    syms = symbols_at(level)
    candidates = math.comb(len(syms) + degree - 1, degree)
    if candidates > max_enumeration:
        raise CapExceeded(
            f"{candidates} candidate multisets exceed the cap {max_enumeration}")
    for combo in itertools.combinations_with_replacement(syms, degree):
        plain = {s.word for s in combo if not s.barred}
        marked = {s.word for s in combo if s.barred}
        if plain & marked:
            continue
        yield AdmissibleWord(combo)


@dataclass(frozen=True)
class TorusStep:
    """A unit scalar for each word of a fixed length.

    ``values`` is indexed by the lexicographic rank of the word.  Exact steps
    hold ExactComplex values with squared modulus exactly one; float steps
    hold complex values within 1e-12 of the unit circle.
    """

    level: int
    values: Tuple[Scalar, ...]
    backend: str = field(default=EXACT)

    def __post_init__(self) -> None:
        if len(self.values) != 2 ** self.level:
            raise ValueError("need one value per word of the step's length")
        if self.backend not in scalars.BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        for v in self.values:
            if self.backend == EXACT and isinstance(v, (float, complex)):
                raise ValueError("exact step built from float values")
            if not scalars.is_unit_modulus(v, self.backend):
                raise ValueError(f"step value {v} is not of unit modulus")

    def value_at(self, w: Word) -> Scalar:
        """The step's value on the cell of ``w``; ``w`` may be longer."""
        if len(w) < self.level:
            raise ValueError("word shorter than the step's length")
        return self.values[word_index(w[: self.level])]

    def __getitem__(self, w: Word) -> Scalar:
        return self.value_at(w)

    def inverse_value_at(self, w: Word) -> Scalar:
        # Unit modulus makes the inverse a conjugate.
        return scalars.conj(self.value_at(w))

    def __mul__(self, other: "TorusStep") -> "TorusStep":
        if not isinstance(other, TorusStep):
            return NotImplemented
        if other.level != self.level:
            raise ValueError("pointwise product needs equal lengths")
        if other.backend != self.backend:
            raise TypeError("cannot mix exact and float steps")
        return TorusStep(self.level,
                         tuple(a * b for a, b in zip(self.values, other.values)),
                         self.backend)

    def inverse(self) -> "TorusStep":
        return TorusStep(self.level, tuple(scalars.conj(v) for v in self.values),
                         self.backend)

    @classmethod
    def identity(cls, level: int, backend: str = EXACT) -> "TorusStep":
        return cls(level, tuple(scalars.one(backend) for _ in range(2 ** level)),
                   backend)

    @classmethod
    def from_eighth_root_indices(cls, indices: Sequence[int],
                                 backend: str = EXACT) -> "TorusStep":
        level = (len(indices) - 1).bit_length() if len(indices) > 1 else 0
        if 2 ** level != len(indices):
            raise ValueError("number of values must be a power of two")
        return cls(level, tuple(scalars.eighth_root(k, backend) for k in indices),
                   backend)

    @classmethod
    def random_eighth_roots(cls, level: int, rng: random.Random,
                            backend: str = EXACT) -> "TorusStep":
        return cls.from_eighth_root_indices(
            [rng.randrange(8) for _ in range(2 ** level)], backend)

    @classmethod
    def from_angles(cls, angles: Sequence[float], backend: str = FLOAT) -> "TorusStep":
        """A step with values exp(i*theta).

        The exact backend accepts only multiples of pi/4 (the 8th roots of
        unity); anything else cannot be represented in Q(sqrt2, i) and is
        rejected with a clear error.
        """
        level = (len(angles) - 1).bit_length() if len(angles) > 1 else 0
        if 2 ** level != len(angles):
            raise ValueError("number of values must be a power of two")
        if backend == EXACT:
            indices = []
            for theta in angles:
                k = theta / (math.pi / 4.0)
                if abs(k - round(k)) > 1e-12:
                    raise ValueError(
                        "exact backend supports only eighth-root phases "
                        "(angle must be a multiple of pi/4); "
                        "use the float backend for arbitrary angles")
                indices.append(round(k))
            return cls.from_eighth_root_indices(indices, EXACT)
        return cls(level, tuple(scalars.phase(t) for t in angles), FLOAT)

    @classmethod
    def random_phases(cls, level: int, rng: random.Random) -> "TorusStep":
        return cls.from_angles([rng.uniform(0.0, 2.0 * math.pi)
                                for _ in range(2 ** level)], FLOAT)


def cell_mass(level: int, coordinates: int = 1) -> Fraction:
    """Product measure of one depth-``level`` cell in ``coordinates`` factors."""
    return Fraction(1, 2 ** (level * coordinates))
