"""The modified symmetric Fock space over same-length binary words.

Vectors are finite linear combinations of basic product vectors indexed by
admissible words, all at one level n.  The inner product is diagonal in that
basis: the squared norm of a basic vector is the product of the multiplicity
factorials of its word.  Three operations act on vectors,

* ``embed``    -- the isometry into level n+1 induced by splitting each basic
                  letter into the normalized sum of its two children,
* ``act``      -- the unitary action of a torus step, which multiplies each
                  basic vector by a phase (values for unmarked letters,
                  conjugate values for marked ones),
* ``inner``    -- the sesquilinear pairing, linear in the first argument.

``embed`` expands each distinct letter's multiplicity through a binomial
split, which keeps the image sparse; ``embed_by_enumeration`` is the direct
sum over all 2^degree child assignments and is retained as an oracle.
"""

from __future__ import annotations

import itertools
import math
from typing import Dict, Mapping

from . import scalars
from .errors import CapExceeded
from .scalars import EXACT, Scalar
from .words import MAX_WORD_LENGTH, AdmissibleWord, TorusStep

# Degree bound enforced at construction; desk-scale checks stay below it.
DEFAULT_MAX_DEGREE = 5


class FockVector:
    """A sparse vector: admissible word -> coefficient, all words at one level."""

    __slots__ = ("level", "terms")

    def __init__(self, level: int, terms: Mapping[AdmissibleWord, Scalar],
                 max_degree: int = DEFAULT_MAX_DEGREE) -> None:
        cleaned: Dict[AdmissibleWord, Scalar] = {}
        for w, c in terms.items():
            if w.level != level:
                raise ValueError(f"word {w} is not at level {level}")
            if w.degree > max_degree:
                raise CapExceeded(f"degree {w.degree} above the cap {max_degree}")
            if c == 0:
                continue
            cleaned[w] = c
        self.level = level
        self.terms = cleaned

    def __getitem__(self, w: AdmissibleWord) -> Scalar:
        return self.terms.get(w, 0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def backend(self) -> str:
        return scalars.backend_of_values(self.terms.values())

    def __add__(self, other: "FockVector") -> "FockVector":
        if not isinstance(other, FockVector):
            return NotImplemented
        if other.level != self.level:
            raise ValueError("cannot add vectors at different levels")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return FockVector(self.level, out, max_degree=MAX_WORD_LENGTH)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-1) * other

    def __rmul__(self, scalar: Scalar) -> "FockVector":
        return FockVector(self.level,
                          {w: scalar * c for w, c in self.terms.items()},
                          max_degree=MAX_WORD_LENGTH)

    def __neg__(self) -> "FockVector":
        return (-1) * self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.level == other.level and self.terms == other.terms

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{w}" for w, c in sorted(
            self.terms.items(), key=lambda kv: tuple(s.sort_key() for s in kv[0].entries)))
        return f"FockVector(level={self.level}, {body or '0'})"


def basic(word: AdmissibleWord, backend: str = EXACT) -> FockVector:
    """The basic product vector of an admissible word, coefficient one."""
    return FockVector(word.level, {word: scalars.one(backend)})


def inner(u: FockVector, v: FockVector) -> Scalar:
    """<u, v>, linear in u and conjugate-linear in v."""
    if u.level != v.level:
        raise ValueError("inner product needs equal levels")
    small, big = (u.terms, v.terms) if len(u.terms) <= len(v.terms) else (v.terms, u.terms)
    acc: Scalar = 0
    for w, c in small.items():
        d = big.get(w)
        if d is None:
            continue
        cu, cv = (c, d) if small is u.terms else (d, c)
        acc = acc + cu * scalars.conj(cv) * w.gram_diagonal()
    return acc


def norm2(v: FockVector) -> Scalar:
    return inner(v, v)


def embed(v: FockVector, max_level: int = MAX_WORD_LENGTH) -> FockVector:
    """The level n -> n+1 isometry.

    Each letter splits into (child0 + child1)/sqrt2; on a basic word the
    product expands letter by letter.  Grouping the 2^degree assignments by
    how many copies of each distinct letter go to child 0 gives binomial
    coefficients, so the image of a word with letter multiplicities m has
    prod(m_s + 1) terms rather than 2^degree.
    """
    if v.level + 1 > max_level:
        raise CapExceeded(f"embedding beyond level {max_level}")
    backend = v.backend()
    out: Dict[AdmissibleWord, Scalar] = {}
    for word, coeff in v.terms.items():
        mults = word.symbol_multiplicities()
        syms = list(mults)
        scale = coeff * scalars.inv_sqrt2_pow(word.degree, backend)
        for split in itertools.product(*(range(m + 1) for m in (mults[s] for s in syms))):
            weight = 1
            child_entries = []
            for s, k in zip(syms, split):
                m = mults[s]
                weight *= math.comb(m, k)
                child_entries.extend([s.append(0)] * k)
                child_entries.extend([s.append(1)] * (m - k))
            child = AdmissibleWord(tuple(child_entries))
            out[child] = out.get(child, 0) + weight * scale
    return FockVector(v.level + 1, out)


def embed_by_enumeration(v: FockVector, max_level: int = MAX_WORD_LENGTH) -> FockVector:
    """Oracle form of ``embed``: the raw sum over all 2^degree assignments."""
    if v.level + 1 > max_level:
        raise CapExceeded(f"embedding beyond level {max_level}")
    backend = v.backend()
    out: Dict[AdmissibleWord, Scalar] = {}
    for word, coeff in v.terms.items():
        scale = coeff * scalars.inv_sqrt2_pow(word.degree, backend)
        for bits in itertools.product((0, 1), repeat=word.degree):
            child = word.append_all(bits)
            out[child] = out.get(child, 0) + scale
    return FockVector(v.level + 1, out)


def phase_of(g: TorusStep, word: AdmissibleWord) -> Scalar:
    """The multiplier the step g gives the basic vector of ``word``.

    Unmarked letters contribute the step's value on their cell, marked
    letters the inverse value; ``g`` may be coarser than the word's level.
    """
    if g.level > word.level:
        raise ValueError("step is finer than the word's level")
    out: Scalar = 1
    for s, m in word.symbol_multiplicities().items():
        val = g.inverse_value_at(s.word) if s.barred else g.value_at(s.word)
        out = out * val ** m
    return out


def act(g: TorusStep, v: FockVector) -> FockVector:
    """The unitary action of a torus step on a vector at level >= g.level."""
    if g.level > v.level:
        raise ValueError("step is finer than the vector's level")
    return FockVector(v.level,
                      {w: phase_of(g, w) * c for w, c in v.terms.items()},
                      max_degree=MAX_WORD_LENGTH)
