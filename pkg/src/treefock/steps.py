"""Symmetrized step functions on finite grids of Cantor-space cells.

A basic word maps to a multiple of the indicator of its support: the union,
over all distinct arrangements of its letters, of the product cell whose
first block lists the unmarked words and whose second block lists the marked
ones.  The image of a vector therefore lives in an l2-sum of blocks indexed
by the pair (p, q) = (unmarked count, marked count).

The normalizing constant sqrt(2^(n*l) / (p! q!)) is irrational in general, so
a StepFunction stores it as a factored nonnegative rational ``radical`` (the
function is sqrt(radical) * sum of cell values).  Sums, inner products and
equality tests merge radicals exactly whenever the square root of the ratio
lies in Q(sqrt2); identities produced by the realization itself always stay
in that range.  On the float backend the radical is folded into the values
numerically at construction and never needs merging.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple

from . import scalars
from .errors import CapExceeded
from .fock import FockVector
from .scalars import EXACT, FLOAT, Scalar
from .words import MAX_WORD_LENGTH, AdmissibleWord, TorusStep, Word


@dataclass(frozen=True)
class GridCell:
    """One product cell: ordered depth-``depth`` coordinates in two blocks."""

    depth: int
    left: Tuple[Word, ...]
    right: Tuple[Word, ...]

    def __post_init__(self) -> None:
        for w in self.left + self.right:
            if len(w) != self.depth:
                raise ValueError("cell coordinate at the wrong depth")

    @property
    def degrees(self) -> Tuple[int, int]:
        return (len(self.left), len(self.right))

    @property
    def mass(self) -> Fraction:
        return Fraction(1, 2 ** (self.depth * (len(self.left) + len(self.right))))

    def children(self):
        """The 2^(p+q) cells of depth+1 refining this one."""
        if self.depth + 1 > MAX_WORD_LENGTH:
            raise CapExceeded(f"cell depth above {MAX_WORD_LENGTH}")
        p, q = self.degrees
        for bits in itertools.product((0, 1), repeat=p + q):
            yield GridCell(self.depth + 1,
                           tuple(w + (b,) for w, b in zip(self.left, bits[:p])),
                           tuple(w + (b,) for w, b in zip(self.right, bits[p:])))

    def block_permuted(self, left_perm: Tuple[int, ...],
                       right_perm: Tuple[int, ...]) -> "GridCell":
        return GridCell(self.depth,
                        tuple(self.left[i] for i in left_perm),
                        tuple(self.right[i] for i in right_perm))


class StepFunction:
    """sqrt(radical) times a finite combination of same-shape cell indicators."""

    __slots__ = ("degrees", "depth", "radical", "values")

    def __init__(self, degrees: Tuple[int, int], depth: int, radical: Fraction,
                 values: Mapping[GridCell, Scalar]) -> None:
        radical = Fraction(radical)
        if radical < 0:
            raise ValueError("radical must be nonnegative")
        cleaned: Dict[GridCell, Scalar] = {}
        if radical != 0:
            for cell, val in values.items():
                if cell.depth != depth:
                    raise ValueError("cell at the wrong depth")
                if cell.degrees != degrees:
                    raise ValueError("cell with the wrong block shape")
                if val == 0:
                    continue
                cleaned[cell] = val
        self.degrees = degrees
        self.depth = depth
        self.radical = radical if cleaned else Fraction(0)
        self.values = cleaned

    @classmethod
    def zero(cls, degrees: Tuple[int, int], depth: int) -> "StepFunction":
        return cls(degrees, depth, Fraction(0), {})

    @property
    def is_zero(self) -> bool:
        return not self.values

    def backend(self) -> str:
        return scalars.backend_of_values(self.values.values())

    def scaled(self, c: Scalar) -> "StepFunction":
        return StepFunction(self.degrees, self.depth, self.radical,
                            {cell: c * v for cell, v in self.values.items()})

    def _aligned_values(self, other: "StepFunction") -> Dict[GridCell, Scalar]:
        """Other's values rescaled onto self's radical."""
        if self.radical == other.radical:
            return dict(other.values)
        ratio = other.radical / self.radical
        root = scalars.sqrt_in_tower(ratio)
        if root is None:
            if other.backend() == FLOAT or self.backend() == FLOAT:
                factor: Scalar = math.sqrt(float(ratio))
            else:
                raise ValueError(
                    f"cannot merge radicals {self.radical} and {other.radical} exactly")
        else:
            factor = root
        return {cell: factor * v for cell, v in other.values.items()}

    def __add__(self, other: "StepFunction") -> "StepFunction":
        if not isinstance(other, StepFunction):
            return NotImplemented
        if other.degrees != self.degrees:
            raise ValueError("cannot add step functions of different block shapes")
        if other.depth != self.depth:
            raise ValueError("cannot add step functions at different depths")
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        merged = dict(self.values)
        for cell, v in self._aligned_values(other).items():
            merged[cell] = merged.get(cell, 0) + v
        return StepFunction(self.degrees, self.depth, self.radical, merged)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self + other.scaled(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        if self.degrees != other.degrees or self.depth != other.depth:
            return False
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        ratio = other.radical / self.radical
        root = scalars.sqrt_in_tower(ratio)
        if root is None:
            # Equal functions with tower-valued cell coefficients cannot
            # differ by an irrational factor outside the tower.
            return False
        theirs = {cell: root * v for cell, v in other.values.items()}
        return self.values == theirs

    __hash__ = None  # mutable-by-convention container

    def inner(self, other: "StepFunction") -> Scalar:
        """Integral of self * conj(other) over the product grid."""
        if self.degrees != other.degrees:
            raise ValueError("inner product needs equal block shapes")
        if self.depth != other.depth:
            raise ValueError("inner product needs equal depths")
        if self.is_zero or other.is_zero:
            return 0
        acc: Scalar = 0
        small, big = ((self.values, other.values)
                      if len(self.values) <= len(other.values)
                      else (other.values, self.values))
        for cell, v in small.items():
            w = big.get(cell)
            if w is None:
                continue
            mine, theirs = (v, w) if small is self.values else (w, v)
            acc = acc + mine * scalars.conj(theirs)
        if acc == 0:
            return 0
        prod = self.radical * other.radical
        if scalars.backend_of(acc) == FLOAT:
            factor: Scalar = math.sqrt(float(prod))
        else:
            root = scalars.sqrt_in_tower(prod)
            if root is None:
                raise ValueError(
                    f"inner product radical sqrt({prod}) falls outside Q(sqrt2)")
            factor = root.as_fraction() if root.is_rational else root
        p, q = self.degrees
        mass = Fraction(1, 2 ** (self.depth * (p + q)))
        return factor * mass * acc

    def norm2(self) -> Scalar:
        return self.inner(self)

    def refine(self) -> "StepFunction":
        """The same function written on the grid one level deeper."""
        out: Dict[GridCell, Scalar] = {}
        for cell, v in self.values.items():
            for child in cell.children():
                out[child] = v
        return StepFunction(self.degrees, self.depth + 1, self.radical, out)

    def act(self, g: TorusStep) -> "StepFunction":
        """Multiply by the step's phase: values on the left block,
        inverse values on the right block."""
        if g.level > self.depth:
            raise ValueError("step is finer than the function's grid")
        out: Dict[GridCell, Scalar] = {}
        for cell, v in self.values.items():
            ph: Scalar = 1
            for w in cell.left:
                ph = ph * g.value_at(w)
            for w in cell.right:
                ph = ph * g.inverse_value_at(w)
            out[cell] = ph * v
        return StepFunction(self.degrees, self.depth, self.radical, out)

    def is_block_symmetric(self) -> bool:
        """Invariance of the values under permuting each block separately."""
        p, q = self.degrees
        for cell, v in self.values.items():
            for lp in itertools.permutations(range(p)):
                for rp in itertools.permutations(range(q)):
                    if self.values.get(cell.block_permuted(lp, rp)) != v:
                        return False
        return True

    def to_json_dict(self) -> dict:
        cells = sorted(self.values.items(),
                       key=lambda kv: (kv[0].left, kv[0].right))
        return {
            "degrees": list(self.degrees),
            "depth": self.depth,
            "radical": str(self.radical),
            "cells": [{
                "left": ["".join(map(str, w)) for w in cell.left],
                "right": ["".join(map(str, w)) for w in cell.right],
                "value": scalars.to_jsonable(v),
            } for cell, v in cells],
        }

    def __repr__(self) -> str:
        return (f"StepFunction(degrees={self.degrees}, depth={self.depth}, "
                f"radical={self.radical}, cells={len(self.values)})")


class StepSum:
    """An l2-sum element: one StepFunction per block shape (p, q)."""

    __slots__ = ("components",)

    def __init__(self, components: Mapping[Tuple[int, int], StepFunction]) -> None:
        cleaned: Dict[Tuple[int, int], StepFunction] = {}
        for key, f in components.items():
            if f.degrees != key:
                raise ValueError("component stored under the wrong block shape")
            if not f.is_zero:
                cleaned[key] = f
        self.components = cleaned

    @classmethod
    def zero(cls) -> "StepSum":
        return cls({})

    @property
    def is_zero(self) -> bool:
        return not self.components

    def backend(self) -> str:
        for f in self.components.values():
            b = f.backend()
            if b == FLOAT:
                return FLOAT
        return EXACT

    @staticmethod
    def _align(a: StepFunction, b: StepFunction) -> Tuple[StepFunction, StepFunction]:
        while a.depth < b.depth:
            a = a.refine()
        while b.depth < a.depth:
            b = b.refine()
        return a, b

    def __add__(self, other: "StepSum") -> "StepSum":
        if not isinstance(other, StepSum):
            return NotImplemented
        out = dict(self.components)
        for key, f in other.components.items():
            if key in out:
                a, b = self._align(out[key], f)
                out[key] = a + b
            else:
                out[key] = f
        return StepSum(out)

    def __sub__(self, other: "StepSum") -> "StepSum":
        return self + other.scaled(-1)

    def scaled(self, c: Scalar) -> "StepSum":
        return StepSum({k: f.scaled(c) for k, f in self.components.items()})

    def __rmul__(self, c: Scalar) -> "StepSum":
        return self.scaled(c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepSum):
            return NotImplemented
        if set(self.components) != set(other.components):
            return False
        for key, f in self.components.items():
            a, b = self._align(f, other.components[key])
            if a != b:
                return False
        return True

    __hash__ = None

    def inner(self, other: "StepSum") -> Scalar:
        acc: Scalar = 0
        for key, f in self.components.items():
            g = other.components.get(key)
            if g is None:
                continue
            a, b = self._align(f, g)
            acc = acc + a.inner(b)
        return acc

    def norm2(self) -> Scalar:
        return self.inner(self)

    def refine(self) -> "StepSum":
        return StepSum({k: f.refine() for k, f in self.components.items()})

    def max_depth(self) -> int:
        return max((f.depth for f in self.components.values()), default=0)

    def act(self, g: TorusStep) -> "StepSum":
        return StepSum({k: f.act(g) for k, f in self.components.items()})

    def to_json_dict(self) -> dict:
        return {"components": [self.components[k].to_json_dict()
                               for k in sorted(self.components)]}

    def __repr__(self) -> str:
        return f"StepSum({sorted(self.components)})"


def support_cells(word: AdmissibleWord) -> List[GridCell]:
    """The distinct cells covering the word's support, one per arrangement."""
    return [GridCell(word.level, left, right) for left, right in word.variants()]


def support_measure(word: AdmissibleWord) -> Fraction:
    """Product measure of the support, computed from the actual cell count."""
    cells = support_cells(word)
    return len(cells) * cells[0].mass


def from_fock(v: FockVector) -> StepSum:
    """Realize a Fock vector as a sum of symmetrized step functions.

    A basic word maps to sqrt(2^(n*l)/(p! q!)) times prod(m_s!) on each of
    its support cells; words of equal block shape share the radical, so the
    extension is linear with exact coefficients.
    """
    backend = v.backend()
    n = v.level
    buckets: Dict[Tuple[int, int], Dict[GridCell, Scalar]] = {}
    for word, coeff in v.terms.items():
        key = word.degrees
        val = coeff * word.gram_diagonal()
        bucket = buckets.setdefault(key, {})
        for cell in support_cells(word):
            bucket[cell] = bucket.get(cell, 0) + val
    components: Dict[Tuple[int, int], StepFunction] = {}
    for (p, q), values in buckets.items():
        radical = Fraction(2 ** (n * (p + q)), math.factorial(p) * math.factorial(q))
        if backend == FLOAT:
            root = math.sqrt(float(radical))
            values = {cell: root * val for cell, val in values.items()}
            radical = Fraction(1)
        components[(p, q)] = StepFunction((p, q), n, radical, values)
    return StepSum(components)


def act(g: TorusStep, f: StepSum) -> StepSum:
    return f.act(g)


def refine(f: StepSum) -> StepSum:
    return f.refine()
