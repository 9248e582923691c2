"""Polynomials in complex Gaussian tree coordinates and their moments.

The coordinate family assigns an independent standard complex Gaussian to
each word of a fixed length; a word's variable is the normalized sum of the
variables on its depth-K descendants (``refine`` rewrites a polynomial in
terms of any deeper level).  Moments of same-level polynomials follow the
diagonal rule

    E[ z^a conj(z)^b ] = a! if a == b else 0,   independently per variable,

and ``moment_by_pairings`` recomputes monomial moments by brute-force Wick
matching as an independent oracle.  A Fock vector realizes as the product of
its letters' variables (marked letters conjugated); a torus step acts by
composition, multiplying each variable by the step's value on its cell.

``expansion_remainder`` and the rate/expansion reports quantify how fast the
diagonal part of a power's depth-l expansion decays: the mean-centered
squared norm is (2m)! - (m!)^2 over 2^(l(2m-1)) on the diagonal and the full
norm is (k+m)!/2^(l(k+m-1)) off it.  The mean itself is the exact centering;
it coincides with sqrt(m!) only for m <= 1, and the report records whether
that shortcut would have agreed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from . import scalars
from .errors import CapExceeded
from .fock import FockVector
from .scalars import EXACT, Scalar
from .words import MAX_WORD_LENGTH, AdmissibleWord, TorusStep, Word, all_words, word_key

# Bound on the number of monomials ``refine`` may produce.
DEFAULT_MAX_TERMS = 200_000

# Bound on the degree the pairing oracle will enumerate.
PAIRING_DEGREE_CAP = 8

Exps = Tuple[Tuple[Word, int, int], ...]


@dataclass(frozen=True)
class GaussMonomial:
    """prod over words of z_w^a * conj(z_w)^b, stored sorted by word."""

    exps: Exps

    def __post_init__(self) -> None:
        cleaned = tuple(sorted(((w, a, b) for w, a, b in self.exps if a or b),
                               key=lambda e: word_key(e[0])))
        for w, a, b in cleaned:
            if a < 0 or b < 0:
                raise ValueError("negative exponent")
        words = [w for w, _, _ in cleaned]
        if len(set(words)) != len(words):
            raise ValueError("duplicate variable in monomial")
        object.__setattr__(self, "exps", cleaned)

    @classmethod
    def of(cls, exponents: Mapping[Word, Tuple[int, int]]) -> "GaussMonomial":
        return cls(tuple((w, a, b) for w, (a, b) in exponents.items()))

    @classmethod
    def unit(cls) -> "GaussMonomial":
        return cls(())

    @property
    def degree(self) -> int:
        return sum(a + b for _, a, b in self.exps)

    @property
    def is_constant(self) -> bool:
        return not self.exps

    def words(self) -> Tuple[Word, ...]:
        return tuple(w for w, _, _ in self.exps)

    def max_word_length(self) -> int:
        return max((len(w) for w, _, _ in self.exps), default=0)

    def is_single_level(self) -> bool:
        return len({len(w) for w, _, _ in self.exps}) <= 1

    def conj(self) -> "GaussMonomial":
        return GaussMonomial(tuple((w, b, a) for w, a, b in self.exps))

    def __mul__(self, other: "GaussMonomial") -> "GaussMonomial":
        if not isinstance(other, GaussMonomial):
            return NotImplemented
        merged: Dict[Word, Tuple[int, int]] = {w: (a, b) for w, a, b in self.exps}
        for w, a, b in other.exps:
            pa, pb = merged.get(w, (0, 0))
            merged[w] = (pa + a, pb + b)
        return GaussMonomial.of(merged)

    def evaluate(self, assignment: Mapping[Word, object]):
        out = 1
        for w, a, b in self.exps:
            z = assignment[w]
            if a:
                out = out * z ** a
            if b:
                out = out * z.conjugate() ** b
        return out

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        parts = []
        for w, a, b in self.exps:
            name = "z_" + ("".join(map(str, w)) or "e")
            if a:
                parts.append(name if a == 1 else f"{name}^{a}")
            if b:
                parts.append(f"{name}~" if b == 1 else f"{name}~^{b}")
        return "*".join(parts)


class GaussPoly:
    """A sparse polynomial: monomial -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[GaussMonomial, Scalar]) -> None:
        self.terms = {m: c for m, c in terms.items() if c != 0}

    @classmethod
    def zero(cls) -> "GaussPoly":
        return cls({})

    @classmethod
    def constant(cls, c: Scalar) -> "GaussPoly":
        return cls({GaussMonomial.unit(): c})

    @classmethod
    def variable(cls, w: Word, barred: bool = False, coeff: Scalar = 1) -> "GaussPoly":
        mono = GaussMonomial.of({w: (0, 1) if barred else (1, 0)})
        return cls({mono: coeff})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def backend(self) -> str:
        return scalars.backend_of_values(self.terms.values())

    def max_word_length(self) -> int:
        return max((m.max_word_length() for m in self.terms), default=0)

    def variables(self) -> Tuple[Word, ...]:
        seen = {w for m in self.terms for w in m.words()}
        return tuple(sorted(seen, key=word_key))

    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def __add__(self, other: "GaussPoly") -> "GaussPoly":
        if not isinstance(other, GaussPoly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GaussPoly(out)

    def __sub__(self, other: "GaussPoly") -> "GaussPoly":
        return self + other.scaled(-1)

    def scaled(self, c: Scalar) -> "GaussPoly":
        return GaussPoly({m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c: Scalar) -> "GaussPoly":
        return self.scaled(c)

    def __neg__(self) -> "GaussPoly":
        return self.scaled(-1)

    def __mul__(self, other: "GaussPoly") -> "GaussPoly":
        if not isinstance(other, GaussPoly):
            return NotImplemented
        out: Dict[GaussMonomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                out[m] = out.get(m, 0) + c1 * c2
        return GaussPoly(out)

    def conj(self) -> "GaussPoly":
        return GaussPoly({m.conj(): scalars.conj(c) for m, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GaussPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def evaluate(self, assignment: Mapping[Word, object]):
        out = 0
        for m, c in self.terms.items():
            val = m.evaluate(assignment)
            out = out + (complex(c) if not isinstance(c, (int, float, complex)) else c) * val
        return out

    def to_json_dict(self) -> dict:
        rows = []
        for m, c in sorted(self.terms.items(),
                           key=lambda kv: (kv[0].degree, kv[0].exps)):
            rows.append({
                "monomial": [{"word": "".join(map(str, w)), "plain": a, "conj": b}
                             for w, a, b in m.exps],
                "coefficient": scalars.to_jsonable(c),
            })
        return {"terms": rows}

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{m}" for m, c in sorted(
            self.terms.items(), key=lambda kv: (kv[0].degree, kv[0].exps)))
        return f"GaussPoly({body or '0'})"


def _pow(p: GaussPoly, n: int, max_terms: int) -> GaussPoly:
    out = GaussPoly.constant(1)
    for _ in range(n):
        out = out * p
        if len(out.terms) > max_terms:
            raise CapExceeded(f"expansion above {max_terms} monomials")
    return out


def refine(p: GaussPoly, level: int, max_terms: int = DEFAULT_MAX_TERMS) -> GaussPoly:
    """Rewrite ``p`` using only level-``level`` variables.

    Each variable z_w with len(w) < level becomes the normalized sum of the
    variables on its depth-``level`` descendants; the polynomial identity
    behind ``embed`` on the Fock side.
    """
    if level > MAX_WORD_LENGTH:
        raise CapExceeded(f"refinement beyond depth {MAX_WORD_LENGTH}")
    if p.max_word_length() > level:
        raise ValueError("polynomial already uses variables deeper than the target")
    if all(len(w) == level for m in p.terms for w in m.words()):
        return p
    backend = p.backend()
    out = GaussPoly.zero()
    subst_cache: Dict[Word, GaussPoly] = {}
    for mono, coeff in p.terms.items():
        acc = GaussPoly.constant(coeff)
        for w, a, b in mono.exps:
            gap = level - len(w)
            if gap == 0:
                acc = acc * GaussPoly({GaussMonomial.of({w: (a, b)}): 1})
            else:
                subst = subst_cache.get(w)
                if subst is None:
                    scale = scalars.inv_sqrt2_pow(gap, backend)
                    subst = GaussPoly({GaussMonomial.of({w + t: (1, 0)}): scale
                                       for t in all_words(gap)})
                    subst_cache[w] = subst
                if a:
                    acc = acc * _pow(subst, a, max_terms)
                if b:
                    acc = acc * _pow(subst.conj(), b, max_terms)
            if len(acc.terms) > max_terms:
                raise CapExceeded(f"expansion above {max_terms} monomials")
        out = out + acc
        if len(out.terms) > max_terms:
            raise CapExceeded(f"expansion above {max_terms} monomials")
    return out


def moment(p: GaussPoly) -> Scalar:
    """E[p] under independent standard complex Gaussian coordinates.

    Requires a single variable level (refine first otherwise): variables at
    different levels are dependent and the diagonal rule does not apply.
    """
    lengths = {len(w) for m in p.terms for w in m.words()}
    if len(lengths) > 1:
        raise ValueError("mixed variable lengths; refine to a common level first")
    acc: Scalar = 0
    for mono, coeff in p.terms.items():
        factor = 1
        for _, a, b in mono.exps:
            if a != b:
                factor = 0
                break
            factor *= math.factorial(a)
        if factor:
            acc = acc + coeff * factor
    return acc


def inner(p: GaussPoly, q: GaussPoly) -> Scalar:
    """<p, q> = E[p * conj(q)], refining both to a common level first."""
    level = max(p.max_word_length(), q.max_word_length())
    return moment(refine(p, level) * refine(q, level).conj())


def norm2(p: GaussPoly) -> Scalar:
    return inner(p, p)


def from_fock(v: FockVector) -> GaussPoly:
    """Realize a Fock vector as a polynomial: each letter contributes its
    variable, marked letters conjugated."""
    out: Dict[GaussMonomial, Scalar] = {}
    for word, coeff in v.terms.items():
        exps: Dict[Word, Tuple[int, int]] = {}
        for s, m in word.symbol_multiplicities().items():
            a, b = exps.get(s.word, (0, 0))
            exps[s.word] = (a, b + m) if s.barred else (a + m, b)
        mono = GaussMonomial.of(exps)
        out[mono] = out.get(mono, 0) + coeff
    return GaussPoly(out)


def koopman(g: TorusStep, p: GaussPoly, max_terms: int = DEFAULT_MAX_TERMS) -> GaussPoly:
    """Composition with the step's action: z_w picks up the factor g(w).

    Auto-refines so every variable is at least as deep as the step.
    """
    level = max(g.level, p.max_word_length())
    refined = refine(p, level, max_terms)
    out: Dict[GaussMonomial, Scalar] = {}
    for mono, coeff in refined.terms.items():
        ph: Scalar = 1
        for w, a, b in mono.exps:
            val = g.value_at(w)
            if a >= b:
                ph = ph * val ** (a - b)
            else:
                ph = ph * scalars.conj(val) ** (b - a)
        out[mono] = out.get(mono, 0) + ph * coeff
    return GaussPoly(out)


def moment_by_pairings(mono: GaussMonomial) -> int:
    """Brute-force Wick oracle for a monomial's moment.

    Lists the plain and conjugated factors and counts the bijections that
    match each plain factor to a conjugated copy of the same variable.
    Only meaningful for a single variable level (independent family).
    """
    if not mono.is_single_level():
        raise ValueError("pairing oracle needs a single variable level")
    if mono.degree > PAIRING_DEGREE_CAP:
        raise CapExceeded(f"pairing oracle beyond degree {PAIRING_DEGREE_CAP}")
    plain = [w for w, a, _ in mono.exps for _ in range(a)]
    conjd = [w for w, _, b in mono.exps for _ in range(b)]
    if len(plain) != len(conjd):
        return 0
    count = 0
    for perm in itertools.permutations(conjd):
        if all(x == y for x, y in zip(plain, perm)):
            count += 1
    return count


def expansion_remainder(base: Word, k: int, m: int, depth: int) -> GaussPoly:
    """The diagonal part of the depth-``depth`` expansion of z^k conj(z)^m.

    2^(-depth*(k+m)/2) * sum over children t of z_{base+t}^k conj(z_{base+t})^m.
    """
    if k < 0 or m < 0 or k + m < 1:
        raise ValueError("need nonnegative exponents with k + m >= 1")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    scale = scalars.sqrt2_pow(-depth * (k + m))
    return GaussPoly({GaussMonomial.of({base + t: (k, m)}): scale
                      for t in all_words(depth)})


@dataclass
class RemainderRate:
    """Exact decay data for the diagonal part of a power's expansion."""

    k: int
    m: int
    depth: int
    centering: Scalar            # E of the remainder (zero when k != m)
    norm2_centered: Scalar       # ||remainder - centering||^2, exact
    closed_form: Fraction        # the predicted value of norm2_centered
    matches_closed_form: bool
    centering_matches_sqrt_factorial: Optional[bool]  # None when k != m

    @property
    def passed(self) -> bool:
        return self.matches_closed_form


def remainder_rate(base: Word, k: int, m: int, depth: int) -> RemainderRate:
    r = expansion_remainder(base, k, m, depth)
    c = moment(r)
    centered = r - GaussPoly.constant(c)
    n2 = inner(centered, centered)
    if k == m:
        closed = Fraction(math.factorial(2 * m) - math.factorial(m) ** 2,
                          2 ** (depth * (2 * m - 1)))
        sq = math.factorial(m)
        root = scalars.sqrt_in_tower(Fraction(sq))
        sqrt_match = (root is not None and c == root) if c != 0 else (sq == 0)
    else:
        closed = Fraction(math.factorial(k + m), 2 ** (depth * (k + m - 1)))
        sqrt_match = None
    return RemainderRate(k, m, depth, c, n2, closed, n2 == closed, sqrt_match)


@dataclass
class ExpansionReport:
    """Exact check that a power of one variable expands as displayed."""

    k: int
    m: int
    depth: int
    identity_holds: bool          # refine equals the displayed index sum
    remainder_matches: bool       # constant-index part equals the remainder
    constant_index_terms: int
    nonconstant_index_terms: int

    @property
    def passed(self) -> bool:
        return self.identity_holds and self.remainder_matches


def power_expansion_report(base: Word, k: int, m: int, depth: int,
                           max_terms: int = DEFAULT_MAX_TERMS) -> ExpansionReport:
    """Verify z^k conj(z)^m = 2^(-depth(k+m)/2) * sum over index tuples
    of the corresponding product of child variables, split into its
    constant-index (diagonal) and mixed-index parts."""
    if k < 0 or m < 0 or k + m < 1:
        raise ValueError("need nonnegative exponents with k + m >= 1")
    children = all_words(depth)
    tuples = len(children) ** (k + m)
    if tuples > max_terms:
        raise CapExceeded(f"{tuples} index tuples exceed the cap {max_terms}")
    lhs = refine(GaussPoly({GaussMonomial.of({base: (k, m)}): 1}),
                 len(base) + depth, max_terms)
    scale = scalars.sqrt2_pow(-depth * (k + m))
    rhs: Dict[GaussMonomial, Scalar] = {}
    diagonal: Dict[GaussMonomial, Scalar] = {}
    for choice in itertools.product(children, repeat=k + m):
        exps: Dict[Word, Tuple[int, int]] = {}
        for t in choice[:k]:
            a, b = exps.get(base + t, (0, 0))
            exps[base + t] = (a + 1, b)
        for t in choice[k:]:
            a, b = exps.get(base + t, (0, 0))
            exps[base + t] = (a, b + 1)
        mono = GaussMonomial.of(exps)
        rhs[mono] = rhs.get(mono, 0) + scale
        if len(set(choice)) == 1:
            diagonal[mono] = diagonal.get(mono, 0) + scale
    rhs_poly = GaussPoly(rhs)
    return ExpansionReport(
        k, m, depth,
        identity_holds=(lhs == rhs_poly),
        remainder_matches=(GaussPoly(diagonal) == expansion_remainder(base, k, m, depth)),
        constant_index_terms=len(children),
        nonconstant_index_terms=tuples - len(children),
    )
