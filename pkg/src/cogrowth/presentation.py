"""Group presentations: data model, text parser, built-ins, relator sampling.

The relator closure S contains every relator, every inverse, and all cyclic
rotations of both.  Sampling of S is uniform for a finite presentation; the
wreath-product family draws its commutator relators from a truncated
geometric law over the conjugating offsets.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import words
from .words import Word

log = logging.getLogger(__name__)


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class InfiniteRelatorFamily:
    """Tag for a finitely generated, infinitely presented relator family.

    Currently only the wreath product of two infinite cyclic groups, with
    relators [t^i a t^-i, t^j a t^-j] for all i != j.
    """

    family: str  # "wreath_zz"
    a_index: int = 0
    t_index: int = 1


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]
    infinite_family: Optional[InfiniteRelatorFamily] = None

    def __post_init__(self):
        if len(set(self.generator_names)) != len(self.generator_names):
            raise ParseError("duplicate generator names")
        for name in self.generator_names:
            if not name:
                raise ParseError("empty generator name")
        for r in self.relators:
            if not r:
                raise ParseError("empty relator")
            if not words.is_cyclically_reduced(r):
                raise ParseError("relator not cyclically reduced")
            for x in r:
                if words.generator_index(x) >= len(self.generator_names):
                    raise ParseError("relator uses unknown generator")

    @property
    def num_generators(self) -> int:
        return len(self.generator_names)

    def render(self) -> str:
        rels = ", ".join(words.render(r, self.generator_names) for r in self.relators)
        return f"< {', '.join(self.generator_names)} | {rels} >"


def _make_presentation(names: Sequence[str], raw_relators: Sequence[Sequence[int]],
                       infinite_family=None) -> Presentation:
    """Freely and cyclically reduce relators, warn if reduction was needed."""
    cleaned = []
    for r in raw_relators:
        red = words.cyclic_reduce(r)
        if len(red) != len(r):
            if not red:
                raise ParseError("relator reduces to the empty word")
            warnings.warn("relator was not cyclically reduced; reduced automatically")
        cleaned.append(red)
    return Presentation(tuple(names), tuple(cleaned), infinite_family)


# ---------------------------------------------------------------------------
# parser
#
# grammar:  '<' gens '|' rels '>'
#   gens : ident (',' ident)*
#   rels : relexpr (',' relexpr)*
#   relexpr : word | word '=' word        (w1 = w2 means relator w1 w2^-1)
#   word : term+                          ('*' between terms optional)
#   term : atom ('^' int)?
#   atom : ident | '(' word ')' | '[' word ',' word ']' | '1'

class _Tokenizer:
    symbols = "<>|,=^()[]*"

    def __init__(self, text: str):
        self.tokens: list[str] = []
        i = 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
            elif c in self.symbols:
                self.tokens.append(c)
                i += 1
            elif c.isalpha() or c == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(text[i:j])
                i = j
            elif c.isdigit() or c == "-":
                j = i + 1
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(text[i:j])
                i = j
            else:
                raise ParseError(f"unexpected character {c!r}")
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok: str):
        got = self.next()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}")


def _is_int(tok: str) -> bool:
    return tok is not None and (tok.lstrip("-").isdigit() and tok.lstrip("-"))


class _WordParser:
    def __init__(self, tz: _Tokenizer, gen_index: dict):
        self.tz = tz
        self.gen_index = gen_index

    def word(self) -> list[int]:
        out: list[int] = []
        while True:
            tok = self.tz.peek()
            if tok is None or tok in (">", ",", "=", ")", "]", "|"):
                break
            out.extend(self.term())
            if self.tz.peek() == "*":
                self.tz.next()
        return out

    def term(self) -> list[int]:
        base = self.atom()
        if self.tz.peek() == "^":
            self.tz.next()
            tok = self.tz.next()
            if not _is_int(tok):
                raise ParseError(f"expected integer power, got {tok!r}")
            power = int(tok)
            if power < 0:
                base = list(words.invert(base))
                power = -power
            base = base * power
        return base

    def atom(self) -> list[int]:
        tok = self.tz.next()
        if tok == "1":
            return []
        if tok == "(":
            w = self.word()
            self.tz.expect(")")
            return w
        if tok == "[":
            u = self.word()
            self.tz.expect(",")
            v = self.word()
            self.tz.expect("]")
            return list(words.free_reduce(
                u + v + list(words.invert(u)) + list(words.invert(v))))
        if tok in self.gen_index:
            return [words.letter(self.gen_index[tok], 1)]
        raise ParseError(f"unknown identifier {tok!r}")


def parse_presentation(text: str) -> Presentation:
    tz = _Tokenizer(text)
    tz.expect("<")
    names = [tz.next()]
    while tz.peek() == ",":
        tz.next()
        names.append(tz.next())
    for name in names:
        if not (name[0].isalpha() or name[0] == "_"):
            raise ParseError(f"bad generator name {name!r}")
    if len(set(names)) != len(names):
        raise ParseError("duplicate generator names")
    tz.expect("|")
    gen_index = {name: i for i, name in enumerate(names)}
    wp = _WordParser(tz, gen_index)
    relators = []
    while True:
        lhs = wp.word()
        if tz.peek() == "=":
            tz.next()
            rhs = wp.word()
            lhs = lhs + list(words.invert(rhs))
        relators.append(words.free_reduce(lhs))
        if tz.peek() == ",":
            tz.next()
            continue
        break
    tz.expect(">")
    if tz.peek() is not None:
        raise ParseError(f"trailing input {tz.peek()!r}")
    return _make_presentation(names, relators)


# ---------------------------------------------------------------------------
# built-in presentations

_BUILTIN_TEXT = {
    "z2": "< a, b | [a, b] >",
    "kouksov1": "< a, b | a^2, b^3 >",
    "kouksov2": "< a, b | a^3, b^3 >",
    "kouksov3": "< a, b, c | a^2, b^2, c^2 >",
    "thompson1": "< a, b | [a b^-1, a^-1 b a], [a b^-1, a^-2 b a^2] >",
    "thompson2": ("< a, b, c, d | c = a^-1 b a, d = a^-1 c a,"
                  " [a b^-1, c], [a b^-1, d] >"),
    "thompson3": ("< a, b, c, d, e | c = a^-1 b a, d = a^-1 c a, e = a b^-1,"
                  " [e, c], [e, d] >"),
    # HNN extension containing the basilica group; two rewritings of the
    # same group, first with b = [a, t^-1], second with b = t^-1 a t.
    "basilica_a": ("< a, b, t | [a, t^-1] = b, t^-2 a t^2 = a a,"
                   " [[b, a], a] >"),
    "basilica_b": ("< a, b, t | t^-1 a t = b, t^-1 b t = a^2,"
                   " b^-1 a b a^-1 b^-1 a^-1 b a >"),
}

BUILTIN_NAMES = ("bs",) + tuple(_BUILTIN_TEXT) + ("wreath_zz",)


def builtin_presentation(name: str, params: Sequence[int] = ()) -> Presentation:
    """Named presentations used throughout the package.

    ``bs`` takes parameters (N, M) and gives < a, b | a^N b a^-M b^-1 >.
    """
    if name == "bs":
        if len(params) != 2:
            raise ValueError("bs requires parameters N, M")
        n, m = params
        if n < 1 or m < 1:
            raise ValueError("bs requires N, M >= 1")
        a = words.letter(0, 1)
        b = words.letter(1, 1)
        rel = [a] * n + [b] + [-a] * m + [-b]
        return _make_presentation(["a", "b"], [rel])
    if name == "wreath_zz":
        return Presentation(("a", "t"), (),
                            InfiniteRelatorFamily("wreath_zz", a_index=0, t_index=1))
    if name in _BUILTIN_TEXT:
        if params:
            raise ValueError(f"{name} takes no parameters")
        return parse_presentation(_BUILTIN_TEXT[name])
    raise ValueError(f"unknown builtin presentation {name!r}")


# ---------------------------------------------------------------------------
# relator closure and sampling

@dataclass(frozen=True)
class RelatorSet:
    """Deduplicated closure of the relators under inversion and rotation."""

    elements: tuple[Word, ...]

    def __len__(self):
        return len(self.elements)

    def __contains__(self, w):
        return tuple(w) in self._index

    @property
    def _index(self):
        return frozenset(self.elements)


def build_relator_closure(p: Presentation) -> RelatorSet:
    if p.infinite_family is not None:
        raise ValueError("infinite relator family has no finite closure")
    elems: set[Word] = set()
    for r in p.relators:
        elems |= words.cyclic_permutations(r)
        elems |= words.cyclic_permutations(words.invert(r))
    return RelatorSet(tuple(sorted(elems)))


def wreath_commutator(i: int, j: int, a_index: int = 0, t_index: int = 1) -> Word:
    """The reduced commutator [t^i a t^-i, t^j a t^-j]."""
    a = words.letter(a_index, 1)
    t = words.letter(t_index, 1)

    def conj(offset):
        return [t] * offset + [a] + [-t] * offset if offset >= 0 else \
            [-t] * (-offset) + [a] + [t] * (-offset)

    u = conj(i)
    v = conj(j)
    return words.free_reduce(u + v + list(words.invert(u)) + list(words.invert(v)))


class RelatorSampler:
    """Draws elements of S with P(R) > 0 and P(R) = P(R^-1).

    Finite mode is uniform over the closure.  The wreath-product family
    draws offsets i != j with probability proportional to theta^(|i|+|j|)
    truncated to |i|, |j| <= max_offset, then inverts with probability 1/2
    and applies a uniform cyclic rotation; the construction is symmetric
    under inversion.
    """

    def __init__(self, p: Presentation, theta: float = 0.5, max_offset: int = 64):
        self.presentation = p
        self.family = p.infinite_family
        if self.family is None:
            self.closure = build_relator_closure(p)
            if not self.closure.elements:
                raise ValueError("presentation has no relators")
        else:
            if not 0.0 < theta < 1.0:
                raise ValueError("theta must lie in (0, 1)")
            self.theta = theta
            self.max_offset = max_offset
            # symmetric truncated geometric over {-max_offset, ..., max_offset}
            weights = [theta ** abs(i) for i in range(-max_offset, max_offset + 1)]
            total = sum(weights)
            self._cdf = []
            acc = 0.0
            for wgt in weights:
                acc += wgt / total
                self._cdf.append(acc)

    def _draw_offset(self, rng) -> int:
        u = rng.random()
        lo, hi = 0, len(self._cdf) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self._cdf[mid] < u:
                lo = mid + 1
            else:
                hi = mid
        return lo - self.max_offset

    def sample(self, rng) -> Word:
        if self.family is None:
            return self.closure.elements[rng.randrange(len(self.closure))]
        i = self._draw_offset(rng)
        j = self._draw_offset(rng)
        while j == i:
            j = self._draw_offset(rng)
        r = wreath_commutator(i, j, self.family.a_index, self.family.t_index)
        if rng.random() < 0.5:
            r = words.invert(r)
        r = words.cyclic_reduce(r)
        k = rng.randrange(len(r))
        return r[k:] + r[:k]


def sample_relator(sampler: RelatorSampler, rng) -> Word:
    return sampler.sample(rng)
