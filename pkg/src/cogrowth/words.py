"""Freely reduced words over a signed generator alphabet.

A letter is a nonzero integer: ``g + 1`` for the generator with index ``g``,
``-(g + 1)`` for its inverse.  A word is a tuple of letters containing no
adjacent pair ``x, -x``.  Everything here is purely syntactic; no group
relations are consulted.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

Letter = int
Word = Tuple[int, ...]

EMPTY: Word = ()


def letter(generator_index: int, sign: int) -> Letter:
    if generator_index < 0:
        raise ValueError("generator_index must be nonnegative")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign * (generator_index + 1)


def generator_index(x: Letter) -> int:
    return abs(x) - 1


def sign_of(x: Letter) -> int:
    return 1 if x > 0 else -1


def is_reduced(letters: Sequence[int]) -> bool:
    return all(letters[i] != -letters[i + 1] for i in range(len(letters) - 1))


def free_reduce(raw: Iterable[int]) -> Word:
    """Delete adjacent inverse pairs until none remain.

    The result is independent of deletion order; a single left-to-right
    stack pass realises it.
    """
    out: list[int] = []
    for x in raw:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def concat_reduce(u: Sequence[int], v: Sequence[int]) -> Word:
    """Product of two reduced words; cancellation happens only at the seam."""
    i = len(u)
    j = 0
    n = len(v)
    while i > 0 and j < n and u[i - 1] == -v[j]:
        i -= 1
        j += 1
    return tuple(u[:i]) + tuple(v[j:])


def conjugate_letter(w: Sequence[int], x: Letter) -> Word:
    """Reduced form of x w x^-1.  Length changes by -2, 0 or +2."""
    if not w:
        return EMPTY
    if w[0] == -x:
        # left end cancels; check whether the right end cancels too
        if w[-1] == x:
            return tuple(w[1:-1])
        return tuple(w[1:]) + (-x,)
    if w[-1] == x:
        return (x,) + tuple(w[:-1])
    return (x,) + tuple(w) + (-x,)


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def cyclic_reduce(w: Sequence[int]) -> Word:
    """Strip cancelling end pairs until the word is cyclically reduced."""
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return tuple(w[i:j])


def cyclic_permutations(w: Sequence[int]) -> frozenset[Word]:
    """All rotations of a cyclically reduced word, deduplicated."""
    if not is_cyclically_reduced(w):
        raise ValueError("word must be cyclically reduced")
    w = tuple(w)
    if not w:
        return frozenset({EMPTY})
    return frozenset(w[i:] + w[:i] for i in range(len(w)))


def render(w: Sequence[int], names: Sequence[str]) -> str:
    """Text form with caret powers, e.g. ``a^2 b a^-2 b^-1``."""
    if not w:
        return "1"
    parts: list[str] = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = names[generator_index(w[i])]
        power = (j - i) * sign_of(w[i])
        parts.append(name if power == 1 else f"{name}^{power}")
        i = j
    return " ".join(parts)
