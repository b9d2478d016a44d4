"""Brute-force ground truth for small word lengths.

Evaluators reduce words to canonical element keys for groups where the
word problem is easy: Baumslag-Solitar normal forms, free-product normal
forms for Kouksov's examples, the free group itself, the plane for Z^2
and cursor-plus-support tuples for the wreath product Z wr Z.  On top of
the evaluators sit a layered dynamic program counting trivial words and a
depth-first enumeration listing them.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Optional, Sequence

from . import words
from .words import Word


class BudgetExceeded(RuntimeError):
    def __init__(self, layer: int, states: int):
        super().__init__(f"state budget exceeded at layer {layer} ({states} states)")
        self.layer = layer
        self.states = states


class GroupEvaluator:
    """Multiplication of canonical elements by single signed generators."""

    num_generators: int

    def identity(self) -> Hashable:
        raise NotImplementedError

    def multiply(self, element: Hashable, x: int) -> Hashable:
        raise NotImplementedError

    def evaluate(self, w: Sequence[int]) -> Hashable:
        e = self.identity()
        for x in w:
            e = self.multiply(e, x)
        return e

    def is_trivial(self, w: Sequence[int]) -> bool:
        return self.evaluate(w) == self.identity()


class Z2Evaluator(GroupEvaluator):
    """Direct (x, y) lattice evaluator for < a, b | [a,b] >."""

    num_generators = 2

    def identity(self):
        return (0, 0)

    def multiply(self, element, x):
        px, py = element
        if abs(x) == 1:
            return (px + words.sign_of(x), py)
        return (px, py + words.sign_of(x))


class BSEvaluator(GroupEvaluator):
    """BS(N, M) elements as normal forms: a prefix of syllables a^i b^(+-1)
    followed by a power of a.

    A syllable is (i, eps) with 0 <= i < N when eps = +1 and 0 <= i < M
    when eps = -1; the element is the product of the syllables times
    a^(a_exponent).
    """

    num_generators = 2

    def __init__(self, n: int, m: int):
        if n < 1 or m < 1:
            raise ValueError("N and M must be >= 1")
        self.n = n
        self.m = m

    def identity(self):
        return ((), 0)

    def multiply(self, element, x):
        prefix, k = element
        g = words.generator_index(x)
        s = words.sign_of(x)
        if g == 0:
            return (prefix, k + s)
        if g != 1:
            raise ValueError("BS evaluator works on two generators")
        if s == 1:
            # a^k b = a^r (a^(N l) b) = a^r b a^(M l)
            ell, r = divmod(k, self.n)
            if r == 0:
                if prefix and prefix[-1][1] == -1:
                    i = prefix[-1][0]
                    return (prefix[:-1], i + self.m * ell)
                return (prefix + ((0, 1),), self.m * ell)
            return (prefix + ((r, 1),), self.m * ell)
        # a^k b^-1 = a^r (a^(M l) b^-1) = a^r b^-1 a^(N l)
        ell, r = divmod(k, self.m)
        if r == 0:
            if prefix and prefix[-1][1] == 1:
                i = prefix[-1][0]
                return (prefix[:-1], i + self.n * ell)
            return (prefix + ((0, -1),), self.n * ell)
        return (prefix + ((r, -1),), self.n * ell)


class FreeProductEvaluator(GroupEvaluator):
    """Free products of finite cyclic groups, one generator per factor.

    Elements are alternating syllable sequences (factor, exponent) with
    exponent in 1..order-1.
    """

    def __init__(self, orders: Sequence[int]):
        self.orders = tuple(orders)
        self.num_generators = len(orders)

    def identity(self):
        return ()

    def multiply(self, element, x):
        g = words.generator_index(x)
        e = words.sign_of(x) % self.orders[g]
        if e == 0:
            return element
        if element and element[-1][0] == g:
            e = (element[-1][1] + e) % self.orders[g]
            if e == 0:
                return element[:-1]
            return element[:-1] + ((g, e),)
        return element + ((g, e),)


class FreeGroupEvaluator(GroupEvaluator):
    def __init__(self, k: int):
        self.num_generators = k

    def identity(self):
        return ()

    def multiply(self, element, x):
        if element and element[-1] == -x:
            return element[:-1]
        return element + (x,)


class WreathZZEvaluator(GroupEvaluator):
    """Z wr Z with generators a (lamp increment at the cursor) and t
    (cursor shift).  Elements are (cursor, sorted tuple of (pos, count))."""

    num_generators = 2

    def __init__(self, a_index: int = 0, t_index: int = 1):
        self.a_index = a_index
        self.t_index = t_index

    def identity(self):
        return (0, ())

    def multiply(self, element, x):
        cursor, support = element
        g = words.generator_index(x)
        s = words.sign_of(x)
        if g == self.t_index:
            return (cursor + s, support)
        d = dict(support)
        d[cursor] = d.get(cursor, 0) + s
        if d[cursor] == 0:
            del d[cursor]
        return (cursor, tuple(sorted(d.items())))


def evaluator_for(name: str, params: Sequence[int] = ()) -> GroupEvaluator:
    if name == "bs":
        return BSEvaluator(params[0], params[1])
    if name == "z2":
        return Z2Evaluator()
    if name == "kouksov1":
        return FreeProductEvaluator([2, 3])
    if name == "kouksov2":
        return FreeProductEvaluator([3, 3])
    if name == "kouksov3":
        return FreeProductEvaluator([2, 2, 2])
    if name == "free":
        return FreeGroupEvaluator(params[0] if params else 2)
    if name == "wreath_zz":
        return WreathZZEvaluator()
    raise ValueError(f"unsupported group for exhaustive evaluation: {name!r}")


def count_trivial_words(ev: GroupEvaluator, n_max: int, reduced: bool = False,
                        max_states: int = 20_000_000) -> list[int]:
    """Number of (optionally freely reduced) words of each length equal to
    the identity, by layered dynamic programming over element keys."""
    k = ev.num_generators
    letters = [words.letter(g, s) for g in range(k) for s in (1, -1)]
    ident = ev.identity()
    counts = [1] + [0] * n_max
    if reduced:
        layer = {(ident, 0): 1}
    else:
        layer = {ident: 1}
    for step in range(1, n_max + 1):
        nxt: dict = {}
        if reduced:
            for (elem, last), cnt in layer.items():
                for x in letters:
                    if last and x == -last:
                        continue
                    key = (ev.multiply(elem, x), x)
                    nxt[key] = nxt.get(key, 0) + cnt
            counts[step] = sum(cnt for (elem, _), cnt in nxt.items()
                               if elem == ident)
        else:
            for elem, cnt in layer.items():
                for x in letters:
                    key = ev.multiply(elem, x)
                    nxt[key] = nxt.get(key, 0) + cnt
            counts[step] = nxt.get(ident, 0)
        if len(nxt) > max_states:
            raise BudgetExceeded(step, len(nxt))
        layer = nxt
    return counts


def enumerate_trivial_words(ev: GroupEvaluator, n_max: int,
                            reduced: bool = True) -> dict[int, list[Word]]:
    """Explicit lists of trivial words up to length n_max, keyed by length."""
    k = ev.num_generators
    letters = [words.letter(g, s) for g in range(k) for s in (1, -1)]
    ident = ev.identity()
    out: dict[int, list[Word]] = {n: [] for n in range(n_max + 1)}
    out[0].append(words.EMPTY)

    stack: list[int] = []

    def dfs(elem, depth):
        if depth == n_max:
            return
        for x in letters:
            if reduced and stack and x == -stack[-1]:
                continue
            nxt = ev.multiply(elem, x)
            stack.append(x)
            if nxt == ident:
                out[depth + 1].append(tuple(stack))
            dfs(nxt, depth + 1)
            stack.pop()

    dfs(ident, 0)
    return out
