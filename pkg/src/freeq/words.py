"""Exact arithmetic with freely reduced words over a finite symmetric alphabet.

Words are tuples of nonzero ints: ``+k`` is generator ``k-1``, ``-k`` its
inverse.  All functions are pure; words are immutable and always freely
reduced on the way out.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Word = tuple  # tuple[int, ...], freely reduced

IDENTITY: Word = ()


class WordSyntaxError(ValueError):
    """Raised for malformed word text or unknown generator symbols."""


@dataclass(frozen=True)
class Alphabet:
    """Finite generating set.  Lowercase letter = generator, uppercase = inverse."""

    names: tuple

    def __post_init__(self):
        if len(self.names) < 1:
            raise ValueError("alphabet needs at least one generator")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        for n in self.names:
            if not (isinstance(n, str) and len(n) == 1 and n.isalpha() and n.islower()):
                raise ValueError(f"generator name must be a single lowercase letter: {n!r}")

    @property
    def size(self) -> int:
        return len(self.names)

    def letter(self, symbol: str) -> int:
        low = symbol.lower()
        if low not in self.names:
            raise WordSyntaxError(f"unknown generator symbol {symbol!r}")
        idx = self.names.index(low) + 1
        return idx if symbol.islower() else -idx

    def symbol(self, letter: int) -> str:
        name = self.names[abs(letter) - 1]
        return name if letter > 0 else name.upper()

    def parse(self, text: str) -> Word:
        text = "".join(text.split())
        if text == "1" or text == "":
            return IDENTITY
        return free_reduce(self.letter(ch) for ch in text)

    def format(self, w: Word) -> str:
        if not w:
            return "1"
        return "".join(self.symbol(x) for x in w)

    def all_letters(self):
        for i in range(1, self.size + 1):
            yield i
            yield -i


def free_reduce(raw: Iterable[int]) -> Word:
    """Freely reduce a sequence of signed letters."""
    out = []
    for x in raw:
        if x == 0:
            raise WordSyntaxError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def mul(*words: Word) -> Word:
    return free_reduce(itertools.chain.from_iterable(words))


def power(w: Word, n: int) -> Word:
    if n < 0:
        return power(inverse(w), -n)
    out: Word = IDENTITY
    for _ in range(n):
        out = mul(out, w)
    return out


def conjugate(w: Word, by: Word) -> Word:
    """by^-1 * w * by."""
    return mul(inverse(by), w, by)


def shortlex_key(w: Word):
    """Shortlex order: length, then generator index, then sign (+1 before -1)."""
    return (len(w), tuple((abs(x), 0 if x > 0 else 1) for x in w))


@dataclass(frozen=True)
class CyclicWord:
    """Cyclically reduced core plus the witness conjugator c with c*core*c^-1 = original."""

    core: Word
    conjugator: Word

    def __post_init__(self):
        if self.core and self.core[0] == -self.core[-1]:
            raise ValueError("core is not cyclically reduced")


def cyclic_reduce(w: Word) -> CyclicWord:
    conj = []
    core = list(w)
    while len(core) >= 2 and core[0] == -core[-1]:
        conj.append(core[0])
        core = core[1:-1]
    return CyclicWord(core=tuple(core), conjugator=tuple(conj))


def rotations(w: Word):
    for i in range(max(1, len(w))):
        yield w[i:] + w[:i]


def is_conjugate(w1: Word, w2: Word) -> bool:
    c1, c2 = cyclic_reduce(w1).core, cyclic_reduce(w2).core
    if len(c1) != len(c2):
        return False
    return c2 in set(rotations(c1))


def conjugacy_witness(w1: Word, w2: Word) -> Optional[Word]:
    """A word c with c^-1 * w1 * c = w2, or None."""
    r1, r2 = cyclic_reduce(w1), cyclic_reduce(w2)
    if len(r1.core) != len(r2.core):
        return None
    for i, rot in enumerate(rotations(r1.core)):
        if rot == r2.core:
            # rot = p^-1 core1 p with p = core1[:i], hence c = a1 p a2^-1
            c = mul(r1.conjugator, r1.core[:i], inverse(r2.conjugator))
            if conjugate(w1, c) == w2:
                return c
    return None


def extract_root(w: Word):
    """Primitive root and maximal exponent of a cyclically reduced nonempty word."""
    if not w:
        raise ValueError("empty word has no root")
    if cyclic_reduce(w).conjugator:
        raise ValueError("extract_root requires cyclically reduced input")
    n = len(w)
    for d in range(1, n + 1):
        if n % d:
            continue
        root = w[:d]
        if power(root, n // d) == w:
            return root, n // d
    raise AssertionError("unreachable")


def is_primitive(w: Word) -> bool:
    return extract_root(w)[1] == 1


def primitive_root(w: Word) -> Word:
    return extract_root(w)[0]


def gromov_product(x: Word, y: Word, o: Word = IDENTITY) -> Fraction:
    """(x . y)_o = 1/2(|o^-1 x| + |o^-1 y| - |x^-1 y|), exact."""
    return Fraction(
        len(mul(inverse(o), x)) + len(mul(inverse(o), y)) - len(mul(inverse(x), y)), 2
    )


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple

    def __post_init__(self):
        for r in self.relators:
            if not r:
                raise ValueError("relator equal to identity")
            if cyclic_reduce(r).conjugator:
                raise ValueError("relators must be cyclically reduced")


def _reduced_words_up_to(alphabet: Alphabet, max_len: int):
    """All freely reduced words of length <= max_len, shortest first."""
    yield IDENTITY
    frontier = [IDENTITY]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in alphabet.all_letters():
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        yield from nxt
        frontier = nxt


def dehn_area(p: Presentation, w: Word, bound: int) -> Optional[int]:
    """Minimal n <= bound with w a product of n conjugates of relators, or None.

    Breadth-first search over freely reduced words: each step inserts a
    cyclic permutation of a relator (or its inverse) at some position, which
    multiplies by a conjugate of that relator.  Intermediate words are capped
    at length |w| + bound * (max relator length), which is sufficient at desk
    scale but is a documented completeness caveat.
    """
    if not w:
        return 0
    if not p.relators:
        return None
    max_rel = max(len(r) for r in p.relators)
    cap = len(w) + bound * max_rel
    inserts = set()
    for r in p.relators:
        for signed in (r, inverse(r)):
            for i in range(len(signed)):
                inserts.add(signed[i:] + signed[:i])
    inserts = sorted(inserts)
    seen = {w}
    frontier = deque([w])
    for n in range(1, bound + 1):
        nxt = deque()
        while frontier:
            u = frontier.popleft()
            for i in range(len(u) + 1):
                head, tail = u[:i], u[i:]
                for m in inserts:
                    v = mul(head, m, tail)
                    if len(v) > cap:
                        continue
                    if not v:
                        return n
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
        frontier = nxt
    return None


def reduced_words(alphabet: Alphabet, max_len: int) -> Sequence[Word]:
    """Convenience list of all reduced words of length <= max_len."""
    return list(_reduced_words_up_to(alphabet, max_len))
