"""Q-words with exact rational exponents over a free group: parsing, depth,
normalization to canonical tower forms, word/conjugacy decisions, and the
effective enumeration of root-class tables and tower levels.

Fractional powers are interpreted in the Q-completion of the free group,
realized as a union of iterated centralizer extensions.  Per-query sessions
build a minimal chain of root extensions on demand; the eager table/tower
constructors reproduce the global level-by-level picture at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from . import tower as tw
from .tower import Elem, Form, ResourceCapError, Tower
from .words import Alphabet, WordSyntaxError


class QSyntaxError(WordSyntaxError):
    """Malformed Q-word text; the message carries the 0-based position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class QLetter:
    letter: int  # signed generator index


@dataclass(frozen=True)
class QProduct:
    factors: tuple


@dataclass(frozen=True)
class QPower:
    base: "QWord"
    exponent: Fraction


QWord = Union[QLetter, QProduct, QPower]


# -- parsing -----------------------------------------------------------------


class _Parser:
    def __init__(self, alphabet: Alphabet, text: str):
        self.alphabet = alphabet
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> Optional[str]:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take(self) -> str:
        ch = self.peek()
        if ch is None:
            raise QSyntaxError("unexpected end of input", self.pos)
        self.pos += 1
        return ch

    def expect(self, ch: str):
        got = self.peek()
        if got != ch:
            raise QSyntaxError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def parse(self) -> QWord:
        word = self.product()
        if self.peek() is not None:
            raise QSyntaxError(f"unexpected {self.peek()!r}", self.pos)
        return word

    def product(self) -> QWord:
        factors = []
        while True:
            ch = self.peek()
            if ch is None or ch == ")":
                break
            factors.append(self.factor())
        if len(factors) == 1:
            return factors[0]
        return QProduct(tuple(factors))

    def factor(self) -> QWord:
        atom = self.atom()
        if self.peek() == "^":
            self.pos += 1
            return QPower(atom, self.rational())
        return atom

    def atom(self) -> QWord:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.product()
            self.expect(")")
            return inner
        if ch == "1":
            self.pos += 1
            return QProduct(())
        if ch is not None and ch.isalpha():
            pos = self.pos
            self.pos += 1
            try:
                return QLetter(self.alphabet.letter(ch))
            except WordSyntaxError:
                raise QSyntaxError(f"unknown generator {ch!r}", pos)
        raise QSyntaxError(
            "expected a letter, '1', or '('" if ch is not None else "unexpected end of input",
            self.pos,
        )

    def rational(self) -> Fraction:
        parenthesized = self.peek() == "("
        if parenthesized:
            self.pos += 1
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        num = self._digits()
        den = 1
        if self.peek() == "/":
            self.pos += 1
            pos = self.pos
            den = self._digits()
            if den == 0:
                raise QSyntaxError("zero denominator", pos)
        if parenthesized:
            self.expect(")")
        return Fraction(sign * num, den)

    def _digits(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise QSyntaxError("expected digits", start)
        return int(self.text[start : self.pos])


def parse_qword(alphabet: Alphabet, text: str) -> QWord:
    """Parse Q-word text: Factor+ with Factor = Atom ['^' Rational];
    uppercase letters are inverses, '1' is the identity."""
    return _Parser(alphabet, text).parse()


def depth(q: QWord) -> int:
    """Nesting count of fractional exponentiations; integer powers are free."""
    if isinstance(q, QLetter):
        return 1
    if isinstance(q, QProduct):
        return max((depth(f) for f in q.factors), default=1)
    extra = 0 if q.exponent.denominator == 1 else 1
    return depth(q.base) + extra


def abelian_vector(t: Tower, e: Elem) -> tuple:
    """Exponent sums per base letter, with roots contributing fractionally.

    Conjugation-invariant, hence a cheap oracle for distinguishing elements
    and conjugacy classes.
    """
    n = t.base.size
    if not isinstance(e, Form):
        out = [0] * n
        for x in e:
            out[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(Fraction(c) for c in out)
    total = [Fraction(0)] * n
    for h in e.hs:
        for i, c in enumerate(abelian_vector(t, h)):
            total[i] += c
    if e.ss:
        vvec = abelian_vector(t, t.step_at(e.level).v)
        for s in e.ss:
            for i in range(n):
                total[i] += s * vvec[i]
    return tuple(total)


def locate(t: Tower, e: Elem) -> int:
    """The level n(g): max over the root classes used (their first available
    level) and the exponent denominators; 0 for plain base words."""
    if not isinstance(e, Form):
        return 0
    best = max((locate(t, h) for h in e.hs), default=0)
    if e.ss:
        v = t.step_at(e.level).v
        cls = max(2, tw.elem_len(t, v), locate(t, v) + 1)
        for s in e.ss:
            best = max(best, cls, s.denominator)
    return best


# -- lazy per-query sessions -------------------------------------------------


@dataclass
class _Chain:
    """Iterated roots of one conjugacy-class representative: m = 2, 3, 4, ...
    so every small denominator eventually divides the cumulative index."""

    key: str
    rep: Elem  # at the tower level where the class was registered
    levels: List[int]
    ms: List[int]

    @property
    def index(self) -> int:
        out = 1
        for m in self.ms:
            out *= m
        return out


class QSession:
    """Normalization context: a tower grown on demand from the Q-words seen.

    max_level caps the root indices adjoined per class chain (denominator q
    needs indices up to q); exceeding it raises ResourceCapError.
    """

    def __init__(self, alphabet: Alphabet, max_level: int = 3, k_bound: Optional[int] = None):
        self.alphabet = alphabet
        self.tower = Tower(alphabet)
        self.max_level = max_level
        self.k_bound = k_bound
        self.chains: List[_Chain] = []

    # -- element plumbing

    def top(self, e: Elem) -> Elem:
        return tw.lift(self.tower, e, self.tower.level)

    def canonical_text(self, e: Elem) -> str:
        return tw.serialize(self.tower, self.top(e))

    # -- class chains

    def _chain_root(self, chain: _Chain) -> Elem:
        if not chain.levels:
            return self.top(chain.rep)
        return self.top(self.tower.root(chain.levels[-1]))

    def _ensure_denominator(self, chain: _Chain, q: int):
        while chain.index % q:
            next_m = chain.ms[-1] + 1 if chain.ms else 2
            if next_m > self.max_level:
                raise ResourceCapError(
                    f"denominator {q} needs root index {next_m} "
                    f"> max_level {self.max_level} for class {chain.key}"
                )
            base = self._chain_root(chain)
            self.tower = self.tower.extend_centralizer(
                base, next_m, name=f"r{next_m}[{chain.key}]", validate=False
            )
            chain.levels.append(self.tower.level)
            chain.ms.append(next_m)

    def _class_power(self, chain: _Chain, rho: Fraction) -> Elem:
        """rep^rho as a tower element."""
        if rho.denominator == 1:
            return tw.pow_elem(self.tower, self.top(chain.rep), int(rho))
        self._ensure_denominator(chain, rho.denominator)
        exponent = rho * chain.index
        assert exponent.denominator == 1
        return tw.pow_elem(self.tower, self._chain_root(chain), int(exponent))

    def _root_power(self, root: Elem, r: Fraction) -> Elem:
        """root^r for a primitive cyclically reduced element."""
        root = self.top(root)
        if r.denominator == 1:
            return tw.pow_elem(self.tower, root, int(r))
        # an existing chain may already hold this class (possibly as one of
        # its iterated roots, or up to inversion/conjugacy)
        for chain in self.chains:
            candidates = [(self.top(chain.rep), Fraction(1))]
            m_cum = 1
            for lvl, m in zip(chain.levels, chain.ms):
                m_cum *= m
                candidates.append((self.top(self.tower.root(lvl)), Fraction(1, m_cum)))
            for cand, scale in candidates:
                for sign, target in ((1, cand), (-1, tw.inv(self.tower, cand))):
                    status, d = tw.conjugate_in_tower(self.tower, target, root, self.k_bound)
                    if status == tw.CONJUGATE:
                        # d^-1 rep^(sign*scale) d = root
                        val = self._class_power(chain, sign * scale * r)
                        d = self.top(d)
                        return tw.mul(self.tower, tw.inv(self.tower, d), self.top(val), d)
        rep, c, sign = tw.class_rep(self.tower, root, self.k_bound)
        chain = _Chain(
            key=tw.serialize(self.tower, rep), rep=rep, levels=[], ms=[]
        )
        self.chains.append(chain)
        val = self._class_power(chain, Fraction(sign) * r)
        c = self.top(c)
        return tw.mul(self.tower, c, self.top(val), tw.inv(self.tower, c))

    # -- normalization

    def normalize(self, q) -> Elem:
        """Canonical tower form of a Q-word (text or parsed)."""
        if isinstance(q, str):
            q = parse_qword(self.alphabet, q)
        return self.top(self._norm(q))

    def _norm(self, node: QWord) -> Elem:
        if isinstance(node, QLetter):
            return tw.from_word(self.tower, (node.letter,))
        if isinstance(node, QProduct):
            acc = tw.identity(self.tower, self.tower.level)
            for f in node.factors:
                fe = self._norm(f)
                acc = tw.mul(self.tower, self.top(acc), self.top(fe))
            return acc
        base = self._norm(node.base)
        r = node.exponent
        if r.denominator == 1:
            return tw.pow_elem(self.tower, base, int(r))
        base = self.top(base)
        x, core = tw.cyclic_decompose(self.tower, base)
        if tw.is_trivial(core):
            return tw.identity(self.tower, self.tower.level)
        root, k = tw.extract_root_elem(self.tower, core)
        val = self._root_power(tw.lift(self.tower, root, tw.level_of(base)), k * r)
        x = self.top(x)
        return tw.mul(self.tower, x, self.top(val), tw.inv(self.tower, x))

    # -- decisions

    def q_equal(self, a, b) -> bool:
        e1 = self.normalize(a)
        e2 = self.normalize(b)
        return self.top(e1) == self.top(e2)

    def q_conjugate(self, a, b) -> Tuple[str, Optional[Elem]]:
        """Tri-state conjugacy with a certificate element on success."""
        e1 = self.normalize(a)
        e2 = self.normalize(b)
        return tw.conjugate_in_tower(self.tower, self.top(e1), self.top(e2), self.k_bound)

    def locate(self, e: Elem) -> int:
        return locate(self.tower, self.top(e))


# -- eager tables and tower levels -------------------------------------------


@dataclass(frozen=True)
class VnEntry:
    text: str
    length: int
    elem: Elem  # class representative at the source tower's top level


@dataclass(frozen=True)
class VnTable:
    n: int
    entries: tuple

    @property
    def texts(self) -> tuple:
        return tuple(e.text for e in self.entries)


@dataclass(frozen=True)
class TowerIndex:
    n: int
    tower: Tower
    tables: tuple  # VnTable for levels 1..n

    @property
    def generator_count(self) -> int:
        return self.tower.base.size + len(self.tower.steps)

    def generator_names(self) -> tuple:
        return tuple(self.tower.base.names) + tuple(s.name for s in self.tower.steps)


def enumerate_Vn(ti: TowerIndex, n: int) -> VnTable:
    """Conjugacy-class representatives of primitive elements of length <= n
    at the given tower level, inverse classes identified, shortlex order."""
    if n < 1:
        raise ValueError("table level must be >= 1")
    t = ti.tower
    top = t.level
    gens: List[Elem] = [tw.from_word(t, (i,)) for i in range(1, t.base.size + 1)]
    gens += [tw.lift(t, t.root(i), top) for i in range(1, top + 1)]
    letters: List[Elem] = []
    for g in gens:
        letters.append(g)
        letters.append(tw.inv(t, g))
    seen = {tw.identity(t, top)}
    frontier = list(seen)
    for _ in range(n):
        nxt = []
        for e in frontier:
            for x in letters:
                p = tw.mul(t, e, x)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    cores = {}
    for e in seen:
        if tw.is_trivial(e):
            continue
        _, core = tw.cyclic_decompose(t, e)
        if core not in cores and tw.elem_len(t, core) <= n:
            cores[core] = None
    found = {}
    for core in sorted(cores, key=lambda c: tw.sort_key(t, c)):
        _, k = tw.extract_root_elem(t, core)
        if k != 1:
            continue
        rep, _, _ = tw.class_rep(t, core)
        key = tw.serialize(t, rep)
        if key not in found:
            found[key] = VnEntry(text=key, length=tw.elem_len(t, rep), elem=rep)
    entries = sorted(found.values(), key=lambda en: tw.sort_key(t, en.elem))
    return VnTable(n, tuple(entries))


_tower_levels: dict = {}  # (alphabet names, n) -> TowerIndex; levels build on each other


def tower_level(alphabet: Alphabet, n: int, max_level: int = 3) -> TowerIndex:
    """The n-th tower level: each previous-level class gets an n-th root
    (n = 1 collapses to renamings)."""
    if n > max_level:
        raise ResourceCapError(f"tower level {n} exceeds max_level {max_level}")
    idx = TowerIndex(0, Tower(alphabet), ())
    start = 1
    for k in range(n, 0, -1):
        cached = _tower_levels.get((alphabet.names, k))
        if cached is not None:
            idx, start = cached, k + 1
            break
    for k in range(start, n + 1):
        table = enumerate_Vn(idx, k)
        t = idx.tower
        for entry in table.entries:
            v = tw.lift(t, entry.elem, t.level)
            t = t.extend_centralizer(v, k, name=f"w[{k};{entry.text}]", validate=False)
        idx = TowerIndex(k, t, idx.tables + (table,))
        _tower_levels[(alphabet.names, k)] = idx
    return idx
