"""Homomorphisms between f.g. subgroups of free groups, plus exact word
reduction in HNN-extensions and amalgams over free bases.

The subgroup map is given on a free basis; applying it to an arbitrary
subgroup element goes through the Stallings decomposition over the core
graph's intrinsic basis, with a Nielsen change of basis in between.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .stallings import CoreGraph, build_core, express, free_basis
from .words import Alphabet, Word, free_reduce, inverse, mul

Abstract = Tuple[int, ...]  # word over abstract symbols +-(i+1), freely reduced


def _substitute(abstract: Abstract, images: Sequence[Word]) -> Word:
    parts = []
    for x in abstract:
        w = images[abs(x) - 1]
        parts.append(w if x > 0 else inverse(w))
    return mul(*parts)


def nielsen_invert(images: Sequence[Abstract]) -> Optional[List[Abstract]]:
    """Given d_i in F_k over abstract letters, return expressions of the k basis
    letters as words in symbols g_1..g_k with g_i := d_i, or None if (d_i) is
    not a free basis of F_k.
    """
    k = len(images)
    d = [tuple(w) for w in images]
    e: List[Abstract] = [((i + 1),) for i in range(k)]
    if any(not w for w in d):
        return None
    changed = True
    while changed:
        changed = False
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                for sj in (1, -1):
                    dj = d[j] if sj > 0 else inverse(d[j])
                    ej = e[j] if sj > 0 else inverse(e[j])
                    for left in (False, True):
                        cand = mul(dj, d[i]) if left else mul(d[i], dj)
                        if len(cand) < len(d[i]):
                            d[i] = cand
                            e[i] = mul(ej, e[i]) if left else mul(e[i], ej)
                            if not d[i]:
                                return None
                            changed = True
    if sorted(abs(w[0]) for w in d) != list(range(1, k + 1)) or any(len(w) != 1 for w in d):
        return None
    basis_expr: List[Abstract] = [()] * k
    for i, w in enumerate(d):
        letter = w[0]
        basis_expr[abs(letter) - 1] = e[i] if letter > 0 else inverse(e[i])
    return basis_expr


class NotASubgroupElement(ValueError):
    pass


class SubgroupHom:
    """Map from U = <u_1..u_r> <= F(dom) into F(cod), u_i |-> v_i.

    Requires (u_i) to be a free basis of U; `valid` is False otherwise.
    """

    def __init__(self, dom: Alphabet, pairs: Sequence[Tuple[Word, Word]], cod: Alphabet):
        self.dom = dom
        self.cod = cod
        self.pairs = [(free_reduce(u), free_reduce(v)) for (u, v) in pairs]
        self.graph = build_core(dom, [u for u, _ in self.pairs])
        self.valid = False
        self._chord_images: Optional[List[Word]] = None
        rank = self.graph.betti
        if rank != len(self.pairs):
            return
        decomps = []
        for u, _ in self.pairs:
            d = express(self.graph, u)
            if d is None:
                return
            decomps.append(free_reduce((idx + 1) * s for idx, s in d))
        basis_expr = nielsen_invert(decomps)
        if basis_expr is None:
            return
        images = [v for _, v in self.pairs]
        self._chord_images = [_substitute(b, images) for b in basis_expr]
        self.valid = True

    def contains(self, w: Word) -> bool:
        return self.graph.trace(w) == 0

    def apply(self, w: Word) -> Word:
        d = express(self.graph, w)
        if d is None:
            raise NotASubgroupElement(f"{self.dom.format(w)} is not in the domain subgroup")
        assert self._chord_images is not None
        return _substitute(free_reduce((idx + 1) * s for idx, s in d), self._chord_images)


# ---------------------------------------------------------------------------
# HNN-extension words  <F(base), t | t^-1 u t = psi(u), u in U>
# ---------------------------------------------------------------------------

T_UP = "t"  # stable letter
T_DOWN = "T"  # its inverse

HnnToken = object  # int (base letter) or T_UP / T_DOWN


@dataclass
class HnnContext:
    base: Alphabet
    psi: SubgroupHom  # U -> V
    psi_inv: SubgroupHom  # V -> U


def hnn_context(base: Alphabet, pairs: Sequence[Tuple[Word, Word]]) -> HnnContext:
    psi = SubgroupHom(base, pairs, base)
    psi_inv = SubgroupHom(base, [(v, u) for (u, v) in pairs], base)
    if not (psi.valid and psi_inv.valid):
        raise ValueError("associated subgroup map is not an isomorphism on the given bases")
    return HnnContext(base, psi, psi_inv)


def hnn_parse(alphabet: Alphabet, text: str) -> list:
    out: list = []
    for ch in text.strip():
        if ch == T_UP:
            out.append(("t", 1))
        elif ch == T_DOWN:
            out.append(("t", -1))
        elif ch == "1":
            continue
        else:
            out.append(alphabet.letter(ch))
    return out


def hnn_format(alphabet: Alphabet, tokens: list) -> str:
    if not tokens:
        return "1"
    out = []
    for tok in tokens:
        if isinstance(tok, tuple):
            out.append(T_UP if tok[1] > 0 else T_DOWN)
        else:
            out.append(alphabet.symbol(tok))
    return "".join(out)


def _hnn_syllables(tokens: list):
    """Alternating [word, eps, word, eps, ..., word] with eps = +-1 (t-signs)."""
    sylls: list = [[]]
    for tok in tokens:
        if isinstance(tok, tuple):
            sylls.append(tok[1])
            sylls.append([])
        else:
            sylls[-1].append(tok)
    return sylls


def hnn_reduce(ctx: HnnContext, tokens: list) -> list:
    """Britton reduction: no t^-1 u t with u in U, no t v t^-1 with v in V remains."""
    sylls = _hnn_syllables(tokens)
    words = [free_reduce(s) for s in sylls[0::2]]
    signs = list(sylls[1::2])
    changed = True
    while changed:
        changed = False
        for i in range(len(signs) - 1):
            w = words[i + 1]
            if signs[i] == -1 and signs[i + 1] == 1 and ctx.psi.contains(w):
                repl = ctx.psi.apply(w)
            elif signs[i] == 1 and signs[i + 1] == -1 and ctx.psi_inv.contains(w):
                repl = ctx.psi_inv.apply(w)
            else:
                continue
            words[i : i + 3] = [mul(words[i], repl, words[i + 2])]
            signs[i : i + 2] = []
            changed = True
            break
    out: list = list(words[0])
    for eps, w in zip(signs, words[1:]):
        out.append(("t", eps))
        out.extend(w)
    return out


def hnn_is_identity(ctx: HnnContext, tokens: list) -> bool:
    return not hnn_reduce(ctx, tokens)


def hnn_inverse(tokens: list) -> list:
    out = []
    for tok in reversed(tokens):
        if isinstance(tok, tuple):
            out.append(("t", -tok[1]))
        else:
            out.append(-tok)
    return out


def hnn_commute(ctx: HnnContext, x: list, y: list) -> bool:
    return hnn_is_identity(ctx, hnn_inverse(x) + hnn_inverse(y) + list(x) + list(y))


def hnn_equal(ctx: HnnContext, x: list, y: list) -> bool:
    return hnn_is_identity(ctx, list(x) + hnn_inverse(y))


# ---------------------------------------------------------------------------
# Amalgam words  F(left) *_{U=V} F(right)
# ---------------------------------------------------------------------------


@dataclass
class AmalgamContext:
    left: Alphabet
    right: Alphabet
    psi: SubgroupHom  # U <= F(left) -> V <= F(right)
    psi_inv: SubgroupHom

    def factor(self, side: str) -> Alphabet:
        return self.left if side == "L" else self.right


def amalgam_context(
    left: Alphabet, right: Alphabet, pairs: Sequence[Tuple[Word, Word]]
) -> AmalgamContext:
    psi = SubgroupHom(left, pairs, right)
    psi_inv = SubgroupHom(right, [(v, u) for (u, v) in pairs], left)
    if not (psi.valid and psi_inv.valid):
        raise ValueError("amalgamated subgroup map is not an isomorphism on the given bases")
    return AmalgamContext(left, right, psi, psi_inv)


Syllable = Tuple[str, Word]  # ("L"|"R", word in that factor)


def amalgam_reduce(ctx: AmalgamContext, sylls: Sequence[Syllable]) -> List[Syllable]:
    """Reduced sequence: alternating sides, no interior syllable in the edge subgroup."""
    cur: List[Syllable] = [(side, free_reduce(w)) for side, w in sylls]
    changed = True
    while changed:
        changed = False
        # drop trivial syllables, merge adjacent same-side ones
        merged: List[Syllable] = []
        for side, w in cur:
            if not w:
                continue
            if merged and merged[-1][0] == side:
                merged[-1] = (side, mul(merged[-1][1], w))
                if not merged[-1][1]:
                    merged.pop()
            else:
                merged.append((side, w))
        if not merged:
            merged = [("L", ())]
        if merged != cur:
            cur = merged
            changed = True
            continue
        if len(cur) <= 1:
            break
        for i, (side, w) in enumerate(cur):
            if side == "L" and ctx.psi.contains(w):
                cur[i] = ("R", ctx.psi.apply(w))
                changed = True
                break
            if side == "R" and ctx.psi_inv.contains(w):
                cur[i] = ("L", ctx.psi_inv.apply(w))
                changed = True
                break
    return cur


def amalgam_is_identity(ctx: AmalgamContext, sylls: Sequence[Syllable]) -> bool:
    red = amalgam_reduce(ctx, sylls)
    return len(red) == 1 and not red[0][1]


def amalgam_inverse(sylls: Sequence[Syllable]) -> List[Syllable]:
    return [(side, inverse(w)) for side, w in reversed(list(sylls))]


def amalgam_commute(ctx: AmalgamContext, x: Sequence[Syllable], y: Sequence[Syllable]) -> bool:
    word = amalgam_inverse(x) + amalgam_inverse(y) + list(x) + list(y)
    return amalgam_is_identity(ctx, word)
