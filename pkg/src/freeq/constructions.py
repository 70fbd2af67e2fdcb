"""Hyperbolicity decisions for HNN-extensions and amalgams over free base groups.

Sufficient conditions are checked exactly on Stallings graphs; for cyclic
associated subgroups the criterion is an iff and negative verdicts carry a
machine-checked witness (a commuting pair or a Baumslag-Solitar relation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from . import homs, stallings
from .stallings import CoreGraph, build_core, express, free_basis
from .words import Alphabet, Presentation, Word, inverse, mul, power

OUTCOME_HYPERBOLIC = "hyperbolic"
OUTCOME_NOT_HYPERBOLIC = "not-hyperbolic"
OUTCOME_INCONCLUSIVE = "hypotheses-fail-inconclusive"


class IsoError(ValueError):
    """The given basis mapping does not extend to a subgroup isomorphism."""


def _free_base(p: Presentation) -> Alphabet:
    if p.relators:
        raise ValueError("base group must be free (no relators)")
    return p.alphabet


def _default_iso(u_gens, v_gens):
    if len(u_gens) != len(v_gens):
        raise ValueError("generator lists differ in length and no iso mapping given")
    return tuple(zip(u_gens, v_gens))


@dataclass(frozen=True)
class HNNData:
    base: Presentation
    u_generators: tuple
    v_generators: tuple
    iso: tuple = ()  # pairs (u-basis word, image word); defaults to zip

    def __post_init__(self):
        _free_base(self.base)
        if not self.iso:
            object.__setattr__(self, "iso", _default_iso(self.u_generators, self.v_generators))


@dataclass(frozen=True)
class AmalgamData:
    left: Presentation
    right: Presentation
    u_generators: tuple  # words in the left factor
    v_generators: tuple  # words in the right factor
    iso: tuple = ()

    def __post_init__(self):
        _free_base(self.left)
        _free_base(self.right)
        if not self.iso:
            object.__setattr__(self, "iso", _default_iso(self.u_generators, self.v_generators))


@dataclass(frozen=True)
class Verdict:
    outcome: str
    cited: str
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)


def _iso_parts(data):
    if isinstance(data, HNNData):
        dom = cod = _free_base(data.base)
    else:
        dom, cod = _free_base(data.left), _free_base(data.right)
    return dom, cod


def verify_iso(data) -> bool:
    """True iff the basis mapping extends to an isomorphism U -> V.

    The u-side words must be a free basis of U, the images must generate V,
    and the ranks must agree; a surjection between free groups of the same
    finite rank is an isomorphism.
    """
    dom, cod = _iso_parts(data)
    gU = build_core(dom, data.u_generators)
    gV = build_core(cod, data.v_generators)
    if gU.betti == 0 or gV.betti == 0:
        return gU.betti == gV.betti and all(
            bool(u) == bool(v) for u, v in data.iso
        )
    pairs = [(u, v) for u, v in data.iso if u or v]
    if any(not u or not v for u, v in pairs):
        return False
    psi = homs.SubgroupHom(dom, pairs, cod)
    if not psi.valid:
        return False
    if psi.graph.serialize() != gU.serialize():
        return False  # iso's u-words span a proper subgroup of U
    g_img = build_core(cod, [v for _, v in data.iso])
    if g_img.serialize() != gV.serialize():
        return False  # images do not generate V
    return gU.betti == gV.betti


def _cyclic_exponent(graph: CoreGraph, w: Word) -> Optional[int]:
    """Exponent k with w = b^k over the single basis element of a cyclic core."""
    d = express(graph, w)
    if d is None:
        return None
    if any(idx != 0 for idx, _ in d):
        return None
    return sum(s for _, s in d)


def _hnn_witness_intersection(data: HNNData, gU, gV, inter) -> dict:
    """Witness from an infinite intersection U cap g^-1 V g (cyclic case).

    With x = t g the relation x^-1 h^beta x = h^alpha holds; alpha == beta
    gives a commuting pair, otherwise a Baumslag-Solitar relation.  Either
    pattern rules out hyperbolicity and is checked by Britton reduction.
    """
    base = _free_base(data.base)
    ctx = homs.hnn_context(base, data.iso)
    g, h = inter.witness, inter.common_element
    v0 = free_basis(gV)[0]
    alpha = _cyclic_exponent(gV, ctx.psi.apply(h))
    beta = _cyclic_exponent(gV, mul(g, h, inverse(g)))
    x = [("t", 1)] + list(g)
    lhs = homs.hnn_inverse(x) + list(power(h, beta)) + x + list(power(h, -alpha))
    assert homs.hnn_is_identity(ctx, lhs), "witness relation failed Britton check"
    kind = "commuting-pair" if abs(alpha) == abs(beta) else "baumslag-solitar-relation"
    return {
        "kind": kind,
        "x": "t" + base.format(g) if g else "t",
        "y": base.format(h),
        "relation": f"x^-1 y^{beta} x = y^{alpha}",
        "verified": True,
    }


def _hnn_witness_pair(data: HNNData, gU, gV, csU, csV) -> dict:
    """Commuting pair ((t g2^2 t^-1 g1^2)^2, c) when neither side is conjugate
    separated, checked by Britton reduction."""
    base = _free_base(data.base)
    ctx = homs.hnn_context(base, data.iso)
    g1, g2 = csU.witness, csV.witness
    c = free_basis(gU)[0]
    x = (
        [("t", 1)]
        + list(power(g2, 2))
        + [("t", -1)]
        + list(power(g1, 2))
    ) * 2
    y = list(c)
    assert homs.hnn_commute(ctx, x, y), "witness pair failed commutation check"
    return {
        "kind": "commuting-pair",
        "x": "(t" + base.format(power(g2, 2)) + "T" + base.format(power(g1, 2)) + ")^2",
        "y": base.format(c),
        "verified": True,
    }


def check_separated_hnn(data: HNNData) -> Verdict:
    """Decide hyperbolicity of <G, t | U^t = V> for free G per the separation test."""
    if not verify_iso(data):
        raise IsoError("associated subgroup mapping is not an isomorphism")
    base = _free_base(data.base)
    gU = build_core(base, data.u_generators)
    gV = build_core(base, data.v_generators)
    csU = stallings.is_conjugate_separated(gU)
    csV = stallings.is_conjugate_separated(gV)
    inter = stallings.conjugate_intersections_finite(gU, gV)
    details = {
        "u_conjugate_separated": csU.holds,
        "v_conjugate_separated": csV.holds,
        "intersections_finite": inter.holds,
        "u_rank": gU.betti,
        "v_rank": gV.betti,
    }
    separated = (csU.holds or csV.holds) and inter.holds
    details["separated"] = separated
    if separated:
        cited = "Corollary 3" if gU.betti == 0 else "Corollary 5"
        return Verdict(OUTCOME_HYPERBOLIC, cited, details=details)
    cyclic = gU.betti <= 1 and gV.betti <= 1
    if not cyclic:
        return Verdict(OUTCOME_INCONCLUSIVE, "Theorem 1", details=details)
    if not inter.holds:
        witness = _hnn_witness_intersection(data, gU, gV, inter)
    else:
        witness = _hnn_witness_pair(data, gU, gV, csU, csV)
    return Verdict(OUTCOME_NOT_HYPERBOLIC, "Corollary 1", witness=witness, details=details)


def _amalgam_witness_pair(data: AmalgamData, gU, csU, csV) -> dict:
    """Commuting pair ((g1 g2)^2, z) when neither side is conjugate separated."""
    left, right = _free_base(data.left), _free_base(data.right)
    ctx = homs.amalgam_context(left, right, data.iso)
    g1, g2 = csU.witness, csV.witness
    z = free_basis(gU)[0]
    x = [("L", g1), ("R", g2)] * 2
    y = [("L", z)]
    assert homs.amalgam_commute(ctx, x, y), "witness pair failed commutation check"
    return {
        "kind": "commuting-pair",
        "x": f"({left.format(g1)}*{right.format(g2)})^2",
        "y": left.format(z),
        "verified": True,
    }


def check_amalgam(data: AmalgamData) -> Verdict:
    """Decide hyperbolicity of G1 *_{U=V} G2 for free factors."""
    if not verify_iso(data):
        raise IsoError("amalgamated subgroup mapping is not an isomorphism")
    left, right = _free_base(data.left), _free_base(data.right)
    gU = build_core(left, data.u_generators)
    gV = build_core(right, data.v_generators)
    csU = stallings.is_conjugate_separated(gU)
    csV = stallings.is_conjugate_separated(gV)
    details = {
        "u_conjugate_separated": csU.holds,
        "v_conjugate_separated": csV.holds,
        "u_rank": gU.betti,
        "v_rank": gV.betti,
    }
    if gU.betti == 0:
        return Verdict(OUTCOME_HYPERBOLIC, "Corollary 3", details=details)
    if csU.holds or csV.holds:
        details["separated_side"] = "left" if csU.holds else "right"
        return Verdict(OUTCOME_HYPERBOLIC, "Theorem 2", details=details)
    if gU.betti == 1 and gV.betti == 1:
        witness = _amalgam_witness_pair(data, gU, csU, csV)
        return Verdict(OUTCOME_NOT_HYPERBOLIC, "Corollary 2", witness=witness, details=details)
    return Verdict(OUTCOME_INCONCLUSIVE, "Theorem 2", details=details)


# ---------------------------------------------------------------------------
# JSON construction files
# ---------------------------------------------------------------------------


def _presentation_from_json(obj) -> Presentation:
    alphabet = Alphabet(tuple(obj["generators"]))
    relators = tuple(alphabet.parse(r) for r in obj.get("relators", []))
    return Presentation(alphabet, relators)


def hnn_from_json(obj) -> HNNData:
    base = _presentation_from_json(obj["base"])
    a = base.alphabet
    iso = tuple((a.parse(u), a.parse(v)) for u, v in obj.get("iso", []))
    return HNNData(
        base=base,
        u_generators=tuple(a.parse(w) for w in obj["u_generators"]),
        v_generators=tuple(a.parse(w) for w in obj["v_generators"]),
        iso=iso,
    )


def amalgam_from_json(obj) -> AmalgamData:
    left = _presentation_from_json(obj["left"])
    right = _presentation_from_json(obj["right"])
    iso = tuple(
        (left.alphabet.parse(u), right.alphabet.parse(v)) for u, v in obj.get("iso", [])
    )
    return AmalgamData(
        left=left,
        right=right,
        u_generators=tuple(left.alphabet.parse(w) for w in obj["u_generators"]),
        v_generators=tuple(right.alphabet.parse(w) for w in obj["v_generators"]),
        iso=iso,
    )


def verdict_to_json(v: Verdict) -> dict:
    out = {"outcome": v.outcome, "cited": v.cited, "details": v.details}
    if v.witness is not None:
        out["witness"] = v.witness
    return out
