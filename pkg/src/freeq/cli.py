"""Command-line interface.

Exit codes: 0 = decided/computed, 1 = negative decision, 2 = absent within
the search bound, 3 = input error.  With --json every result is a single
JSON document (sorted keys, so byte-identical across runs); rationals are
always printed as exact "p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import jsonschema

from . import constructions, qcompletion, stallings, tower, words
from .qcompletion import QSession, parse_qword
from .tower import ResourceCapError, Tower
from .words import Alphabet, Presentation, WordSyntaxError

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ABSENT = 2
EXIT_INPUT = 3


class InputError(Exception):
    """User-facing input problem with a machine-readable code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


CONSTRUCTION_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": ["hnn", "amalgam", "tower"]}},
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "hnn"}}},
            "then": {
                "required": ["base", "u_generators", "v_generators"],
                "properties": {
                    "base": {"$ref": "#/$defs/presentation"},
                    "u_generators": {"$ref": "#/$defs/wordlist"},
                    "v_generators": {"$ref": "#/$defs/wordlist"},
                    "iso": {"$ref": "#/$defs/pairs"},
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "amalgam"}}},
            "then": {
                "required": ["left", "right", "u_generators", "v_generators"],
                "properties": {
                    "left": {"$ref": "#/$defs/presentation"},
                    "right": {"$ref": "#/$defs/presentation"},
                    "u_generators": {"$ref": "#/$defs/wordlist"},
                    "v_generators": {"$ref": "#/$defs/wordlist"},
                    "iso": {"$ref": "#/$defs/pairs"},
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "tower"}}},
            "then": {
                "required": ["base", "steps"],
                "properties": {
                    "base": {"$ref": "#/$defs/presentation"},
                    "steps": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["v", "m"],
                            "properties": {
                                "v": {"type": "string"},
                                "m": {"type": "integer", "minimum": 1},
                                "name": {"type": "string"},
                            },
                        },
                    },
                },
            },
        },
    ],
    "$defs": {
        "presentation": {
            "type": "object",
            "required": ["generators"],
            "properties": {
                "generators": {
                    "type": "array",
                    "items": {"type": "string", "pattern": "^[a-z]$"},
                    "minItems": 1,
                },
                "relators": {"$ref": "#/$defs/wordlist"},
            },
        },
        "wordlist": {"type": "array", "items": {"type": "string"}},
        "pairs": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "string"},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
}


def _rat(x) -> str:
    return str(Fraction(x))


def _load_construction(path: str, kinds) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as ex:
        raise InputError("io", f"cannot read {path}: {ex}")
    except json.JSONDecodeError as ex:
        raise InputError("parse", f"{path}: {ex}")
    try:
        jsonschema.validate(obj, CONSTRUCTION_SCHEMA)
    except jsonschema.ValidationError as ex:
        raise InputError("schema", f"{path}: {ex.message}")
    if obj["kind"] not in kinds:
        raise InputError("schema", f"{path}: expected kind in {sorted(kinds)}, got {obj['kind']!r}")
    return obj


def _alphabet(text: str) -> Alphabet:
    try:
        return Alphabet(tuple(text))
    except ValueError as ex:
        raise InputError("parse", str(ex))


def _parse_word(alphabet: Alphabet, text: str):
    try:
        return alphabet.parse(text)
    except WordSyntaxError as ex:
        raise InputError("parse", str(ex))


class _Output:
    """Accumulates one result document; prints JSON or key: value lines."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.doc = {}

    def put(self, key, value):
        self.doc[key] = value

    def emit(self):
        if self.as_json:
            print(json.dumps(self.doc, sort_keys=True, indent=2))
        else:
            for key, value in self.doc.items():
                if isinstance(value, (dict, list)):
                    value = json.dumps(value, sort_keys=True)
                print(f"{key}: {value}")


# -- word --------------------------------------------------------------------


def _cmd_word_reduce(args, out: _Output) -> int:
    a = _alphabet(args.base)
    w = _parse_word(a, args.word)
    out.put("reduced", a.format(w))
    out.put("length", len(w))
    return EXIT_OK


def _cmd_word_conj(args, out: _Output) -> int:
    a = _alphabet(args.base)
    w1 = _parse_word(a, args.word1)
    w2 = _parse_word(a, args.word2)
    c = words.conjugacy_witness(w1, w2)
    out.put("conjugate", c is not None)
    if c is None:
        return EXIT_NEGATIVE
    out.put("conjugator", a.format(c))
    return EXIT_OK


def _cmd_word_root(args, out: _Output) -> int:
    a = _alphabet(args.base)
    w = _parse_word(a, args.word)
    cyc = words.cyclic_reduce(w)
    if not cyc.core:
        raise InputError("invalid-input", "the identity has no primitive root")
    root, exp = words.extract_root(cyc.core)
    out.put("root", a.format(words.conjugate(root, words.inverse(cyc.conjugator))))
    out.put("exponent", exp)
    out.put("primitive", exp == 1)
    return EXIT_OK


def _cmd_word_area(args, out: _Output) -> int:
    a = _alphabet(args.base)
    relators = tuple(words.cyclic_reduce(_parse_word(a, r)).core for r in args.relator)
    if not relators:
        raise InputError("usage", "word area needs at least one --relator")
    p = Presentation(a, relators)
    w = _parse_word(a, args.word)
    area = words.dehn_area(p, w, args.area_bound)
    out.put("area_bound", args.area_bound)
    if area is None:
        out.put("area", None)
        out.put("status", "absent-within-bound")
        return EXIT_ABSENT
    out.put("area", area)
    out.put("status", "decided")
    return EXIT_OK


# -- subgroup ----------------------------------------------------------------


def _subgroup_core(args):
    a = _alphabet(args.base)
    gens = [_parse_word(a, g) for g in args.generators]
    return a, stallings.build_core(a, gens)


def _cmd_subgroup_build(args, out: _Output) -> int:
    a, g = _subgroup_core(args)
    out.put("rank", g.betti)
    out.put("vertices", g.num_vertices)
    out.put("basis", [a.format(b) for b in stallings.free_basis(g)])
    out.put("graph", g.serialize())
    return EXIT_OK


def _cmd_subgroup_member(args, out: _Output) -> int:
    a, g = _subgroup_core(args)
    w = _parse_word(a, args.word)
    member = stallings.contains(g, w)
    out.put("member", member)
    return EXIT_OK if member else EXIT_NEGATIVE


def _cmd_subgroup_malnormal(args, out: _Output) -> int:
    a, g = _subgroup_core(args)
    res = stallings.is_conjugate_separated(g)
    out.put("malnormal", res.holds)
    if not res.holds:
        out.put("witness", a.format(res.witness))
        out.put("common_element", a.format(res.common_element))
        return EXIT_NEGATIVE
    return EXIT_OK


def _cmd_subgroup_qc_const(args, out: _Output) -> int:
    _, g = _subgroup_core(args)
    out.put("quasiconvexity_constant", _rat(stallings.quasiconvexity_constant(g)))
    return EXIT_OK


# -- constructions -----------------------------------------------------------


def _verdict_exit(v: constructions.Verdict) -> int:
    if v.outcome == constructions.OUTCOME_HYPERBOLIC:
        return EXIT_OK
    if v.outcome == constructions.OUTCOME_NOT_HYPERBOLIC:
        return EXIT_NEGATIVE
    return EXIT_ABSENT


def _cmd_check_hnn(args, out: _Output) -> int:
    obj = _load_construction(args.file, {"hnn"})
    try:
        data = constructions.hnn_from_json(obj)
        verdict = constructions.check_separated_hnn(data)
    except (WordSyntaxError, constructions.IsoError, ValueError) as ex:
        raise InputError("invalid-input", str(ex))
    for key, value in constructions.verdict_to_json(verdict).items():
        out.put(key, value)
    return _verdict_exit(verdict)


def _cmd_check_amalgam(args, out: _Output) -> int:
    obj = _load_construction(args.file, {"amalgam"})
    try:
        data = constructions.amalgam_from_json(obj)
        verdict = constructions.check_amalgam(data)
    except (WordSyntaxError, constructions.IsoError, ValueError) as ex:
        raise InputError("invalid-input", str(ex))
    for key, value in constructions.verdict_to_json(verdict).items():
        out.put(key, value)
    return _verdict_exit(verdict)


# -- tower -------------------------------------------------------------------


def _tower_from_json(obj) -> Tower:
    a = Alphabet(tuple(obj["base"]["generators"]))
    if obj["base"].get("relators"):
        raise InputError("invalid-input", "tower base must be a free presentation")
    t = Tower(a)
    for i, step in enumerate(obj["steps"]):
        session = QSession(a)
        session.tower = t
        try:
            v = session.normalize(step["v"])
            t = session.tower.extend_centralizer(
                tower.lift(session.tower, v, session.tower.level),
                step["m"],
                name=step.get("name"),
            )
        except (WordSyntaxError, ValueError) as ex:
            raise InputError("invalid-input", f"step {i}: {ex}")
    return t


def _cmd_tower_show(args, out: _Output) -> int:
    obj = _load_construction(args.file, {"tower"})
    t = _tower_from_json(obj)
    out.put("base", list(t.base.names))
    out.put("level", t.level)
    steps = []
    for i, step in enumerate(t.steps):
        steps.append(
            {
                "name": step.name,
                "m": step.m,
                "v": tower.serialize(t, tower.lift(t, step.v, i)),
                "root": tower.serialize(t, tower.lift(t, t.root(i + 1), t.level)),
            }
        )
    out.put("steps", steps)
    out.put("aliases", [[name, tower.serialize(t, e)] for name, e in t.aliases])
    return EXIT_OK


# -- vn ----------------------------------------------------------------------


def _cmd_vn_list(args, out: _Output) -> int:
    a = _alphabet(args.base)
    try:
        ti = qcompletion.tower_level(a, args.n, max_level=max(args.max_level, args.n))
    except ResourceCapError as ex:
        raise InputError("resource-cap", str(ex))
    table = ti.tables[args.n - 1]
    out.put("n", args.n)
    out.put("elements", list(table.texts))
    out.put("count", len(table.entries))
    out.put("generator_count", ti.generator_count)
    return EXIT_OK


# -- qword -------------------------------------------------------------------


def _qsession(args) -> QSession:
    return QSession(_alphabet(args.base), max_level=args.max_level, k_bound=args.k_bound)


def _parse_q(session: QSession, text: str):
    try:
        return parse_qword(session.alphabet, text)
    except WordSyntaxError as ex:
        raise InputError("parse", str(ex))


def _cmd_qword_normalize(args, out: _Output) -> int:
    session = _qsession(args)
    q = _parse_q(session, args.expr)
    try:
        e = session.normalize(q)
    except ResourceCapError as ex:
        raise InputError("resource-cap", str(ex))
    out.put("canonical", session.canonical_text(e))
    out.put("level", session.locate(e))
    out.put("depth", qcompletion.depth(q))
    return EXIT_OK


def _cmd_qword_equal(args, out: _Output) -> int:
    session = _qsession(args)
    q1 = _parse_q(session, args.expr1)
    q2 = _parse_q(session, args.expr2)
    try:
        eq = session.q_equal(q1, q2)
        out.put("equal", eq)
        out.put("canonical", session.canonical_text(session.normalize(q1)))
    except ResourceCapError as ex:
        raise InputError("resource-cap", str(ex))
    return EXIT_OK if eq else EXIT_NEGATIVE


def _cmd_qword_conj(args, out: _Output) -> int:
    session = _qsession(args)
    q1 = _parse_q(session, args.expr1)
    q2 = _parse_q(session, args.expr2)
    try:
        status, c = session.q_conjugate(q1, q2)
    except ResourceCapError as ex:
        raise InputError("resource-cap", str(ex))
    out.put("status", status)
    if status == tower.CONJUGATE:
        out.put("conjugator", tower.serialize(session.tower, session.top(c)))
        return EXIT_OK
    return EXIT_NEGATIVE if status == tower.DISTINCT else EXIT_ABSENT


# -- parser ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freeq",
        description="Exact computation in free groups, free constructions, and Q-completions.",
    )
    parser.add_argument("--json", action="store_true", help="emit a JSON document")
    sub = parser.add_subparsers(dest="command", required=True)

    def base_flag(p):
        p.add_argument("--base", default="ab", help="base alphabet letters (default: ab)")

    word = sub.add_parser("word", help="free-group word operations")
    wsub = word.add_subparsers(dest="verb", required=True)
    p = wsub.add_parser("reduce", help="freely reduce a word")
    base_flag(p)
    p.add_argument("word")
    p.set_defaults(func=_cmd_word_reduce)
    p = wsub.add_parser("conj", help="decide conjugacy, with witness")
    base_flag(p)
    p.add_argument("word1")
    p.add_argument("word2")
    p.set_defaults(func=_cmd_word_conj)
    p = wsub.add_parser("root", help="primitive root and exponent")
    base_flag(p)
    p.add_argument("word")
    p.set_defaults(func=_cmd_word_root)
    p = wsub.add_parser("area", help="minimal relator area of a trivial word")
    base_flag(p)
    p.add_argument("word")
    p.add_argument("--relator", action="append", default=[], help="relator word (repeatable)")
    p.add_argument("--area-bound", type=int, default=8, help="search cap (default: 8)")
    p.set_defaults(func=_cmd_word_area)

    subgroup = sub.add_parser("subgroup", help="finitely generated subgroup operations")
    ssub = subgroup.add_subparsers(dest="verb", required=True)
    p = ssub.add_parser("build", help="core graph, rank, and intrinsic basis")
    base_flag(p)
    p.add_argument("generators", nargs="+")
    p.set_defaults(func=_cmd_subgroup_build)
    p = ssub.add_parser("member", help="subgroup membership of a word")
    base_flag(p)
    p.add_argument("word")
    p.add_argument("generators", nargs="+")
    p.set_defaults(func=_cmd_subgroup_member)
    p = ssub.add_parser("malnormal", help="conjugate separation (malnormality)")
    base_flag(p)
    p.add_argument("generators", nargs="+")
    p.set_defaults(func=_cmd_subgroup_malnormal)
    p = ssub.add_parser("qc-const", help="quasiconvexity constant")
    base_flag(p)
    p.add_argument("generators", nargs="+")
    p.set_defaults(func=_cmd_subgroup_qc_const)

    p = sub.add_parser("check-hnn", help="hyperbolicity of a separated HNN-extension")
    p.add_argument("file", help="construction JSON file (kind: hnn)")
    p.set_defaults(func=_cmd_check_hnn)

    p = sub.add_parser("check-amalgam", help="hyperbolicity of an amalgam of free groups")
    p.add_argument("file", help="construction JSON file (kind: amalgam)")
    p.set_defaults(func=_cmd_check_amalgam)

    twr = sub.add_parser("tower", help="iterated centralizer-extension towers")
    tsub = twr.add_subparsers(dest="verb", required=True)
    p = tsub.add_parser("show", help="build a tower from a file and print its steps")
    p.add_argument("file", help="construction JSON file (kind: tower)")
    p.set_defaults(func=_cmd_tower_show)

    vn = sub.add_parser("vn", help="root-class tables")
    vsub = vn.add_subparsers(dest="verb", required=True)
    p = vsub.add_parser("list", help="primitive conjugacy-class table at level n")
    base_flag(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-level", type=int, default=3, help="enumeration cap (default: 3)")
    p.set_defaults(func=_cmd_vn_list)

    qword = sub.add_parser("qword", help="Q-word normalization and decisions")
    qsub = qword.add_subparsers(dest="verb", required=True)

    def q_flags(p):
        base_flag(p)
        p.add_argument("--max-level", type=int, default=3, help="root-index cap (default: 3)")
        p.add_argument("--k-bound", type=int, default=None, help="conjugacy twist search bound")

    p = qsub.add_parser("normalize", help="canonical form of a Q-word")
    q_flags(p)
    p.add_argument("expr")
    p.set_defaults(func=_cmd_qword_normalize)
    p = qsub.add_parser("equal", help="decide equality of two Q-words")
    q_flags(p)
    p.add_argument("expr1")
    p.add_argument("expr2")
    p.set_defaults(func=_cmd_qword_equal)
    p = qsub.add_parser("conj", help="decide conjugacy of two Q-words")
    q_flags(p)
    p.add_argument("expr1")
    p.add_argument("expr2")
    p.set_defaults(func=_cmd_qword_conj)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    out = _Output(args.json)
    try:
        code = args.func(args, out)
    except InputError as ex:
        out.put("error", {"code": ex.code, "message": str(ex)})
        out.emit()
        return EXIT_INPUT
    out.emit()
    return code


def main() -> None:
    sys.exit(run())
