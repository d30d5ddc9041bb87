"""JSON documents: schemas, validation with JSON-pointer paths, canonical output.

Canonical JSON has sorted keys, no insignificant whitespace and a trailing
newline, so a stored document is byte-identical however its input was laid
out.
"""
from __future__ import annotations

import json
from pathlib import Path

from jsonschema import Draft202012Validator

from .bm import FiniteSpace
from .cantor import BlockSystem, TrieChain
from .errors import InputError, SchemaError
from .ideal import FamilySpec, IdealInstance, thaw_atom
from .paths import Coloring, FinitePoset

_INTS = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_BITS = {"type": "string", "pattern": "^[01]*$"}

SCHEMAS = {
    "instance": {
        "type": "object",
        "required": ["ground", "generators", "sigma_stage_bound"],
        "additionalProperties": False,
        "properties": {
            "ground": {"type": "array"},
            "generators": {"type": "array", "items": {"type": "array"}},
            "sigma_stage_bound": {"type": "integer", "minimum": 1},
            "j_width": {"type": "integer", "minimum": 1},
            "family": {"type": "array", "items": _INTS},
        },
    },
    "block_system": {
        "type": "object",
        "required": ["cuts", "word"],
        "additionalProperties": False,
        "properties": {"cuts": _INTS, "word": _BITS},
    },
    "trie_chain": {
        "type": "object",
        "required": ["tries"],
        "additionalProperties": False,
        "properties": {"tries": {"type": "array", "minItems": 1,
                                 "items": {"type": "array", "items": _BITS}}},
    },
    "poset": {
        "type": "object",
        "required": ["nodes", "less"],
        "additionalProperties": False,
        "properties": {
            "nodes": {"type": "array"},
            "less": {"type": "array", "items": {"type": "array", "minItems": 2,
                                                 "maxItems": 2, "items": {"type": "integer"}}},
        },
    },
    "coloring": {
        "type": "object",
        "required": ["k", "table"],
        "additionalProperties": False,
        "properties": {
            "k": {"type": "integer", "minimum": 1},
            "table": {"type": "array", "items": {
                "type": "object", "required": ["window", "color"],
                "additionalProperties": False,
                "properties": {"window": {"type": "array"}, "color": {}}}},
        },
    },
    "space": {
        "type": "object",
        "required": ["points", "opens"],
        "additionalProperties": False,
        "properties": {"points": {"type": "array"},
                       "opens": {"type": "array", "items": {"type": "array"}}},
    },
    "decomposition": {
        "type": "object",
        "additionalProperties": False,
        "patternProperties": {"^[0-9]+$": {"type": "array", "items": {"type": "array"}}},
    },
}


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"),
                      allow_nan=False) + "\n"


def parse(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                          "") from None


def read(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise InputError(f"{path} is not UTF-8") from None
    return parse(text)


def write(path, doc) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def validate(doc, kind: str):
    """Raise SchemaError at the first violation (in path order)."""
    errors = sorted(Draft202012Validator(SCHEMAS[kind]).iter_errors(doc),
                    key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        e = errors[0]
        pointer = "".join(f"/{p}" for p in e.absolute_path)
        raise SchemaError(e.message, pointer)
    return doc


def load(path, kind: str):
    return validate(read(path), kind)


# typed documents -----------------------------------------------------------------

def instance_from_doc(doc) -> tuple:
    """``(IdealInstance, FamilySpec or None)``."""
    validate(doc, "instance")
    inst = IdealInstance.build(doc["ground"], doc["generators"], doc["sigma_stage_bound"],
                               doc.get("j_width"))
    known = inst.ground.position
    for i, gen in enumerate(inst.generators):
        for a in gen:
            if a not in known:
                raise SchemaError(f"atom {thaw_atom(a)!r} is not in the ground set",
                                  f"/generators/{i}")
    fam = None
    if "family" in doc:
        for i, lst in enumerate(doc["family"]):
            if any(s >= len(inst.generators) for s in lst):
                raise SchemaError("generator index out of range", f"/family/{i}")
        fam = FamilySpec.from_stage_lists(inst, doc["family"])
    return inst, fam


def instance_to_doc(inst: IdealInstance, fam: FamilySpec | None = None) -> dict:
    doc = {"ground": [thaw_atom(a) for a in inst.ground.elements],
           "generators": [[thaw_atom(a) for a in inst.ground.sort(g)] for g in inst.generators],
           "sigma_stage_bound": inst.sigma_stage_bound}
    if inst.j_width is not None:
        doc["j_width"] = inst.j_width
    if fam is not None and fam.stages is not None:
        doc["family"] = [list(s) for s in fam.stages]
    return doc


def canonical_instance(path) -> str:
    """Load and store again: the canonical text of an instance file."""
    return dumps(instance_to_doc(*instance_from_doc(read(path))))


def block_system(path) -> BlockSystem:
    return BlockSystem.from_json(load(path, "block_system"))


def trie_chain(path) -> TrieChain:
    return TrieChain.from_json(load(path, "trie_chain"))


def poset(path) -> FinitePoset:
    return FinitePoset.from_json(load(path, "poset"))


def space(path) -> FiniteSpace:
    return FiniteSpace.from_json(load(path, "space"))


def coloring_from_doc(doc) -> Coloring:
    validate(doc, "coloring")
    table = {}
    for i, row in enumerate(doc["table"]):
        w = tuple(row["window"])
        if len(w) != doc["k"]:
            raise SchemaError(f"window has {len(w)} entries, expected {doc['k']}",
                              f"/table/{i}/window")
        table[w] = row["color"]
    return Coloring.from_table(doc["k"], table)


def coloring_to_doc(k: int, table: dict) -> dict:
    return {"k": k, "table": [{"window": list(w), "color": c}
                              for w, c in sorted(table.items(), key=lambda kv: repr(kv[0]))]}
