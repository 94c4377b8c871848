"""JSON Schemas for task documents, one per ``kind``.

Every document is ``{"kind": ..., "payload": {...}, "seed"?: int, "task"?: str}``.
Shared building blocks:

* a finite set is an array of distinct strings or ``{"range": n}`` (labels "0".."n-1");
* a finite map is an object from labels to labels, or a rule
  ``{"rule": "identity"}``, ``{"rule": "mod", "modulus": n}``,
  ``{"rule": "constant", "value": label}``;
* a group is a list of cyclic orders, ``[]`` being the trivial group;
* polynomials are strings in the term grammar ``c * x^a * u^b``.
"""

from __future__ import annotations

import copy
import json

from .errors import UnknownKind

DIALECT = "https://json-schema.org/draft/2020-12/schema"

RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
LABEL = {"type": "string"}

DEFS = {
    "rational": RATIONAL,
    "set": {"oneOf": [
        {"type": "array", "items": LABEL, "uniqueItems": True},
        {"type": "object", "properties": {"range": {"type": "integer", "minimum": 0}},
         "required": ["range"], "additionalProperties": False},
    ]},
    "map": {"oneOf": [
        {"type": "object", "properties": {"rule": {"const": "identity"}},
         "required": ["rule"], "additionalProperties": False},
        {"type": "object", "properties": {"rule": {"const": "mod"},
                                          "modulus": {"type": "integer", "minimum": 1}},
         "required": ["rule", "modulus"], "additionalProperties": False},
        {"type": "object", "properties": {"rule": {"const": "constant"}, "value": LABEL},
         "required": ["rule", "value"], "additionalProperties": False},
        {"type": "object", "not": {"required": ["rule"]}, "additionalProperties": LABEL},
    ]},
    "bundle": {"type": "object", "properties": {
        "name": {"type": "string"},
        "total": {"$ref": "#/$defs/set"},
        "base": {"$ref": "#/$defs/set"},
        "projection": {"$ref": "#/$defs/map"},
    }, "required": ["total", "base", "projection"], "additionalProperties": False},
    "bundle_morphism": {"type": "object", "properties": {
        "total_map": {"$ref": "#/$defs/map"},
        "base_map": {"$ref": "#/$defs/map"},
    }, "required": ["total_map", "base_map"], "additionalProperties": False},
    "group": {"oneOf": [
        {"type": "object", "properties": {"cyclic": {"type": "integer", "minimum": 1}},
         "required": ["cyclic"], "additionalProperties": False},
        {"type": "object", "properties": {
            "elements": {"type": "array", "items": LABEL, "minItems": 1, "uniqueItems": True},
            "table": {"type": "array", "items": {"type": "array", "items": LABEL}},
            "identity": LABEL,
        }, "required": ["elements", "table", "identity"], "additionalProperties": False},
    ]},
    "action": {"oneOf": [
        {"type": "object", "properties": {
            "group": {"$ref": "#/$defs/group"},
            "rule": {"const": "add_mod"},
            "modulus": {"type": "integer", "minimum": 1},
            "step": {"type": "integer"},
        }, "required": ["group", "rule", "modulus", "step"], "additionalProperties": False},
        {"type": "object", "properties": {
            "group": {"$ref": "#/$defs/group"},
            "images": {"type": "object", "additionalProperties": {"type": "array", "items": LABEL}},
        }, "required": ["group", "images"], "additionalProperties": False},
    ]},
    "chain": {"type": "object", "properties": {
        "name": {"type": "string"},
        "bundles": {"type": "array", "items": {"$ref": "#/$defs/bundle"}, "minItems": 1},
        "links": {"type": "array", "items": {"$ref": "#/$defs/bundle_morphism"}},
    }, "required": ["bundles", "links"]},
    "abgroup": {"type": "array", "items": {"type": "integer", "minimum": 1}},
    "hom": {"type": "object", "properties": {
        "matrix": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "role": {"enum": ["boundary"]},
    }, "required": ["matrix"], "additionalProperties": False},
    "sequence": {"type": "object", "properties": {
        "groups": {"type": "array", "items": {"$ref": "#/$defs/abgroup"}, "minItems": 1},
        "maps": {"type": "array", "items": {"$ref": "#/$defs/hom"}},
    }, "required": ["groups", "maps"], "additionalProperties": False},
    "point": {"type": "array", "items": {"$ref": "#/$defs/rational"}, "minItems": 1},
    "spec": {"type": "object", "properties": {
        "A": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/rational"}}},
        "b": {"$ref": "#/$defs/point"},
        "fibre_map": {"type": "string"},
    }, "required": ["A", "b", "fibre_map"], "additionalProperties": False},
}

PAYLOADS = {
    "category": {"type": "object", "properties": {
        "name": {"type": "string"},
        "objects": {"type": "array", "items": LABEL, "uniqueItems": True},
        "morphisms": {"type": "array", "items": {"type": "object", "properties": {
            "id": LABEL, "source": LABEL, "target": LABEL,
        }, "required": ["id", "source", "target"], "additionalProperties": False}},
        "identities": {"type": "object", "additionalProperties": LABEL},
        "compose": {"type": "array", "items": {"type": "array", "items": LABEL,
                                               "minItems": 3, "maxItems": 3}},
        "subobjects": {"type": "array", "items": LABEL, "uniqueItems": True},
    }, "required": ["objects", "morphisms", "identities", "compose", "subobjects"],
        "additionalProperties": False},
    "bundle_family": {"type": "object", "properties": {
        "bundles": {"type": "array", "items": {"$ref": "#/$defs/bundle"}, "minItems": 1},
        "choice": {"enum": ["inclusions", "monos"]},
        "method": {"enum": ["auto", "enumerate", "structural"]},
    }, "required": ["bundles"], "additionalProperties": False},
    "chain": {"allOf": [{"$ref": "#/$defs/chain"}, {"type": "object", "properties": {
        "name": True, "bundles": True, "links": True,
        "actions": {"type": "array", "items": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/action"}]}},
    }, "additionalProperties": False}]},
    "chain_family": {"type": "object", "properties": {
        "chains": {"type": "array", "items": {"$ref": "#/$defs/chain"}, "minItems": 1},
        "cap": {"type": "integer", "minimum": 1},
    }, "required": ["chains"], "additionalProperties": False},
    "fibre_chain": {"type": "object", "properties": {
        "bundles": {"type": "array", "items": {"$ref": "#/$defs/bundle"}, "minItems": 1},
        "base_point": LABEL,
    }, "required": ["bundles", "base_point"], "additionalProperties": False},
    "sequence": {"$ref": "#/$defs/sequence"},
    "ladder": {"type": "object", "properties": {
        "top": {"$ref": "#/$defs/sequence"},
        "bottom": {"$ref": "#/$defs/sequence"},
        "verticals": {"type": "array", "items": {"$ref": "#/$defs/hom"}},
        "embeddings": {"type": "array", "items": {"$ref": "#/$defs/hom"}},
    }, "required": ["top", "bottom", "verticals"], "additionalProperties": False},
    "jet_task": {"type": "object", "properties": {
        "command": {"enum": ["jet_of", "project", "prolong", "curve_probe", "equivalent", "descriptor"]},
        "base_dim": {"type": "integer", "minimum": 1},
        "section": {"type": "string"},
        "other": {"type": "string"},
        "point": {"$ref": "#/$defs/point"},
        "order": {"type": "integer", "minimum": 0},
        "to_order": {"type": "integer", "minimum": 0},
        "kmax": {"type": "integer", "minimum": 0},
        "trials": {"type": "integer", "minimum": 1},
        "spec": {"$ref": "#/$defs/spec"},
        "expected": True,
    }, "required": ["command", "base_dim"], "additionalProperties": False,
        "allOf": [
            {"if": {"properties": {"command": {"enum": ["jet_of", "project", "prolong"]}}},
             "then": {"required": ["section", "point", "order"]}},
            {"if": {"properties": {"command": {"const": "project"}}}, "then": {"required": ["to_order"]}},
            {"if": {"properties": {"command": {"const": "prolong"}}}, "then": {"required": ["spec"]}},
            {"if": {"properties": {"command": {"enum": ["curve_probe", "equivalent"]}}},
             "then": {"required": ["section", "other", "point", "order"]}},
            {"if": {"properties": {"command": {"const": "descriptor"}}}, "then": {"required": ["kmax"]}},
        ]},
}

KINDS = tuple(PAYLOADS)


def schema_for(kind: str) -> dict:
    if kind not in PAYLOADS:
        raise UnknownKind(kind)
    return {
        "$schema": DIALECT,
        "$id": f"bunchain:{kind}",
        "title": f"bunchain {kind} task document",
        "type": "object",
        "properties": {
            "kind": {"const": kind},
            "task": {"type": "string"},
            "seed": {"type": "integer"},
            "payload": copy.deepcopy(PAYLOADS[kind]),
        },
        "required": ["kind", "payload"],
        "additionalProperties": False,
        "$defs": copy.deepcopy(DEFS),
    }


def emit_schema(kind: str) -> str:
    """Schema text for ``kind``; stable byte for byte across runs."""
    return json.dumps(schema_for(kind), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
