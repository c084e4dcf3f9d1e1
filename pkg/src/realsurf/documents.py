"""JSON surface documents: schema, parsing into model objects, and serialization.

A document is either a ``lattice-pair`` (a Picard lattice with Galois and
holomorphic involutions) or a ``quadric-pencil`` (a conic bundle given by a
symmetric matrix of binary forms).  Involutions may be given as explicit
matrices or by one of the named constructions below.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional, Union

import jsonschema

from .classify import CatalogExtras
from .conicbundle import BaseInvolution, BinaryForm, FiberInvolution, QuadricPencilSurface
from .eqmmp import SurfaceKind, SurfacePair, conic_bundle_involution
from .errors import InputError
from .involutions import (
    LatticeInvolution,
    bertini_matrix,
    geiser_matrix,
    permutation_involution,
    reflection,
)
from .picard import PicardLattice

_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"},
    ]
}
_INT_VECTOR = {"type": "array", "items": {"type": "integer"}}

_INVOLUTION = {
    "oneOf": [
        {"type": "null"},
        {"type": "array", "items": _INT_VECTOR, "minItems": 1},
        {
            "type": "object",
            "properties": {"builtin": {"enum": ["identity", "geiser", "bertini"]}},
            "required": ["builtin"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"permutation": _INT_VECTOR},
            "required": ["permutation"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"reflection": _INT_VECTOR},
            "required": ["reflection"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "conic_bundle": {
                    "type": "object",
                    "properties": {"fiber_perm": _INT_VECTOR, "swaps": _INT_VECTOR},
                    "required": ["fiber_perm", "swaps"],
                    "additionalProperties": False,
                }
            },
            "required": ["conic_bundle"],
            "additionalProperties": False,
        },
    ]
}

_EXTRAS = {
    "type": "object",
    "properties": {
        "genus": {"type": "integer", "minimum": 0},
        "twist": {"enum": [0, 1, 2]},
        "fibers": {"type": "integer", "minimum": 0},
        "g_exceptional": {"type": "boolean"},
        "quadric": {"type": "boolean"},
    },
    "additionalProperties": False,
}

PENCIL_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"const": "quadric-pencil"},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "degree": {"type": "integer", "minimum": 0},
        "degrees": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 3, "maxItems": 3},
        "entries": {
            "type": "array",
            "items": {"type": "array", "items": _RATIONAL, "minItems": 1},
            "minItems": 6,
            "maxItems": 6,
        },
        "base_involution": {"enum": ["none", "negate_t"]},
        "fiber_involution": {"enum": ["none", "negate_x2"]},
        "has_real_point": {"type": "boolean"},
    },
    "required": ["kind", "entries"],
    "oneOf": [{"required": ["degree"]}, {"required": ["degrees"]}],
    "additionalProperties": False,
}

LATTICE_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"const": "lattice-pair"},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "n": {"type": "integer", "minimum": 0, "maximum": 8},
        "galois": _INVOLUTION,
        "holo": _INVOLUTION,
        "has_real_point": {"type": "boolean"},
        "surface_kind": {"enum": [k.value for k in SurfaceKind]},
        "curves": {"type": "array", "items": _INT_VECTOR},
        "fiber_class": _INT_VECTOR,
        "pencil": {"$ref": "#/definitions/pencil"},
        "field_mode": {"enum": ["real", "general"]},
        "catalog_extras": _EXTRAS,
    },
    "required": ["kind", "n"],
    "additionalProperties": False,
}

SURFACE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "SurfaceDocument",
    "definitions": {"pencil": PENCIL_SCHEMA, "lattice": LATTICE_SCHEMA},
    "oneOf": [{"$ref": "#/definitions/lattice"}, {"$ref": "#/definitions/pencil"}],
}

_VALIDATOR = jsonschema.Draft7Validator(SURFACE_SCHEMA)


def validate(doc: Any) -> None:
    """Raise ``InputError`` unless ``doc`` matches the surface schema."""
    if not isinstance(doc, dict) or doc.get("kind") not in ("lattice-pair", "quadric-pencil"):
        raise InputError("document kind must be 'lattice-pair' or 'quadric-pencil'")
    sub = LATTICE_SCHEMA if doc["kind"] == "lattice-pair" else PENCIL_SCHEMA
    schema = dict(sub, definitions=SURFACE_SCHEMA["definitions"])
    errors = sorted(jsonschema.Draft7Validator(schema).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.path) or "<root>"
        raise InputError(f"schema violation at {where}: {e.message}")


def _rational(x) -> Fraction:
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {x!r}") from exc


def parse_pencil(doc: dict) -> QuadricPencilSurface:
    if "degrees" in doc:
        diag = list(doc["degrees"])
    else:
        diag = [doc["degree"]] * 3
    idx = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    forms = []
    for (i, j), coeffs in zip(idx, doc["entries"]):
        if (diag[i] + diag[j]) % 2:
            raise InputError("diagonal degrees must have a common parity")
        forms.append(BinaryForm((diag[i] + diag[j]) // 2, [_rational(c) for c in coeffs]))
    return QuadricPencilSurface.from_upper(
        forms,
        base_involution=BaseInvolution(doc.get("base_involution", "none")),
        fiber_involution=FiberInvolution(doc.get("fiber_involution", "none")),
    )


def _involution(lat: PicardLattice, spec) -> Optional[LatticeInvolution]:
    if spec is None:
        return None
    if isinstance(spec, list):
        return LatticeInvolution.on(lat, spec)
    if "builtin" in spec:
        kind = spec["builtin"]
        if kind == "identity":
            return LatticeInvolution.identity(lat)
        return geiser_matrix(lat) if kind == "geiser" else bertini_matrix(lat)
    if "permutation" in spec:
        return permutation_involution(lat, spec["permutation"])
    if "reflection" in spec:
        return reflection(lat, spec["reflection"])
    cb = spec["conic_bundle"]
    return conic_bundle_involution(lat, cb["fiber_perm"], cb["swaps"])


def parse_lattice(doc: dict) -> SurfacePair:
    lat = PicardLattice(doc["n"])
    curves = doc.get("curves")
    return SurfacePair(
        lattice=lat,
        galois=_involution(lat, doc.get("galois", {"builtin": "identity"})),
        holo=_involution(lat, doc.get("holo")),
        has_real_point=doc.get("has_real_point", True),
        surface_kind=SurfaceKind(doc.get("surface_kind", SurfaceKind.DEL_PEZZO_BLOWUP.value)),
        curves=tuple(tuple(c) for c in curves) if curves is not None else None,
        fiber_class=tuple(doc["fiber_class"]) if "fiber_class" in doc else None,
        conic_model=parse_pencil(dict(doc["pencil"])) if "pencil" in doc else None,
        field_mode=doc.get("field_mode", "real"),
        name=doc.get("name", ""),
    )


def parse_extras(doc: dict) -> CatalogExtras:
    ex = doc.get("catalog_extras", {})
    return CatalogExtras(
        geometric_singular_fibers=ex.get("fibers"),
        fixed_curve_genus=ex.get("genus"),
        twist_index=ex.get("twist"),
        g_exceptional=ex.get("g_exceptional", False),
        quadric=ex.get("quadric", False),
    )


def parse(doc: Any) -> Union[SurfacePair, QuadricPencilSurface]:
    """Validate and build the model object of a document."""
    validate(doc)
    if doc["kind"] == "lattice-pair":
        return parse_lattice(doc)
    return parse_pencil(doc)


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg} at line {exc.lineno}") from exc


def pencil_to_json(surface: QuadricPencilSurface, name: str = "") -> dict:
    """Document for a pencil (weighted degrees are always written as ``degrees``)."""
    out = {
        "kind": "quadric-pencil",
        "degrees": list(surface.diagonal_degrees),
        "entries": [f.to_json() for f in surface.upper()],
        "base_involution": surface.base_involution.value,
        "fiber_involution": surface.fiber_involution.value,
    }
    if name:
        out["name"] = name
    return out
