"""Eigenform data files: schema validation and ingestion.

The file shape mirrors public Hilbert-newform eigenvalue tables closely
enough that converting an external dump is a small scripting exercise;
ingestion is strictly offline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import jsonschema

SCHEMA_VERSION = "1"

EIGENFORM_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "field", "level_norm", "weight",
                 "character", "coefficient_field_poly", "eigenvalues"],
    "properties": {
        "schema_version": {"type": "string"},
        "field": {"type": "string"},
        "level_norm": {"type": "integer", "minimum": 1},
        "weight": {"type": "integer", "minimum": 1},
        "character": {"type": "string"},
        "coefficient_field_poly": {
            "type": "array", "minItems": 2,
            "items": {"type": ["string", "integer"]},
        },
        "eigenvalues": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["prime", "value"],
                "properties": {
                    "prime": {"type": "string"},
                    "value": {"type": "array",
                              "items": {"type": ["string", "integer"]}},
                },
            },
        },
        "provenance": {"type": "string"},
    },
}


class EigenformParseError(ValueError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{message} (at {pointer or '/'})")
        self.pointer = pointer


@dataclass
class EigenformData:
    field_label: str
    level_norm: int
    weight: int
    character_label: str
    coefficient_poly: list  # Fractions, constant term first, monic
    eigenvalues: dict       # prime label -> list of Fractions
    provenance: str

    def degree(self) -> int:
        return len(self.coefficient_poly) - 1


def _frac(x) -> Fraction:
    return Fraction(str(x))


def parse_eigenform_file(path) -> EigenformData:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise EigenformParseError(f"invalid JSON: {exc}") from exc
    try:
        jsonschema.validate(doc, EIGENFORM_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise EigenformParseError(exc.message, exc.json_path) from exc
    if doc["schema_version"] != SCHEMA_VERSION:
        raise EigenformParseError(
            f"unsupported schema version {doc['schema_version']!r}",
            "$.schema_version")
    poly = [_frac(c) for c in doc["coefficient_field_poly"]]
    if poly[-1] != 1:
        raise EigenformParseError("coefficient field polynomial must be monic",
                                  "$.coefficient_field_poly")
    degree = len(poly) - 1
    eigen = {}
    for i, entry in enumerate(doc["eigenvalues"]):
        label = entry["prime"]
        vec = [_frac(v) for v in entry["value"]]
        if len(vec) != degree:
            raise EigenformParseError(
                f"eigenvalue vector for prime {label} has length {len(vec)}, "
                f"expected {degree}", f"$.eigenvalues[{i}].value")
        if label in eigen:
            raise EigenformParseError(f"duplicate prime label {label}",
                                      f"$.eigenvalues[{i}].prime")
        eigen[label] = vec
    return EigenformData(
        field_label=doc["field"],
        level_norm=int(doc["level_norm"]),
        weight=int(doc["weight"]),
        character_label=doc["character"],
        coefficient_poly=poly,
        eigenvalues=eigen,
        provenance=doc.get("provenance", ""),
    )


def write_eigenform_file(path, data: EigenformData):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "field": data.field_label,
        "level_norm": data.level_norm,
        "weight": data.weight,
        "character": data.character_label,
        "coefficient_field_poly": [str(c) for c in data.coefficient_poly],
        "eigenvalues": [
            {"prime": lab, "value": [str(v) for v in vec]}
            for lab, vec in sorted(data.eigenvalues.items())
        ],
        "provenance": data.provenance,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
