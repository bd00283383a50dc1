"""Machine-readable (JSON) report documents with a stable field layout.

Every document carries ``"schema": 1``; field insertion order is fixed so
identical inputs serialize byte-identically.
"""

from __future__ import annotations

import json

from .algebra import Generator, Interface

SCHEMA_VERSION = 1


def generator_object(gen: Generator) -> dict:
    return {
        "host": gen.host,
        "polarity": gen.polarity,
        "target": gen.target,
        "action": gen.action,
        "motive": list(gen.motive),
        "alpha": gen.alpha,
    }


def term_object(gen: Generator, coefficient: int) -> dict:
    obj = generator_object(gen)
    obj["coefficient"] = coefficient
    return obj


def interface_terms(iface: Interface) -> list[dict]:
    return [term_object(g, c) for g, c in iface]


def diagnostic_object(diag) -> dict:
    obj = {"severity": diag.severity, "message": diag.message}
    if diag.pos is not None:
        obj["file"] = diag.pos.file
        obj["line"] = diag.pos.line
        obj["col"] = diag.pos.col
    return obj


def document(command: str, **fields) -> dict:
    doc = {"schema": SCHEMA_VERSION, "command": command}
    doc.update(fields)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"
