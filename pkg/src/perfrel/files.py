"""JSON formats for lattices and relations."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .exactla import as_rational
from .lattice import Lattice, LatticeError
from .perfection import PerfectionRelation


class MalformedInput(ValueError):
    """The document is not valid JSON or does not have the expected shape."""


def format_rational(x) -> str | int:
    x = as_rational(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _entry(x: Any) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise MalformedInput(f"entries must be integers or 'p/q' strings, got {x!r}")
    try:
        return as_rational(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad rational {x!r}") from exc


def _load(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput("top level must be an object")
    return doc


def parse_lattice(text: str) -> Lattice:
    """{"n": int, "gram": [[entry, ...], ...], "label": optional str} -> Lattice."""
    doc = _load(text)
    if "gram" not in doc:
        raise MalformedInput("missing 'gram'")
    gram = doc["gram"]
    if not isinstance(gram, list) or not gram or not all(isinstance(r, list) for r in gram):
        raise MalformedInput("'gram' must be a nonempty list of rows")
    rows = [[_entry(x) for x in r] for r in gram]
    n = doc.get("n", len(rows))
    if not isinstance(n, int) or isinstance(n, bool):
        raise MalformedInput("'n' must be an integer")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise MalformedInput("'label' must be a string")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise LatticeError(f"Gram matrix is not {n} x {n}")
    return Lattice(rows, label)


def serialize_lattice(L: Lattice) -> str:
    doc = {"n": L.n, "gram": [[format_rational(x) for x in row] for row in L.gram.entries]}
    if L.label:
        doc["label"] = L.label
    return json.dumps(doc)


def parse_relation(text: str) -> PerfectionRelation:
    """{"lines": [[int, ...], ...], "coefficients": [entry, ...]} -> PerfectionRelation (verified)."""
    doc = _load(text)
    lines, coeffs = doc.get("lines"), doc.get("coefficients")
    if not isinstance(lines, list) or not isinstance(coeffs, list):
        raise MalformedInput("'lines' and 'coefficients' must be lists")
    if len(lines) != len(coeffs):
        raise MalformedInput("'lines' and 'coefficients' differ in length")
    vecs = []
    for ln in lines:
        if not isinstance(ln, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in ln):
            raise MalformedInput("each line must be a list of integers")
        vecs.append(ln)
    cs = [_entry(c) for c in coeffs]
    if any(c == 0 for c in cs):
        raise MalformedInput("coefficients must be nonzero")
    if any(not any(v) for v in vecs):
        raise LatticeError("zero vector given as a line")
    return PerfectionRelation.combine(list(zip(cs, vecs)))


def serialize_relation(rel: PerfectionRelation) -> str:
    return json.dumps({
        "lines": [list(ln.coords) for ln in rel.lines],
        "coefficients": [format_rational(c) for c in rel.coefficients],
    })
