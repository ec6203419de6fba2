"""The JSON document format shared by the library and the command line.

Every document is a JSON object.  All but ring descriptors carry a
``"type"`` tag; output is canonical (sorted keys, two-space indent) so
that fixtures diff cleanly.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .errors import DocumentError, Report, Witness
from .ring import Ring, ring_from_json
from .topology import ContinuousMap, FiniteSpace, verify_topology


def dumps(doc: Any) -> str:
    """Canonical text of a document (an object with ``to_json`` or plain JSON)."""
    if isinstance(doc, FiniteSpace):
        doc = space_document(doc)
    elif isinstance(doc, Ring):
        doc = {"type": "ring", "ring": doc.to_json()}
    elif hasattr(doc, "to_json"):
        doc = doc.to_json()
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    """Parse a document; errors carry the line and column of the problem."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return document_from_json(d)


def space_document(s: FiniteSpace) -> dict:
    return {"type": "space", **s.to_json()}


def space_from_json(d: Any) -> FiniteSpace:
    if not isinstance(d, Mapping) or "points" not in d or "opens" not in d:
        raise DocumentError("a space needs 'points' and 'opens'")
    points, opens = d["points"], d["opens"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise DocumentError("'points' must be a list of strings")
    if not isinstance(opens, list) or not all(
        isinstance(u, list) and all(isinstance(p, str) for p in u) for u in opens
    ):
        raise DocumentError("'opens' must be a list of point lists")
    s = verify_topology(points, opens)
    if isinstance(s, Witness):
        raise DocumentError(f"not a topology: {s}")
    return s


def continuous_map_from_json(d: Mapping) -> ContinuousMap:
    try:
        return ContinuousMap(space_from_json(d["source"]), space_from_json(d["target"]), d["mapping"])
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"bad continuous-map document: {exc}") from None
    except ValueError as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(str(exc)) from None


def document_from_json(d: Any):
    """Build the object described by a parsed document."""
    from .meadow import DirectedLattice, Meadow
    from .presheaf import Presheaf, PresheafMorphism

    if not isinstance(d, Mapping):
        raise DocumentError("a document must be a JSON object")
    kind = d.get("type")
    if kind is None and "kind" in d:
        return ring_from_json(d)
    if kind == "ring":
        return ring_from_json(d.get("ring"))
    if kind == "space":
        return space_from_json(d)
    if kind == "presheaf":
        return Presheaf.from_json(d)
    if kind == "directed-lattice":
        return DirectedLattice.from_json(d)
    if kind == "meadow":
        return Meadow.from_json(d)
    if kind == "presheaf-morphism":
        return PresheafMorphism.from_json(d)
    if kind == "continuous-map":
        return continuous_map_from_json(d)
    if kind == "report":
        return d
    raise DocumentError(f"unknown document type {kind!r}")


def to_document(obj: Any) -> dict:
    return json.loads(dumps(obj))


__all__ = ["dumps", "loads", "document_from_json", "space_from_json", "to_document", "Report"]
