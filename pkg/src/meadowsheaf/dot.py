"""Graphviz rendering of lattice diagrams."""

from __future__ import annotations

from .presheaf import Presheaf
from .topology import open_key


def _node_order(p: Presheaf) -> list[frozenset]:
    return sorted(p.space.opens, key=lambda u: (-len(u), sorted(u)))


def to_dot(obj, name: str = "lattice") -> str:
    """DOT text for a presheaf, directed lattice or meadow.

    Nodes are the opens (largest first, then lexicographic) labelled
    ``open : ring``; edges are the covering pairs labelled by their map.
    """
    from .meadow import Meadow

    p = obj.lattice if isinstance(obj, Meadow) else obj
    if not isinstance(p, Presheaf):
        raise TypeError(f"cannot draw a {type(obj).__name__}")
    order = _node_order(p)
    ids = {u: f"n{i}" for i, u in enumerate(order)}
    lines = [f'digraph "{name}" {{', "  rankdir=TB;", "  node [shape=box];"]
    for u in order:
        lines.append(f'  {ids[u]} [label="{_esc(open_key(u))} : {_esc(str(p.assign[u]))}"];')
    edges = sorted(p.restrict.items(), key=lambda e: (order.index(e[0][1]), order.index(e[0][0])))
    for (v, u), h in edges:
        lines.append(f'  {ids[u]} -> {ids[v]} [label="{_esc(h.label())}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _esc(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')
