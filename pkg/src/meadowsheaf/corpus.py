"""Exhaustive generation of small presheaves for sweeps and tests."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from .presheaf import Presheaf, path_independence
from .ring import Ring, ZeroMap, ZERO, ring_homomorphisms, zmod
from .topology import FiniteSpace, all_topologies, point_labels, sort_key

DEFAULT_RINGS = (zmod(2), zmod(3))


def spaces(max_points: int, min_points: int = 1) -> list[FiniteSpace]:
    """Every topology on the points ``a, b, ...`` for each size in range."""
    out = []
    for n in range(min_points, max_points + 1):
        out.extend(all_topologies(point_labels(n)))
    return out


def presheaves_on(space: FiniteSpace, rings: Sequence[Ring]) -> Iterator[Presheaf]:
    """All presheaves with catalog rings on the nonempty opens.

    Rings are chosen from the top down so that each covering pair admits a
    homomorphism; every choice of homomorphisms is then kept when
    composites agree along all chains.
    """
    order = sorted((u for u in space.opens if u), key=sort_key, reverse=True)
    homs_cache: dict = {}

    def homs(src, dst):
        key = (src, dst)
        if key not in homs_cache:
            homs_cache[key] = ring_homomorphisms(src, dst)
        return homs_cache[key]

    chosen: dict = {}

    def assignments(i):
        if i == len(order):
            yield dict(chosen)
            return
        u = order[i]
        for r in rings:
            if all(homs(chosen[w], r) for w in space.parents[u] if w):
                chosen[u] = r
                yield from assignments(i + 1)
                del chosen[u]

    for assign in assignments(0):
        edges = [(v, u) for v, u in space.hasse_edges if v]
        options = [homs(assign[u], assign[v]) for v, u in edges]
        for pick in itertools.product(*options):
            restrict = dict(zip(edges, pick))
            for v, u in space.hasse_edges:
                if not v:
                    restrict[(v, u)] = ZeroMap(assign[u], ZERO)
            p = Presheaf(space, assign, restrict)
            if path_independence(p) is True:
                yield p


def corpus(max_points: int, rings: Iterable[Ring] = DEFAULT_RINGS, min_points: int = 1) -> Iterator[Presheaf]:
    """Presheaves over all topologies on ``min_points..max_points`` points.

    Order: by number of points, then topology, then ring assignment and
    homomorphism choice, all deterministic.
    """
    rings = list(rings)
    for s in spaces(max_points, min_points):
        yield from presheaves_on(s, rings)
