"""Finite topological spaces and their lattices of open sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InvalidTopology, NotTD, ReconstructionFailure, UnknownPoint, Witness

Open = frozenset


def open_key(u: Iterable[str]) -> str:
    """Canonical text key of an open set, e.g. ``{a,b}``."""
    return "{" + ",".join(sorted(u)) + "}"


def parse_open_key(key: str) -> frozenset:
    key = key.strip()
    if not (key.startswith("{") and key.endswith("}")):
        raise ValueError(f"open key must look like {{a,b}}: {key!r}")
    inner = key[1:-1].strip()
    return frozenset(p.strip() for p in inner.split(",")) if inner else frozenset()


def sort_key(u: frozenset) -> tuple:
    """Canonical order on opens: by size, then lexicographic point list."""
    return (len(u), sorted(u))


class FiniteSpace:
    """A finite set of string-labelled points with a family of open sets.

    The constructor validates the topology and raises
    :class:`InvalidTopology` (carrying a witness) on failure.
    """

    def __init__(self, points: Iterable[str], opens: Iterable[Iterable[str]]):
        pts = tuple(sorted(set(points)))
        for p in pts:
            if not isinstance(p, str) or not p or any(c in p for c in ",{}<") or p != p.strip():
                raise InvalidTopology(f"bad point label {p!r}")
        fam = {frozenset(u) for u in opens}
        w = _topology_witness(pts, fam)
        if w is not None:
            raise InvalidTopology(f"not a topology: {w}", w)
        self.points = pts
        self.opens: tuple[frozenset, ...] = tuple(sorted(fam, key=sort_key))
        self._open_set = frozenset(fam)
        self.X = frozenset(pts)
        self.empty = frozenset()

    # -- identity -------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FiniteSpace) and (self.points, self._open_set) == (
            other.points,
            other._open_set,
        )

    def __hash__(self):
        return hash((self.points, self._open_set))

    def __repr__(self):
        return f"FiniteSpace({list(self.points)}, {[sorted(u) for u in self.opens]})"

    def to_json(self) -> dict:
        return {"points": list(self.points), "opens": [sorted(u) for u in self.opens]}

    # -- basic queries --------------------------------------------------
    def is_open(self, u) -> bool:
        return frozenset(u) in self._open_set

    def _check_point(self, x):
        if x not in self.X:
            raise UnknownPoint(x)

    @cached_property
    def closed_sets(self) -> tuple:
        return tuple(sorted((self.X - u for u in self.opens), key=sort_key))

    @cached_property
    def _minimal_opens(self) -> dict:
        out = {}
        for x in self.points:
            m = self.X
            for u in self.opens:
                if x in u:
                    m = m & u
            out[x] = m
        return out

    def minimal_open(self, x: str) -> frozenset:
        """Smallest open set containing ``x``."""
        self._check_point(x)
        return self._minimal_opens[x]

    def meet(self, u, v) -> frozenset:
        return frozenset(u) & frozenset(v)

    def join(self, u, v) -> frozenset:
        return frozenset(u) | frozenset(v)

    @cached_property
    def hasse_edges(self) -> tuple:
        """Covering pairs ``(V, U)`` with ``V`` a maximal proper open subset of ``U``."""
        edges = []
        for u in self.opens:
            below = [v for v in self.opens if v < u]
            for v in below:
                if not any(v < w < u for w in below):
                    edges.append((v, u))
        return tuple(sorted(edges, key=lambda e: (sort_key(e[0]), sort_key(e[1]))))

    @cached_property
    def children(self) -> dict:
        out = {u: [] for u in self.opens}
        for v, u in self.hasse_edges:
            out[u].append(v)
        return out

    @cached_property
    def parents(self) -> dict:
        out = {u: [] for u in self.opens}
        for v, u in self.hasse_edges:
            out[v].append(u)
        return out

    @cached_property
    def join_irreducibles(self) -> tuple:
        """Nonempty opens that are not the union of strictly smaller opens."""
        return tuple(sorted({self._minimal_opens[x] for x in self.points}, key=sort_key))

    # -- separation -----------------------------------------------------
    def specialization_preorder(self) -> frozenset:
        """Pairs ``(x, y)`` with ``x`` in every open containing ``y``."""
        return frozenset(
            (x, y) for x in self.points for y in self.points if x in self._minimal_opens[y]
        )

    def is_T0(self) -> bool:
        return len(set(self._minimal_opens.values())) == len(self.points)

    def is_TD(self) -> bool:
        """Every singleton is an open set intersected with a closed set."""
        return all(
            any(u & c == {x} for u in self.opens if x in u for c in self.closed_sets if x in c)
            for x in self.points
        )

    # -- covers ---------------------------------------------------------
    def covers_of(self, u) -> list[tuple]:
        """All irredundant open covers of ``u`` in canonical order."""
        u = frozenset(u)
        subs = [v for v in self.opens if v and v <= u]
        out = []
        for r in range(0, len(subs) + 1):
            for combo in itertools.combinations(subs, r):
                if _union(combo) != u:
                    continue
                if all(_union(combo[:i] + combo[i + 1 :]) != u for i in range(len(combo))):
                    out.append(combo)
        return out

    def all_covers_of(self, u) -> list[tuple]:
        """Every family of opens (including the empty open) whose union is ``u``."""
        u = frozenset(u)
        subs = [v for v in self.opens if v <= u]
        return [
            combo
            for r in range(0, len(subs) + 1)
            for combo in itertools.combinations(subs, r)
            if _union(combo) == u
        ]

    def basis_cover(self, u) -> tuple:
        """The cover of ``u`` by the minimal opens of its points."""
        return tuple(sorted({self._minimal_opens[x] for x in u}, key=sort_key))


def _union(sets) -> frozenset:
    out = frozenset()
    for s in sets:
        out = out | s
    return out


def _topology_witness(points: tuple, fam: set) -> Witness | None:
    X = frozenset(points)
    for u in sorted(fam, key=sort_key):
        if not u <= X:
            return Witness("not-a-subset", {"open": u})
    if frozenset() not in fam:
        return Witness("missing-empty", {})
    ordered = sorted(fam, key=sort_key)
    for u, v in itertools.combinations(ordered, 2):
        if u | v not in fam:
            return Witness("missing-union", {"u": u, "v": v, "union": u | v})
        if u & v not in fam:
            return Witness("missing-intersection", {"u": u, "v": v, "intersection": u & v})
    if X not in fam:
        return Witness("missing-whole-space", {"space": X})
    return None


def verify_topology(points, opens):
    """A validated :class:`FiniteSpace`, or the :class:`Witness` against it."""
    try:
        return FiniteSpace(points, opens)
    except InvalidTopology as exc:
        if exc.witness is None:
            return Witness("bad-input", {"reason": str(exc)})
        return exc.witness


def minimal_open(s: FiniteSpace, x: str) -> frozenset:
    return s.minimal_open(x)


def is_TD(s: FiniteSpace) -> bool:
    return s.is_TD()


def is_T0(s: FiniteSpace) -> bool:
    return s.is_T0()


def specialization_preorder(s: FiniteSpace) -> frozenset:
    return s.specialization_preorder()


def covers_of(s: FiniteSpace, u) -> list[tuple]:
    return s.covers_of(u)


# ----------------------------------------------------------------------
# Standard spaces


def discrete(points: Iterable[str]) -> FiniteSpace:
    pts = sorted(points)
    subsets = [c for r in range(len(pts) + 1) for c in itertools.combinations(pts, r)]
    return FiniteSpace(pts, subsets)


def indiscrete(points: Iterable[str]) -> FiniteSpace:
    pts = sorted(points)
    return FiniteSpace(pts, [(), pts])


def sierpinski(open_point: str = "a", closed_point: str = "b") -> FiniteSpace:
    return FiniteSpace([open_point, closed_point], [(), (open_point,), (open_point, closed_point)])


def point_labels(n: int) -> list[str]:
    return [chr(ord("a") + i) for i in range(n)]


def all_topologies(points: Iterable[str]) -> list[FiniteSpace]:
    """Every topology on the given labelled points, in a fixed order."""
    pts = sorted(points)
    X = frozenset(pts)
    middle = [
        frozenset(c) for r in range(1, len(pts)) for c in itertools.combinations(pts, r)
    ]
    out = []
    for mask in range(1 << len(middle)):
        fam = {frozenset(), X} | {m for i, m in enumerate(middle) if mask >> i & 1}
        if _topology_witness(tuple(pts), fam) is None:
            out.append(FiniteSpace(pts, fam))
    return out


# ----------------------------------------------------------------------
# Maps


class ContinuousMap:
    def __init__(self, source: FiniteSpace, target: FiniteSpace, mapping: Mapping[str, str]):
        mapping = dict(mapping)
        if set(mapping) != set(source.points):
            raise ValueError("mapping must be defined on every source point")
        if not set(mapping.values()) <= set(target.points):
            raise ValueError("mapping leaves the target space")
        self.source = source
        self.target = target
        self.mapping = mapping
        for v in target.opens:
            if not source.is_open(self.preimage(v)):
                raise ValueError(f"not continuous: preimage of {open_key(v)} is not open")

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def preimage(self, v) -> frozenset:
        return frozenset(x for x in self.source.points if self.mapping[x] in v)

    def image(self, u) -> frozenset:
        return frozenset(self.mapping[x] for x in u)

    def compose(self, inner: "ContinuousMap") -> "ContinuousMap":
        """``self . inner``."""
        return ContinuousMap(inner.source, self.target, {x: self(inner(x)) for x in inner.source.points})

    def is_homeomorphism(self) -> bool:
        if len(set(self.mapping.values())) != len(self.target.points) or len(self.source.points) != len(
            self.target.points
        ):
            return False
        return all(self.target.is_open(self.image(u)) for u in self.source.opens)

    def inverse(self) -> "ContinuousMap":
        return ContinuousMap(self.target, self.source, {y: x for x, y in self.mapping.items()})

    def __eq__(self, other):
        return (
            isinstance(other, ContinuousMap)
            and (self.source, self.target, self.mapping) == (other.source, other.target, other.mapping)
        )

    def __repr__(self):
        return f"ContinuousMap({self.mapping})"

    def to_json(self) -> dict:
        return {
            "type": "continuous-map",
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "mapping": dict(sorted(self.mapping.items())),
        }


def identity_map(s: FiniteSpace) -> ContinuousMap:
    return ContinuousMap(s, s, {x: x for x in s.points})


def homeomorphisms(s: FiniteSpace, t: FiniteSpace) -> list[ContinuousMap]:
    """All homeomorphisms ``s -> t`` by brute force over point bijections."""
    if len(s.points) != len(t.points) or len(s.opens) != len(t.opens):
        return []
    out = []
    for perm in itertools.permutations(t.points):
        m = dict(zip(s.points, perm))
        if all(t.is_open(frozenset(m[x] for x in u)) for u in s.opens):
            out.append(ContinuousMap(s, t, m))
    return out


# ----------------------------------------------------------------------
# Lattice isomorphisms


@dataclass(frozen=True)
class LatticeIso:
    """An inclusion-preserving bijection between the opens of two spaces."""

    source: FiniteSpace
    target: FiniteSpace
    mapping: tuple  # sorted (open, open) pairs

    @classmethod
    def from_dict(cls, source, target, mapping: Mapping) -> "LatticeIso":
        pairs = tuple(sorted(((frozenset(k), frozenset(v)) for k, v in mapping.items()), key=lambda p: sort_key(p[0])))
        iso = cls(source, target, pairs)
        problem = iso.problem()
        if problem:
            raise ValueError(f"not a lattice isomorphism: {problem}")
        return iso

    @cached_property
    def forward(self) -> dict:
        return dict(self.mapping)

    @cached_property
    def backward(self) -> dict:
        return {v: u for u, v in self.mapping}

    def __call__(self, u) -> frozenset:
        return self.forward[frozenset(u)]

    def inverse(self) -> "LatticeIso":
        return LatticeIso.from_dict(self.target, self.source, self.backward)

    def compose(self, inner: "LatticeIso") -> "LatticeIso":
        """``self . inner``."""
        return LatticeIso.from_dict(inner.source, self.target, {u: self(inner(u)) for u in inner.source.opens})

    def problem(self) -> str | None:
        f = self.forward
        if set(f) != set(self.source.opens):
            return "not defined on every open"
        if set(f.values()) != set(self.target.opens) or len(set(f.values())) != len(f):
            return "not a bijection onto the target opens"
        for u in self.source.opens:
            for v in self.source.opens:
                if (u <= v) != (f[u] <= f[v]):
                    return f"order not preserved at {open_key(u)}, {open_key(v)}"
        return None

    def to_json(self) -> dict:
        return {open_key(u): sorted(v) for u, v in self.mapping}


def identity_iso(s: FiniteSpace) -> LatticeIso:
    return LatticeIso.from_dict(s, s, {u: u for u in s.opens})


def iso_from_map(f: ContinuousMap) -> LatticeIso:
    """The lattice isomorphism ``U -> f(U)`` induced by a homeomorphism."""
    return LatticeIso.from_dict(f.source, f.target, {u: f.image(u) for u in f.source.opens})


def enumerate_lattice_isos(s: FiniteSpace, t: FiniteSpace) -> list[LatticeIso]:
    """All isomorphisms ``Open(s) -> Open(t)`` by order-checked backtracking."""
    A, B = list(s.opens), list(t.opens)
    if len(A) != len(B):
        return []

    def profile(opens, u):
        return (sum(1 for v in opens if v <= u), sum(1 for v in opens if u <= v))

    pa = {u: profile(A, u) for u in A}
    pb = {v: profile(B, v) for v in B}
    if sorted(pa.values()) != sorted(pb.values()):
        return []
    out = []
    assigned: dict = {}
    used: set = set()

    def search(i):
        if i == len(A):
            out.append(LatticeIso(s, t, tuple(sorted(assigned.items(), key=lambda p: sort_key(p[0])))))
            return
        u = A[i]
        for v in B:
            if v in used or pb[v] != pa[u]:
                continue
            if all((w <= u) == (assigned[w] <= v) and (u <= w) == (v <= assigned[w]) for w in assigned):
                assigned[u] = v
                used.add(v)
                search(i + 1)
                del assigned[u]
                used.discard(v)

    search(0)
    return out


def homeo_from_lattice_iso(phi: LatticeIso) -> ContinuousMap:
    """The homeomorphism ``f`` with ``f(U) = phi(U)`` for every open ``U``.

    Each point is sent to the point whose minimal open is the image of its
    own minimal open.  Both spaces must be T_D.
    """
    s, t = phi.source, phi.target
    for sp, name in ((s, "source"), (t, "target")):
        if not sp.is_TD():
            raise NotTD(f"{name} space is not T_D")
    by_min: dict = {}
    for y in t.points:
        by_min.setdefault(t.minimal_open(y), []).append(y)
    mapping = {}
    for x in s.points:
        ys = by_min.get(phi(s.minimal_open(x)), [])
        if len(ys) != 1:
            raise ReconstructionFailure(f"no unique image for point {x}")
        mapping[x] = ys[0]
    f = ContinuousMap(s, t, mapping)
    if not f.is_homeomorphism():
        raise ReconstructionFailure("reconstructed map is not a homeomorphism")
    for u in s.opens:
        if f.image(u) != phi(u):
            raise ReconstructionFailure(f"f({open_key(u)}) differs from the lattice image")
    return f
