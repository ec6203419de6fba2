"""Presheaves of rings on finite spaces: sheaf conditions, stalks, sheafification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import (
    DocumentError,
    DomainMismatch,
    InvalidMorphism,
    InvalidPresheaf,
    NotEnumerable,
    NotInOpen,
    NotNested,
    Undecided,
    Witness,
)
from .ring import (
    ZERO,
    Identity,
    LimitRing,
    Projection,
    Restriction,
    Ring,
    RingHom,
    Tupling,
    ZeroMap,
    ZeroRing,
    default_hom,
    hom_compose,
    hom_from_json,
    hom_verify,
    is_bijective,
    ring_from_json,
    ring_isomorphisms,
)
from .topology import (
    ContinuousMap,
    FiniteSpace,
    LatticeIso,
    identity_iso,
    open_key,
    parse_open_key,
    sort_key,
)


def edge_key(v, u) -> str:
    return f"{open_key(v)}<{open_key(u)}"


def parse_edge_key(key: str) -> tuple:
    left, sep, right = key.partition("<")
    if not sep:
        raise ValueError(f"edge key must look like {{a}}<{{a,b}}: {key!r}")
    return parse_open_key(left), parse_open_key(right)


class Presheaf:
    """A ring per open set with restriction homomorphisms on covering pairs.

    ``restrict`` maps Hasse pairs ``(V, U)`` (``V`` maximal in ``U``) to a
    homomorphism ``assign[U] -> assign[V]``.  Missing edges are filled with
    the evident map between the two rings when there is one.  Restrictions
    along longer inclusions are composed on demand by :meth:`restriction`.
    """

    doc_type = "presheaf"

    def __init__(self, space: FiniteSpace, assign: Mapping, restrict: Mapping | None = None):
        self.space = space
        rings = {frozenset(k): r for k, r in assign.items()}
        rings.setdefault(frozenset(), ZERO)
        if set(rings) != set(space.opens):
            extra = sorted(open_key(u) for u in set(rings) - set(space.opens))
            missing = sorted(open_key(u) for u in set(space.opens) - set(rings))
            raise InvalidPresheaf(f"assignment does not match the opens (extra {extra}, missing {missing})")
        self.assign: dict = {u: rings[u] for u in space.opens}
        given = {(frozenset(v), frozenset(u)): h for (v, u), h in (restrict or {}).items()}
        edges = set(space.hasse_edges)
        stray = [e for e in given if e not in edges]
        if stray:
            raise InvalidPresheaf(f"restrictions given on non-covering pairs: {[edge_key(*e) for e in stray]}")
        self.restrict: dict = {}
        for v, u in space.hasse_edges:
            h = given.get((v, u)) or default_hom(self.assign[u], self.assign[v])
            if h is None:
                raise InvalidPresheaf(f"no restriction given for {edge_key(v, u)}")
            self.restrict[(v, u)] = h
        self._cache: dict = {}

    def ring(self, u) -> Ring:
        return self.assign[frozenset(u)]

    def restriction(self, v, u) -> RingHom:
        """The restriction ``assign[u] -> assign[v]`` along a maximal chain."""
        v, u = frozenset(v), frozenset(u)
        if not (v <= u and self.space.is_open(v) and self.space.is_open(u)):
            raise NotNested(f"{open_key(v)} is not an open subset of {open_key(u)}")
        key = (v, u)
        if key in self._cache:
            return self._cache[key]
        if v == u:
            h = Identity(self.assign[u], self.assign[u])
        else:
            c = next(c for c in self.space.children[u] if v <= c)
            h = hom_compose(self.restriction(v, c), self.restrict[(c, u)])
        self._cache[key] = h
        return h

    def restrict_value(self, value, u, v):
        return self.restriction(v, u).apply(value)

    def sample(self, u) -> list:
        r = self.assign[frozenset(u)]
        return r.elements() if r.enumerable else r.probe_elements()

    @property
    def enumerable(self) -> bool:
        return all(r.enumerable for r in self.assign.values())

    def __eq__(self, other):
        return (
            isinstance(other, Presheaf)
            and self.space == other.space
            and self.assign == other.assign
            and self.restrict == other.restrict
        )

    def __hash__(self):
        return hash((self.space, tuple(self.assign.items())))

    def __repr__(self):
        body = ", ".join(f"{open_key(u)}: {r}" for u, r in self.assign.items())
        return f"{type(self).__name__}({body})"

    # -- serialization --------------------------------------------------
    _assign_field = "assign"
    _restrict_field = "restrict"

    def to_json(self) -> dict:
        return {
            "type": self.doc_type,
            "space": self.space.to_json(),
            self._assign_field: {open_key(u): r.to_json() for u, r in self.assign.items()},
            self._restrict_field: {edge_key(v, u): h.to_json() for (v, u), h in self.restrict.items()},
        }

    @classmethod
    def from_json(cls, d: Mapping):
        from .serialize import space_from_json

        try:
            space = space_from_json(d["space"])
            rings = {parse_open_key(k): ring_from_json(r) for k, r in d[cls._assign_field].items()}
            homs = {}
            for k, h in d.get(cls._restrict_field, {}).items():
                v, u = parse_edge_key(k)
                if u not in rings or v not in rings:
                    raise DocumentError(f"edge {k} refers to an unassigned open")
                homs[(v, u)] = hom_from_json(h, rings[u], rings[v])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DocumentError):
                raise
            raise DocumentError(f"bad {cls.doc_type} document: {exc}") from None
        try:
            return cls(space, rings, homs)
        except InvalidPresheaf as exc:
            raise DocumentError(str(exc)) from None


def constant_presheaf(space: FiniteSpace, ring: Ring) -> Presheaf:
    """``ring`` on every nonempty open, identity restrictions."""
    return Presheaf(space, {u: ring for u in space.opens if u})


# ----------------------------------------------------------------------
# Verification


def _first_difference(g: RingHom, h: RingHom, sample) -> object | None:
    for s in sample:
        if g.apply(s) != h.apply(s):
            return s
    return None


def verify_presheaf(p: Presheaf):
    """``True`` if ``p`` satisfies the presheaf axioms, else a :class:`Witness`."""
    if not isinstance(p.assign[frozenset()], ZeroRing):
        return Witness("empty-not-zero", {"ring": str(p.assign[frozenset()])})
    for (v, u), h in p.restrict.items():
        if h.domain != p.assign[u] or h.codomain != p.assign[v]:
            return Witness("edge-signature", {"edge": edge_key(v, u), "hom": h.label()})
        w = hom_verify(h)
        if not w:
            return Witness("edge-not-homomorphism", {"edge": edge_key(v, u), "failure": w})
    return path_independence(p)


def path_independence(p: Presheaf):
    """``True`` when composites along all chains agree, else a :class:`Witness`."""
    for u in p.space.opens:
        sample = p.sample(u)
        for v in p.space.opens:
            if not v < u:
                continue
            canonical = p.restriction(v, u)
            for c in p.space.children[u]:
                if not v <= c:
                    continue
                via = hom_compose(p.restriction(v, c), p.restrict[(c, u)])
                s = _first_difference(via, canonical, sample)
                if s is not None:
                    return Witness(
                        "path-dependence",
                        {"from": u, "to": v, "via": c, "element": s},
                    )
    return True


def restriction(p: Presheaf, v, u) -> RingHom:
    return p.restriction(v, u)


# ----------------------------------------------------------------------
# Sheaf conditions


def _restriction_tables(p: Presheaf, u, cover) -> list[dict]:
    elems = p.assign[u].elements()
    return [{s: p.restrict_value(s, u, ui) for s in elems} for ui in cover]


def _compatible_families(p: Presheaf, cover) -> Iterator[tuple]:
    """Families ``(s_i)`` over ``cover`` agreeing on pairwise overlaps."""
    k = len(cover)
    values = [p.assign[ui].elements() for ui in cover]
    overlap = {}
    for i in range(k):
        for j in range(i):
            w = cover[i] & cover[j]
            ri = {s: p.restrict_value(s, cover[i], w) for s in values[i]}
            rj = {s: p.restrict_value(s, cover[j], w) for s in values[j]}
            overlap[(i, j)] = (ri, rj)
    current = [None] * k

    def fill(i):
        if i == k:
            yield tuple(current)
            return
        for s in values[i]:
            ok = True
            for j in range(i):
                ri, rj = overlap[(i, j)]
                if ri[s] != rj[current[j]]:
                    ok = False
                    break
            if ok:
                current[i] = s
                yield from fill(i + 1)

    yield from fill(0)


def sheaf_witness_for_cover(p: Presheaf, u, cover):
    """Locality or glueing failure for one cover of ``u``, or ``None``."""
    u = frozenset(u)
    tables = _restriction_tables(p, u, cover)
    seen: dict = {}
    for s in p.assign[u].elements():
        key = tuple(t[s] for t in tables)
        if key in seen:
            return Witness("locality", {"open": u, "cover": list(cover), "s": seen[key], "t": s})
        seen[key] = s
    for fam in _compatible_families(p, cover):
        if fam not in seen:
            return Witness("glueing", {"open": u, "cover": list(cover), "family": list(fam)})
    return None


def is_sheaf(p: Presheaf, covers: str = "irredundant"):
    """``True`` if ``p`` is a sheaf, else the first failing cover as a :class:`Witness`.

    Locality and glueing are checked exhaustively over every irredundant
    cover of every open (``covers="all"`` checks every cover instead).
    Requires every ring to be finite.
    """
    if not p.enumerable:
        raise NotEnumerable("exhaustive sheaf check needs finite rings; use find_sheaf_witness")
    for u in p.space.opens:
        family = p.space.covers_of(u) if covers == "irredundant" else p.space.all_covers_of(u)
        for cover in family:
            if u in cover:
                continue
            w = sheaf_witness_for_cover(p, u, cover)
            if w is not None:
                return w
    return True


def solve_glue(p: Presheaf, u, cover, family):
    """A section over ``u`` restricting to ``family`` on ``cover``, or ``None``.

    Finite rings are searched.  For symbolic rings the answer is derived from
    the restriction rules (truncations and injective maps); when neither
    applies :class:`Undecided` is raised.
    """
    u = frozenset(u)
    cover = [frozenset(c) for c in cover]
    target = p.assign[u]
    homs = [p.restriction(c, u) for c in cover]

    def glues(s):
        return all(h.apply(s) == x for h, x in zip(homs, family))

    if target.enumerable:
        return next((s for s in target.elements() if glues(s)), None)
    if homs and isinstance(target, LimitRing) and all(_component_view(h) is not None for h in homs):
        comps: dict = {}
        for h, x in zip(homs, family):
            keys, values = _component_view(h)(x)
            for k, val in zip(keys, values):
                if comps.setdefault(k, val) != val:
                    return None
        if set(comps) != set(target.keys):
            raise Undecided("cover does not determine every component")
        cand = tuple(comps[k] for k in target.keys)
        return cand if target.contains(cand) and glues(cand) else None
    for h, x in zip(homs, family):
        try:
            cand = h.preimage(x)
        except NotImplementedError:
            continue
        if cand is None:
            return None
        return cand if glues(cand) else None
    if not cover:
        return target.zero()
    raise Undecided(f"cannot decide glueing into {target}")


def _component_view(h: RingHom):
    """For truncation-like maps out of a family ring: value -> (keys, component values)."""
    if isinstance(h, Identity):
        return lambda x: (h.domain.keys, x)
    if isinstance(h, Restriction):
        return lambda x: (h.codomain.keys, x)
    if isinstance(h, Projection) and isinstance(h.domain, LimitRing):
        return lambda x: ((h.domain.keys[h.index],), (x,))
    return None


def _compatible(p: Presheaf, cover, family) -> bool:
    for i, j in itertools.combinations(range(len(cover)), 2):
        w = cover[i] & cover[j]
        if p.restrict_value(family[i], cover[i], w) != p.restrict_value(family[j], cover[j], w):
            return False
    return True


def witness_check(p: Presheaf, claim) -> bool:
    """Confirm a claimed locality or glueing violation (works on symbolic rings)."""
    d = claim.detail if isinstance(claim, Witness) else claim.get("detail", claim)
    kind = claim.kind if isinstance(claim, Witness) else claim.get("kind")
    u = frozenset(d["open"])
    cover = [frozenset(c) for c in d["cover"]]
    if _union_all(cover) != u or not all(p.space.is_open(c) for c in cover):
        return False
    if kind == "locality":
        s, t = d["s"], d["t"]
        return s != t and all(p.restrict_value(s, u, c) == p.restrict_value(t, u, c) for c in cover)
    if kind == "glueing":
        fam = list(d["family"])
        if len(fam) != len(cover) or not _compatible(p, cover, fam):
            return False
        return solve_glue(p, u, cover, fam) is None
    raise ValueError(f"unknown violation kind {kind!r}")


def _union_all(sets):
    out = frozenset()
    for s in sets:
        out |= s
    return out


def find_sheaf_witness(p: Presheaf, samples: Mapping | None = None):
    """Search sampled sections for a sheaf violation; ``None`` if none is found.

    Uses ``samples[U]`` (raw values) or each ring's probe elements.  A
    ``None`` result is not a proof that ``p`` is a sheaf.
    """
    samples = {frozenset(k): list(v) for k, v in (samples or {}).items()}

    def pool(u):
        return samples.get(u) or p.sample(u)

    for u in p.space.opens:
        for cover in p.space.covers_of(u):
            if u in cover:
                continue
            seen: dict = {}
            for s in pool(u):
                key = tuple(p.restrict_value(s, u, c) for c in cover)
                if key in seen and seen[key] != s:
                    return Witness("locality", {"open": u, "cover": list(cover), "s": seen[key], "t": s})
                seen[key] = s
            for fam in itertools.product(*(pool(c) for c in cover)):
                if not _compatible(p, cover, fam):
                    continue
                try:
                    if solve_glue(p, u, cover, fam) is None:
                        return Witness("glueing", {"open": u, "cover": list(cover), "family": list(fam)})
                except Undecided:
                    continue
    return None


# ----------------------------------------------------------------------
# Stalks and germs


@dataclass(frozen=True)
class Stalk:
    point: str
    ring: Ring


@dataclass(frozen=True)
class Germ:
    stalk: Stalk
    value: object


def stalk_at(p: Presheaf, x: str) -> Stalk:
    """The stalk at ``x``: the ring over the minimal open of ``x``."""
    return Stalk(x, p.assign[p.space.minimal_open(x)])


def germ(p: Presheaf, u, s, x: str) -> Germ:
    u = frozenset(u)
    if x not in u:
        raise NotInOpen(f"{x} is not in {open_key(u)}")
    m = p.space.minimal_open(x)
    return Germ(stalk_at(p, x), p.restrict_value(s, u, m))


def stalk_by_classes(p: Presheaf, x: str) -> list[frozenset]:
    """Stalk at ``x`` built literally as equivalence classes of pairs ``(s, U)``.

    Pairs are identified when they agree on the intersection of their opens
    (closed up transitively).  Only for finite rings; used as an oracle
    against :func:`stalk_at`.
    """
    nbhds = [u for u in p.space.opens if x in u]
    pairs = [(s, u) for u in nbhds for s in p.assign[u].elements()]
    parent = list(range(len(pairs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, (s, u) in enumerate(pairs):
        for j, (t, v) in enumerate(pairs[:i]):
            w = u & v
            if p.restrict_value(s, u, w) == p.restrict_value(t, v, w):
                parent[find(i)] = find(j)
    classes: dict = {}
    for i, pr in enumerate(pairs):
        classes.setdefault(find(i), set()).add(pr)
    return [frozenset(c) for c in classes.values()]


# ----------------------------------------------------------------------
# Morphisms


class PresheafMorphism:
    """Ring homomorphisms ``source(U) -> target(U)`` for every open ``U``."""

    def __init__(self, source: Presheaf, target: Presheaf, components: Mapping):
        if source.space != target.space:
            raise DomainMismatch("presheaf morphisms need a common base space")
        self.source = source
        self.target = target
        self.components = {frozenset(k): h for k, h in components.items()}
        if set(self.components) != set(source.space.opens):
            raise InvalidMorphism("one component per open set is required")

    def __getitem__(self, u) -> RingHom:
        return self.components[frozenset(u)]

    def to_json(self) -> dict:
        return {
            "type": "presheaf-morphism",
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "components": {open_key(u): h.to_json() for u, h in self.components.items()},
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "PresheafMorphism":
        from .serialize import document_from_json

        try:
            src = document_from_json(d["source"])
            tgt = document_from_json(d["target"])
            comps = {
                parse_open_key(k): hom_from_json(h, src.ring(parse_open_key(k)), tgt.ring(parse_open_key(k)))
                for k, h in d["components"].items()
            }
            return cls(src, tgt, comps)
        except (KeyError, TypeError, ValueError, InvalidMorphism, DomainMismatch) as exc:
            if isinstance(exc, DocumentError):
                raise
            raise DocumentError(f"bad presheaf-morphism document: {exc}") from None

    def __eq__(self, other):
        return (
            isinstance(other, PresheafMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )


def identity_morphism(p: Presheaf) -> PresheafMorphism:
    return PresheafMorphism(p, p, {u: Identity(r, r) for u, r in p.assign.items()})


def compose_morphisms(g: PresheafMorphism, h: PresheafMorphism) -> PresheafMorphism:
    """``g . h``."""
    return PresheafMorphism(h.source, g.target, {u: hom_compose(g[u], h[u]) for u in h.source.space.opens})


def morphism_verify(m: PresheafMorphism):
    """``True`` for a natural family of ring homomorphisms, else a :class:`Witness`."""
    for u in m.source.space.opens:
        h = m[u]
        if h.domain != m.source.assign[u] or h.codomain != m.target.assign[u]:
            return Witness("component-signature", {"open": u})
        w = hom_verify(h)
        if not w:
            return Witness("component-not-homomorphism", {"open": u, "failure": w})
    for (v, u) in m.source.space.hasse_edges:
        lhs = hom_compose(m.target.restrict[(v, u)], m[u])
        rhs = hom_compose(m[v], m.source.restrict[(v, u)])
        s = _first_difference(lhs, rhs, m.source.sample(u))
        if s is not None:
            return Witness("naturality", {"edge": edge_key(v, u), "element": s})
    return True


def is_isomorphism(m: PresheafMorphism) -> bool:
    if not morphism_verify(m):
        return False
    return all(is_bijective(h) for h in m.components.values())


# ----------------------------------------------------------------------
# Sheafification and direct images


def sheafify(p: Presheaf) -> tuple[Presheaf, PresheafMorphism]:
    """The sheaf of compatible germ families and the universal morphism.

    Over ``U`` the new ring consists of families ``(s_x)`` with ``s_x`` in
    the stalk at ``x`` such that for every ``y`` in the minimal open of
    ``x`` the restriction of ``s_x`` is ``s_y``.  Over a single point the
    family is identified with its only member, so restrictions onto a
    point are projections.
    """
    space = p.space
    mins = {x: space.minimal_open(x) for x in space.points}
    assign: dict = {}
    for u in space.opens:
        if not u:
            assign[u] = ZERO
        elif len(u) == 1:
            # a single point: the family is just a section over u itself
            assign[u] = p.assign[u]
        else:
            pts = sorted(u)
            comps = [p.assign[mins[x]] for x in pts]
            cons = []
            for i, x in enumerate(pts):
                for j, y in enumerate(pts):
                    if i != j and y in mins[x]:
                        cons.append((i, j, p.restriction(mins[y], mins[x])))
            assign[u] = LimitRing(tuple(pts), tuple(comps), tuple(cons))
    restrict = {}
    for v, u in space.hasse_edges:
        if not v:
            restrict[(v, u)] = ZeroMap(assign[u], ZERO)
        elif len(v) == 1:
            restrict[(v, u)] = Projection(assign[u], assign[v], sorted(u).index(next(iter(v))))
        else:
            restrict[(v, u)] = Restriction(assign[u], assign[v])
    plus = Presheaf(space, assign, restrict)
    comps = {}
    for u in space.opens:
        if len(u) <= 1:
            comps[u] = Identity(assign[u], assign[u])
        else:
            parts = tuple(p.restriction(mins[x], u) for x in sorted(u))
            comps[u] = Tupling(p.assign[u], assign[u], parts)
    return plus, PresheafMorphism(p, plus, comps)


def direct_image(f: ContinuousMap, p: Presheaf) -> Presheaf:
    """``(f_* p)(V) = p(f^{-1}(V))`` on the target space."""
    if f.source != p.space:
        raise DomainMismatch("the map's source is not the presheaf's space")
    t = f.target
    assign = {v: p.assign[f.preimage(v)] for v in t.opens}
    restrict = {(v, u): p.restriction(f.preimage(v), f.preimage(u)) for v, u in t.hasse_edges}
    return Presheaf(t, assign, restrict)


# ----------------------------------------------------------------------
# Isomorphism search


def diagram_isos(p: Presheaf, q: Presheaf, sigma: LatticeIso) -> Iterator[dict]:
    """Families of ring isomorphisms ``p(U) -> q(sigma U)`` commuting with restrictions.

    Opens are processed from the top down; each candidate is checked
    against the already fixed components above it.
    """
    order = sorted(p.space.opens, key=sort_key, reverse=True)
    cands = {}
    for u in order:
        cands[u] = ring_isomorphisms(p.assign[u], q.assign[sigma(u)])
        if not cands[u]:
            return
    chosen: dict = {}

    def fits(u, psi) -> bool:
        for w in p.space.parents[u]:
            top = chosen[w]
            edge_p = p.restrict[(u, w)]
            edge_q = q.restrict[(sigma(u), sigma(w))]
            for s in p.sample(w):
                if edge_q.apply(top.apply(s)) != psi.apply(edge_p.apply(s)):
                    return False
        return True

    def search(i):
        if i == len(order):
            yield dict(chosen)
            return
        u = order[i]
        for psi in cands[u]:
            if fits(u, psi):
                chosen[u] = psi
                yield from search(i + 1)
                del chosen[u]

    yield from search(0)


def presheaf_iso(p: Presheaf, q: Presheaf) -> PresheafMorphism | None:
    """An isomorphism ``p -> q`` over the identity of the space, or ``None``."""
    if p.space != q.space:
        raise DomainMismatch("presheaves live on different spaces")
    for comps in diagram_isos(p, q, identity_iso(p.space)):
        return PresheafMorphism(p, q, comps)
    return None
