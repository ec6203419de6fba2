"""Directed lattices of rings and the meadows they generate.

A meadow here is the disjoint union of the rings of a directed lattice
indexed by the open sets of a finite space.  Elements carry their index;
sums and products are formed after pushing both operands down to the meet
of their indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    DocumentError,
    IncoherentLattice,
    MixedMeadows,
    NotCommon,
    NotComparable,
    NotEnumerable,
    Report,
    TooLarge,
    Witness,
    jsonable,
)
from .presheaf import Presheaf, diagram_isos, verify_presheaf
from .ring import Identity, Ring, RingHom
from .topology import FiniteSpace, LatticeIso, enumerate_lattice_isos, open_key, sort_key

#: meadows above this many elements are refused by the isomorphism search
ISO_SEARCH_BOUND = 100_000


class DirectedLattice(Presheaf):
    """Rings indexed by the opens of a finite space with coherent transitions.

    Structurally this is a presheaf; only the vocabulary differs.
    """

    doc_type = "directed-lattice"
    _assign_field = "rings"
    _restrict_field = "transitions"

    @property
    def rings(self) -> dict:
        return self.assign

    @property
    def transitions(self) -> dict:
        return self.restrict

    def transition(self, j, i) -> RingHom:
        """``f_{j,i}``: the map from the ring at ``i`` down to the ring at ``j``."""
        return self.restriction(j, i)

    @classmethod
    def from_presheaf(cls, p: Presheaf) -> "DirectedLattice":
        return cls(p.space, p.assign, p.restrict)


def verify_directed_lattice(lat: Presheaf):
    """Zero ring at the bottom, homomorphic transitions, coherent composites."""
    return verify_presheaf(lat)



@dataclass(frozen=True)
class MeadowElement:
    """``value`` in the ring at ``index``."""

    index: frozenset
    value: object

    def to_json(self) -> dict:
        return {"index": sorted(self.index), "value": jsonable(self.value)}

    def __str__(self):
        return f"{jsonable(self.value)}@{open_key(self.index)}"


class Meadow:
    """The disjoint union of the rings of a directed lattice.

    ``0`` and ``1`` live in the ring at the top index; ``a`` is the single
    element of the zero ring at the bottom index.
    """

    def __init__(self, lattice: Presheaf, check: bool = True):
        if not isinstance(lattice, DirectedLattice):
            lattice = DirectedLattice.from_presheaf(lattice)
        if check:
            w = verify_directed_lattice(lattice)
            if not w:
                raise IncoherentLattice(f"not a directed lattice of rings: {w}", w)
        self.lattice = lattice
        self.space: FiniteSpace = lattice.space
        self.indices: tuple = tuple(sorted(self.space.opens, key=lambda u: (-len(u), sorted(u))))
        top, bottom = self.space.X, self.space.empty
        self.zero = MeadowElement(top, lattice.assign[top].zero())
        self.one = MeadowElement(top, lattice.assign[top].one())
        self.a = MeadowElement(bottom, lattice.assign[bottom].zero())
        self._elements: list | None = None
        # finite meadows memoise + and * since axiom checks revisit pairs
        self._memo: dict | None = {} if lattice.enumerable else None

    # -- structure ------------------------------------------------------
    def fiber(self, z) -> Ring:
        """The ring ``M_z``; ``z`` may be a zero-part element or an index."""
        idx = z.index if isinstance(z, MeadowElement) else frozenset(z)
        if idx not in self.lattice.assign:
            raise MixedMeadows(f"{open_key(idx)} is not an index of this meadow")
        return self.lattice.assign[idx]

    def element(self, index, value) -> MeadowElement:
        idx = frozenset(index)
        return MeadowElement(idx, self.fiber(idx).canonical(value))

    def check(self, x: MeadowElement) -> MeadowElement:
        if not isinstance(x, MeadowElement) or x.index not in self.lattice.assign:
            raise MixedMeadows(f"{x} is not an element of this meadow")
        if not self.lattice.assign[x.index].contains(x.value):
            raise MixedMeadows(f"{x} is not an element of this meadow")
        return x

    @property
    def enumerable(self) -> bool:
        return self.lattice.enumerable

    def elements(self) -> list[MeadowElement]:
        """All elements, top index first, each fiber in canonical order."""
        if not self.enumerable:
            raise NotEnumerable("the meadow has an infinite fiber")
        if self._elements is None:
            self._elements = [
                MeadowElement(i, v) for i in self.indices for v in self.lattice.assign[i].elements()
            ]
        return list(self._elements)

    @property
    def size(self) -> int | None:
        return len(self.elements()) if self.enumerable else None

    def probe_elements(self) -> list[MeadowElement]:
        return [MeadowElement(i, v) for i in self.indices for v in self.lattice.sample(i)]

    def push(self, x: MeadowElement, j) -> object:
        """The value of ``x`` transported down to index ``j``."""
        return self.lattice.restriction(j, x.index).apply(x.value)

    # -- operations -----------------------------------------------------
    def _op(self, name: str, x: MeadowElement, y: MeadowElement) -> MeadowElement:
        m = x.index & y.index
        r = self.lattice.assign[m]
        op = r.add if name == "+" else r.mul
        return MeadowElement(m, op(self.push(x, m), self.push(y, m)))

    def madd(self, x: MeadowElement, y: MeadowElement) -> MeadowElement:
        if self._memo is None:
            return self._op("+", x, y)
        key = ("+", x, y)
        out = self._memo.get(key)
        if out is None:
            out = self._memo[key] = self._op("+", x, y)
        return out

    def mmul(self, x: MeadowElement, y: MeadowElement) -> MeadowElement:
        if self._memo is None:
            return self._op("*", x, y)
        key = ("*", x, y)
        out = self._memo.get(key)
        if out is None:
            out = self._memo[key] = self._op("*", x, y)
        return out

    def mneg(self, x: MeadowElement) -> MeadowElement:
        return MeadowElement(x.index, self.lattice.assign[x.index].neg(x.value))

    def zero_part(self, x: MeadowElement) -> MeadowElement:
        """``0 . x``: the zero of the fiber containing ``x``."""
        return MeadowElement(x.index, self.lattice.assign[x.index].zero())

    def zero_parts(self) -> list[MeadowElement]:
        return [MeadowElement(i, self.lattice.assign[i].zero()) for i in self.indices]

    def is_zero_part(self, z: MeadowElement) -> bool:
        return z == self.zero_part(z)

    def leq(self, z: MeadowElement, w: MeadowElement) -> bool:
        """``z <= w`` iff ``z . w = z``."""
        for e in (z, w):
            if not self.is_zero_part(self.check(e)):
                raise ValueError(f"{e} is not a zero-part")
        return self.mmul(z, w) == z

    def transition_map(self, z: MeadowElement, w: MeadowElement) -> "TranslationHom":
        """``x -> x + z`` from ``M_w`` to ``M_z`` for zero-parts ``z <= w``."""
        if not self.leq(z, w):
            raise NotComparable(f"{z} is not below {w}")
        return TranslationHom(self.fiber(w), self.fiber(z), self, w.index, z)

    # -- units and inverses ----------------------------------------------
    def J_set(self, x: MeadowElement) -> list[frozenset]:
        """Indices ``j <= index(x)`` where the image of ``x`` is a unit."""
        return [
            j
            for j in self.space.opens
            if j <= x.index and self.lattice.assign[j].is_unit(self.push(x, j))
        ]

    def J_maximal(self, x: MeadowElement) -> list[frozenset]:
        js = self.J_set(x)
        return [j for j in js if not any(j < k for k in js)]

    def J_max(self, x: MeadowElement) -> frozenset | None:
        mx = self.J_maximal(x)
        return mx[0] if len(mx) == 1 else None

    def minverse(self, x: MeadowElement) -> MeadowElement:
        self.check(x)
        mx = self.J_maximal(x)
        if len(mx) != 1:
            w = _no_maximum(x, mx)
            raise NotCommon(f"J has no maximum for {x}", w)
        m = mx[0]
        return MeadowElement(m, self.lattice.assign[m].inverse(self.push(x, m)))

    def to_json(self) -> dict:
        d = self.lattice.to_json()
        d["type"] = "meadow"
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "Meadow":
        body = dict(d)
        body["type"] = DirectedLattice.doc_type
        lat = DirectedLattice.from_json(body)
        try:
            return cls(lat)
        except IncoherentLattice as exc:
            raise DocumentError(str(exc)) from None

    def __eq__(self, other):
        return isinstance(other, Meadow) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"Meadow({self.lattice!r})"


def from_directed_lattice(lat: Presheaf) -> Meadow:
    return Meadow(lat)


@dataclass(frozen=True, eq=False)
class TranslationHom(RingHom):
    """``x -> x + z`` from the fiber at ``source_index`` to the fiber of ``z``."""

    meadow: Meadow = None
    source_index: frozenset = frozenset()
    z: MeadowElement = None

    rule = "translate"

    def apply(self, v):
        return self.meadow.madd(MeadowElement(self.source_index, v), self.z).value

    def label(self):
        return f"+{open_key(self.z.index)}"


def _no_maximum(x: MeadowElement, maximal: list) -> Witness:
    return Witness("no-maximum", {"element": x, "maximal": sorted(maximal, key=sort_key)})


# ----------------------------------------------------------------------
# The common-meadow criterion


def _pool(m: Meadow, samples) -> tuple[list, str]:
    if samples is None:
        return m.elements(), "exhaustive"
    if samples == "probes":
        return m.probe_elements(), "sample"
    return [m.check(x) for x in samples], "sample"


def is_common(m: Meadow, samples=None):
    """``True`` when every ``J_x`` has a maximum, else a :class:`Witness`.

    With finite fibers every element is checked.  Infinite fibers need an
    explicit element list (or ``samples="probes"``); a sampled ``True`` only
    says no counterexample was found among the samples.
    """
    if samples is None and not m.enumerable:
        raise NotEnumerable("infinite fibers: pass samples to search for a witness")
    pool, _ = _pool(m, samples)
    for x in pool:
        mx = m.J_maximal(x)
        if len(mx) != 1:
            return _no_maximum(x, mx)
    return True


def J_set(m: Meadow, x: MeadowElement) -> list[frozenset]:
    return m.J_set(x)


def minverse(m: Meadow, x: MeadowElement) -> MeadowElement:
    return m.minverse(x)


def fiber(m: Meadow, z) -> Ring:
    return m.fiber(z)


def transition_map(m: Meadow, z: MeadowElement, w: MeadowElement) -> TranslationHom:
    return m.transition_map(z, w)


# ----------------------------------------------------------------------
# Axiom reports


def _first(cases: Iterable, pred) -> object | None:
    for c in cases:
        if not pred(*c):
            return c
    return None


def _axiom(name, cases, pred, labels) -> object:
    bad = _first(cases, pred)
    if bad is None:
        return True
    return Witness(name, dict(zip(labels, bad)))


def verify_premeadow(m: Meadow, samples=None) -> Report:
    """Check P1-P10, the element ``a`` and the zero-part lattice.

    Exhaustive over all elements (``|M|^3`` triples for the ternary laws)
    unless ``samples`` is given, in which case the report is marked as
    sampled.
    """
    if samples is None and not m.enumerable:
        raise NotEnumerable("infinite fibers: pass samples for a sampled report")
    E, mode = _pool(m, samples)
    add, mul, neg = m.madd, m.mmul, m.mneg
    zero, one = m.zero, m.one
    pairs = lambda: itertools.product(E, repeat=2)  # noqa: E731
    triples = lambda: itertools.product(E, repeat=3)  # noqa: E731
    singles = lambda: ((x,) for x in E)  # noqa: E731
    r = Report("pre-meadow axioms", mode=mode)
    res = r.results
    res["0 != 1"] = True if zero != one else Witness("zero-equals-one", {})
    res["P1"] = _axiom("P1", triples(), lambda x, y, z: add(add(x, y), z) == add(x, add(y, z)), "xyz")
    res["P2"] = _axiom("P2", pairs(), lambda x, y: add(x, y) == add(y, x), "xy")
    res["P3"] = _axiom("P3", singles(), lambda x: add(x, zero) == x, "x")
    res["P4"] = _axiom("P4", singles(), lambda x: add(x, neg(x)) == mul(zero, x), "x")
    res["P5"] = _axiom("P5", triples(), lambda x, y, z: mul(mul(x, y), z) == mul(x, mul(y, z)), "xyz")
    res["P6"] = _axiom("P6", pairs(), lambda x, y: mul(x, y) == mul(y, x), "xy")
    res["P7"] = _axiom("P7", singles(), lambda x: mul(one, x) == x, "x")
    res["P8"] = _axiom(
        "P8", triples(), lambda x, y, z: mul(x, add(y, z)) == add(mul(x, y), mul(x, z)), "xyz"
    )
    res["P9"] = _axiom("P9", singles(), lambda x: neg(neg(x)) == x, "x")
    res["P10"] = _axiom("P10", pairs(), lambda x, y: mul(zero, add(x, y)) == mul(mul(zero, x), y), "xy")
    # the absorbing element a: a zero-part with a one-element fiber, x + a = a
    cands = []
    for z in m.zero_parts():
        r_z = m.fiber(z)
        if r_z.enumerable and r_z.size == 1 and all(add(x, z) == z for x in E):
            cands.append(z)
    res["a"] = True if cands == [m.a] else Witness("element-a", {"candidates": cands})
    # 0 . M ordered by z <= w iff z w = z matches the index lattice
    bad = None
    for z, w in itertools.product(m.zero_parts(), repeat=2):
        if not m.is_zero_part(mul(z, w)) or (mul(z, w) == z) != (z.index <= w.index):
            bad = (z, w)
            break
    res["zero-part lattice"] = True if bad is None else Witness("zero-part-order", {"z": bad[0], "w": bad[1]})
    return r


def verify_common(m: Meadow, samples=None) -> Report:
    """Check the J-criterion and M1-M4 for the inverse given by :meth:`Meadow.minverse`."""
    if samples is None and not m.enumerable:
        raise NotEnumerable("infinite fibers: pass samples for a sampled report")
    E, mode = _pool(m, samples)
    r = Report("common-meadow axioms", mode=mode)
    res = r.results
    crit = is_common(m, E if mode == "sample" else None)
    res["J has a maximum"] = crit
    if crit is not True:
        for k in ("M1", "M2", "M3", "M4"):
            res[k] = Witness("not-common", {"because": crit})
        return r
    add, mul, zero, one, inv = m.madd, m.mmul, m.zero, m.one, m.minverse
    res["M1"] = _axiom("M1", ((x,) for x in E), lambda x: mul(x, inv(x)) == add(one, mul(zero, inv(x))), "x")
    res["M2"] = _axiom(
        "M2", itertools.product(E, repeat=2), lambda x, y: inv(mul(x, y)) == mul(inv(x), inv(y)), "xy"
    )
    res["M3"] = _axiom(
        "M3", ((x,) for x in E), lambda x: inv(add(one, mul(zero, x))) == add(one, mul(zero, x)), "x"
    )
    res["M4"] = True if inv(zero) == m.a else Witness("M4", {"inverse_of_zero": inv(zero)})
    return r


# ----------------------------------------------------------------------
# Homomorphisms and isomorphism search


class MeadowHom:
    """An index map plus one ring homomorphism per source index."""

    def __init__(self, source: Meadow, target: Meadow, index_map: Mapping, components: Mapping):
        self.source = source
        self.target = target
        self.index_map = {frozenset(k): frozenset(v) for k, v in index_map.items()}
        self.components = {frozenset(k): h for k, h in components.items()}

    def __call__(self, x: MeadowElement) -> MeadowElement:
        return MeadowElement(self.index_map[x.index], self.components[x.index].apply(x.value))

    def compose(self, inner: "MeadowHom") -> "MeadowHom":
        """``self . inner``."""
        from .ring import hom_compose

        idx = {i: self.index_map[j] for i, j in inner.index_map.items()}
        comps = {i: hom_compose(self.components[inner.index_map[i]], h) for i, h in inner.components.items()}
        return MeadowHom(inner.source, self.target, idx, comps)

    def lattice_iso(self) -> LatticeIso:
        return LatticeIso.from_dict(self.source.space, self.target.space, self.index_map)

    def to_json(self) -> dict:
        return {
            "type": "meadow-hom",
            "index_map": {open_key(i): sorted(j) for i, j in self.index_map.items()},
            "components": {open_key(i): h.to_json() for i, h in self.components.items()},
        }


def identity_hom(m: Meadow) -> MeadowHom:
    return MeadowHom(m, m, {i: i for i in m.indices}, {i: Identity(r, r) for i, r in m.lattice.assign.items()})


def meadow_hom_verify(h: MeadowHom, samples=None):
    """``True`` if ``h`` preserves +, . and 1 and sends ``a`` to ``a``; else a :class:`Witness`.

    Finite meadows are checked on all pairs; otherwise on ``samples`` (or
    the fibers' probe elements).
    """
    src, tgt = h.source, h.target
    if set(h.index_map) != set(src.indices) or set(h.components) != set(src.indices):
        return Witness("incomplete", {"missing": sorted(set(src.indices) - set(h.components), key=sort_key)})
    for i, f in h.components.items():
        if f.domain != src.fiber(i) or f.codomain != tgt.fiber(h.index_map[i]):
            return Witness("component-signature", {"index": i})
    if h(src.one) != tgt.one:
        return Witness("unit", {"image_of_one": h(src.one)})
    if h(src.a) != tgt.a:
        return Witness("a", {"image_of_a": h(src.a)})
    if samples is None:
        E = src.elements() if src.enumerable else src.probe_elements()
    else:
        E = list(samples)
    for x, y in itertools.product(E, repeat=2):
        if h(src.madd(x, y)) != tgt.madd(h(x), h(y)):
            return Witness("additivity", {"x": x, "y": y})
        if h(src.mmul(x, y)) != tgt.mmul(h(x), h(y)):
            return Witness("multiplicativity", {"x": x, "y": y})
    return True


def meadow_isos(m: Meadow, n: Meadow, bound: int = ISO_SEARCH_BOUND) -> Iterator[MeadowHom]:
    """All isomorphisms ``m -> n`` in deterministic order.

    An isomorphism is a lattice isomorphism of the index lattices together
    with fiberwise ring isomorphisms commuting with the transitions.
    """
    for mm in (m, n):
        if mm.enumerable and mm.size > bound:
            raise TooLarge(f"meadow with {mm.size} elements exceeds the search bound {bound}")
    if len(m.indices) != len(n.indices):
        return
    for sigma in enumerate_lattice_isos(m.space, n.space):
        for comps in diagram_isos(m.lattice, n.lattice, sigma):
            yield MeadowHom(m, n, sigma.forward, comps)


def meadow_iso_search(m: Meadow, n: Meadow, bound: int = ISO_SEARCH_BOUND) -> MeadowHom | None:
    """The first isomorphism ``m -> n``, or ``None`` when they are not isomorphic."""
    return next(meadow_isos(m, n, bound), None)


def trivial_meadow(ring: Ring | None = None) -> Meadow:
    """``{0, 1, a}``: the two-element field over the one-point space."""
    from .ring import zmod
    from .topology import discrete

    s = discrete(["p"])
    return Meadow(DirectedLattice(s, {s.X: ring or zmod(2)}))
