import itertools

import pytest
from hypothesis import given, settings, strategies as st

from meadowsheaf.errors import InvalidTopology, NotTD, Witness
from meadowsheaf.topology import (
    ContinuousMap,
    FiniteSpace,
    LatticeIso,
    all_topologies,
    covers_of,
    discrete,
    enumerate_lattice_isos,
    homeo_from_lattice_iso,
    homeomorphisms,
    identity_iso,
    identity_map,
    indiscrete,
    is_T0,
    is_TD,
    iso_from_map,
    minimal_open,
    point_labels,
    sierpinski,
    specialization_preorder,
    verify_topology,
)

F = frozenset
A, B, AB = F("a"), F("b"), F("ab")

# number of topologies on n labelled points (OEIS A000798)
TOPOLOGY_COUNTS = {1: 1, 2: 4, 3: 29, 4: 355}
# of which T0 (OEIS A001035, labelled posets)
T0_COUNTS = {1: 1, 2: 3, 3: 19, 4: 219}


def test_verify_topology_examples():
    s = verify_topology(["a", "b"], [[], ["a"], ["a", "b"]])
    assert isinstance(s, FiniteSpace) and s == sierpinski()
    w = verify_topology(["a", "b"], [[], ["a"], ["b"]])
    assert isinstance(w, Witness) and w.kind == "missing-union"
    assert w.detail["union"] == AB
    pts = ["a", "b", "c"]
    subsets = [c for k in range(4) for c in itertools.combinations(pts, k)]
    assert verify_topology(pts, subsets) == discrete(pts)


def test_bad_topologies_raise():
    with pytest.raises(InvalidTopology):
        FiniteSpace(["a", "b"], [[], ["a"], ["b"]])
    with pytest.raises(InvalidTopology):
        FiniteSpace(["a", "b"], [["a"], ["a", "b"]])
    with pytest.raises(InvalidTopology):
        FiniteSpace(["a", "b", "c"], [[], ["a", "b"], ["b", "c"], ["a", "b", "c"]])


def test_minimal_open_examples():
    assert minimal_open(discrete("ab"), "a") == A
    assert minimal_open(sierpinski(), "b") == AB
    assert minimal_open(indiscrete("ab"), "a") == AB


def test_separation_examples():
    assert is_TD(discrete("ab")) and is_T0(discrete("ab"))
    assert not is_TD(indiscrete("ab")) and not is_T0(indiscrete("ab"))
    assert is_TD(sierpinski()) and is_T0(sierpinski())
    # a lies in every open containing b
    assert ("a", "b") in specialization_preorder(sierpinski())
    assert ("b", "a") not in specialization_preorder(sierpinski())


def test_covers_examples():
    assert covers_of(sierpinski(), AB) == [(AB,)]
    assert sorted(covers_of(discrete("ab"), AB), key=len) == [(AB,), (A, B)]
    assert covers_of(discrete("ab"), F()) == [()]


def test_lattice_iso_counts():
    assert len(enumerate_lattice_isos(sierpinski(), sierpinski())) == 1
    assert len(enumerate_lattice_isos(discrete("ab"), discrete("ab"))) == 2
    assert enumerate_lattice_isos(discrete("ab"), sierpinski()) == []


def test_homeo_from_lattice_iso_examples():
    s = sierpinski()
    assert homeo_from_lattice_iso(identity_iso(s)) == identity_map(s)
    d = discrete("ab")
    swap = LatticeIso.from_dict(d, d, {F(): F(), A: B, B: A, AB: AB})
    assert homeo_from_lattice_iso(swap).mapping == {"a": "b", "b": "a"}
    with pytest.raises(NotTD):
        homeo_from_lattice_iso(identity_iso(indiscrete("ab")))


def test_lattice_iso_rejects_order_breaking_maps():
    s = FiniteSpace("abc", [[], ["a"], ["a", "b"], ["a", "b", "c"]])
    with pytest.raises(ValueError):
        LatticeIso.from_dict(s, s, {F(): F(), A: AB, AB: A, F("abc"): F("abc")})


def test_continuous_map_checks():
    d, s = discrete("ab"), sierpinski()
    assert ContinuousMap(d, s, {"a": "a", "b": "b"})
    with pytest.raises(ValueError):
        ContinuousMap(s, d, {"a": "a", "b": "b"})


def test_topology_counts():
    for n, count in TOPOLOGY_COUNTS.items():
        tops = all_topologies(point_labels(n))
        assert len(tops) == count
        assert sum(t.is_T0() for t in tops) == T0_COUNTS[n]


def test_space_json_round_trip():
    for s in all_topologies(point_labels(3)):
        d = s.to_json()
        assert FiniteSpace(d["points"], d["opens"]) == s


# ----------------------------------------------------------------------
# Properties over every small space

SPACES = [s for n in (1, 2, 3) for s in all_topologies(point_labels(n))]


def _brute_force_irredundant_covers(s, u):
    opens = [v for v in s.opens if v <= u and v]
    out = set()
    for k in range(len(opens) + 1):
        for c in itertools.combinations(opens, k):
            if F().union(*c) == u and all(F().union(*(c[:i] + c[i + 1:])) != u for i in range(len(c))):
                out.add(frozenset(c))
    return out


@pytest.mark.parametrize("s", SPACES, ids=repr)
def test_space_invariants(s):
    for u, v in itertools.product(s.opens, repeat=2):
        assert s.is_open(u | v) and s.is_open(u & v)
    for x in s.points:
        m = s.minimal_open(x)
        assert x in m and all(m <= u for u in s.opens if x in u)
    assert s.is_TD() == s.is_T0()
    for u in s.opens:
        got = {frozenset(c) for c in s.covers_of(u)}
        assert got == _brute_force_irredundant_covers(s, u)


@pytest.mark.parametrize("s", SPACES, ids=repr)
def test_reconstruction_reproduces_lattice_isos(s):
    isos = enumerate_lattice_isos(s, s)
    if not s.is_TD():
        if isos:
            with pytest.raises(NotTD):
                homeo_from_lattice_iso(isos[0])
        return
    maps = [homeo_from_lattice_iso(phi) for phi in isos]
    for phi, f in zip(isos, maps):
        assert all(f.image(u) == phi(u) for u in s.opens)
    # every homeomorphism arises from exactly one lattice automorphism
    assert sorted(sorted(f.mapping.items()) for f in maps) == sorted(
        sorted(f.mapping.items()) for f in homeomorphisms(s, s)
    )


@settings(max_examples=50)
@given(st.sampled_from(SPACES), st.data())
def test_homeomorphisms_induce_lattice_isos(s, data):
    homs = homeomorphisms(s, s)
    f = data.draw(st.sampled_from(homs))
    phi = iso_from_map(f)
    assert phi.problem() is None
    g = f.compose(f.inverse())
    assert g == identity_map(s)


@settings(max_examples=50)
@given(st.sampled_from(SPACES), st.sampled_from(SPACES), st.data())
def test_composition_of_continuous_maps(s, t, data):
    maps = [
        ContinuousMap(s, t, dict(zip(s.points, img)))
        for img in itertools.product(t.points, repeat=len(s.points))
        if all(s.is_open(F(x for x, y in zip(s.points, img) if y in v)) for v in t.opens)
    ]
    assert maps  # constant maps are always continuous
    f = data.draw(st.sampled_from(maps))
    assert f.compose(identity_map(s)) == f
    assert identity_map(t).compose(f) == f
