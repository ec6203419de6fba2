from fractions import Fraction
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from meadowsheaf.errors import DocumentError, DomainMismatch, MixedRings, NotAUnit, NotEnumerable, Witness
from meadowsheaf.ring import (
    INTEGERS,
    RATIONALS,
    ZERO,
    Composite,
    Diagonal,
    ExplicitTable,
    FunctionRing,
    Identity,
    Inclusion,
    Product,
    Projection,
    ReduceMod,
    ZeroMap,
    default_hom,
    enumerate_ring,
    format_element,
    hom_compose,
    hom_equal,
    hom_from_json,
    hom_verify,
    inverse,
    is_bijective,
    is_unit,
    parse_element,
    parse_ring_token,
    ring_add,
    ring_from_json,
    ring_homomorphisms,
    ring_isomorphisms,
    ring_mul,
    ring_neg,
    ring_one,
    ring_token,
    ring_zero,
    try_inverse,
    zmod,
)

Z2, Z3, Z4, Z6 = zmod(2), zmod(3), zmod(4), zmod(6)

FINITE_RINGS = [
    ZERO,
    Z2,
    Z3,
    Z4,
    Z6,
    zmod(8),
    Product((Z2, Z2)),
    Product((Z2, Z3)),
    Product((Z4, Z2)),
    FunctionRing(("p", "q"), Z3),
    FunctionRing(("p", "q", "r"), Z2),
]


# ----------------------------------------------------------------------
# Worked values


def test_addition_examples():
    assert ring_add(Z4(3), Z4(3)) == Z4(2)
    assert ring_add(ZERO(0), ZERO(0)) == ZERO(0)
    assert ring_add(RATIONALS(Fraction(1, 3)), RATIONALS(Fraction(1, 6))) == RATIONALS(Fraction(1, 2))


def test_multiplication_and_negation_examples():
    assert ring_mul(Z6(2), Z6(3)) == Z6(0)
    z2z2 = Product((Z2, Z2))
    assert ring_mul(z2z2((1, 0)), z2z2((1, 1))) == z2z2((1, 0))
    assert ring_neg(INTEGERS(5)) == INTEGERS(-5)
    assert ring_zero(Z3) == Z3(0) and ring_one(Z3) == Z3(1)


def test_units():
    assert not is_unit(Z6(2))
    assert is_unit(RATIONALS(2))
    assert is_unit(ZERO(0))
    assert not is_unit(INTEGERS(2))
    assert is_unit(INTEGERS(-1))


def test_inverses():
    assert try_inverse(Z6(5)) == Z6(5)
    assert try_inverse(Z4(2)) is None
    with pytest.raises(NotAUnit):
        inverse(Z4(2))
    r = Product((Z2, Z3))
    assert inverse(r((1, 1))) == r((1, 1))
    assert inverse(r((1, 2))) == r((1, 2))
    assert inverse(RATIONALS(Fraction(2, 3))) == RATIONALS(Fraction(3, 2))


def test_homomorphism_examples():
    assert ReduceMod(Z6, Z3)(Z6(4)) == Z3(1)
    w = hom_verify(ExplicitTable(Z6, Z4, tuple((v, v % 4) for v in range(6))))
    assert isinstance(w, Witness) and not w
    assert hom_compose(ReduceMod(Z4, Z2), Identity(Z4, Z4)) == ReduceMod(Z4, Z2)
    assert hom_verify(ReduceMod(Z6, Z3)) is True
    assert hom_verify(Inclusion(INTEGERS, RATIONALS)) is True


def test_enumeration_examples():
    assert [x.value for x in enumerate_ring(ZERO)] == [0]
    assert [x.value for x in enumerate_ring(Z3)] == [0, 1, 2]
    assert len(enumerate_ring(FunctionRing(("p", "q"), Z2))) == 4


def test_symbolic_rings_refuse_enumeration():
    for r in (INTEGERS, RATIONALS):
        assert not r.enumerable
        with pytest.raises(NotEnumerable):
            r.elements()


def test_canonical_representatives():
    assert Z4.canonical(7) == 3
    assert RATIONALS.canonical(Fraction(2, -4)) == Fraction(-1, 2)


def test_mixed_rings_rejected():
    with pytest.raises(MixedRings):
        Z2(1) + Z3(1)
    with pytest.raises(DomainMismatch):
        ReduceMod(Z4, Z2)(Z3(1))


def test_projection_and_diagonal():
    r = Product((Z2, Z3))
    assert Projection(r, Z3, 1)(r((1, 2))) == Z3(2)
    assert Diagonal(Z2, Product((Z2, Z2)))(Z2(1)).value == (1, 1)
    assert hom_verify(Projection(r, Z3, 1)) is True
    assert hom_verify(Diagonal(Z2, Product((Z2, Z2)))) is True


def test_composite_applies_left_to_right():
    h = Composite(zmod(12), Z2, (ReduceMod(zmod(12), Z4), ReduceMod(Z4, Z2)))
    assert h.apply(7) == 1
    assert hom_verify(h) is True


def test_default_hom_choices():
    assert isinstance(default_hom(Z4, Z2), ReduceMod)
    assert default_hom(Z4, Z3) is None
    assert isinstance(default_hom(INTEGERS, RATIONALS), Inclusion)
    assert isinstance(default_hom(Z3, ZERO), ZeroMap)


def test_hom_enumeration_counts():
    # ring maps Z/m -> Z/n exist exactly when n divides m
    assert len(ring_homomorphisms(Z4, Z2)) == 1
    assert len(ring_homomorphisms(Z3, Z2)) == 0
    assert len(ring_homomorphisms(Z2, ZERO)) == 1
    # Z2 x Z2 -> Z2: the two projections
    assert len(ring_homomorphisms(Product((Z2, Z2)), Z2)) == 2
    # automorphisms of Z2 x Z2: identity and swap
    assert len(ring_isomorphisms(Product((Z2, Z2)), Product((Z2, Z2)))) == 2
    assert len(ring_isomorphisms(Product((Z2, Z3)), Z6)) == 1


def test_is_bijective():
    assert is_bijective(Identity(Z3, Z3))
    assert not is_bijective(ReduceMod(Z4, Z2))


def test_ring_descriptors_round_trip():
    for r in FINITE_RINGS + [INTEGERS, RATIONALS]:
        assert ring_from_json(r.to_json()) == r
    assert ring_from_json({"kind": "zmod", "n": 4}) == Z4
    with pytest.raises(DocumentError):
        ring_from_json({"kind": "polynomial"})


def test_hom_descriptors_round_trip():
    r = Product((Z2, Z3))
    homs = [
        ReduceMod(Z4, Z2),
        Projection(r, Z3, 1),
        Inclusion(INTEGERS, RATIONALS),
        ExplicitTable(Z2, Z2, ((0, 0), (1, 1))),
    ]
    for h in homs:
        assert hom_from_json(h.to_json(), h.domain, h.codomain) == h


def test_ring_tokens():
    assert parse_ring_token("zmod4") == Z4
    assert parse_ring_token("zmod2xzmod2") == Product((Z2, Z2))
    assert ring_token(Product((Z2, Z3))) == "zmod2xzmod3"
    with pytest.raises(ValueError):
        parse_ring_token("reals")


# ----------------------------------------------------------------------
# Properties


@pytest.mark.parametrize("r", FINITE_RINGS, ids=str)
def test_ring_axioms_exhaustive(r):
    E = r.elements()
    zero, one = r.zero(), r.one()
    for x in E:
        assert r.add(x, zero) == x and r.mul(x, one) == x
        assert r.add(x, r.neg(x)) == zero
    for x, y in itertools.product(E, repeat=2):
        assert r.add(x, y) == r.add(y, x)
        assert r.mul(x, y) == r.mul(y, x)
    for x, y, z in itertools.product(E, repeat=3):
        assert r.add(r.add(x, y), z) == r.add(x, r.add(y, z))
        assert r.mul(r.mul(x, y), z) == r.mul(x, r.mul(y, z))
        assert r.mul(x, r.add(y, z)) == r.add(r.mul(x, y), r.mul(x, z))


@pytest.mark.parametrize("r", FINITE_RINGS, ids=str)
def test_is_unit_matches_brute_force(r):
    E = r.elements()
    for x in E:
        brute = any(r.mul(x, y) == r.one() for y in E)
        assert r.is_unit(x) == brute
        if brute:
            assert r.mul(x, r.inverse(x)) == r.one()
        else:
            assert r.inverse(x) is None


@pytest.mark.parametrize("r", FINITE_RINGS, ids=str)
def test_elements_print_and_parse(r):
    for x in r.elements():
        text = format_element(r, x)
        assert format_element(r, parse_element(r, text).value) == text


rationals = st.fractions(max_denominator=50)


@given(rationals, rationals, rationals)
def test_rationals_field_laws(x, y, z):
    R = RATIONALS
    assert R.mul(x, R.add(y, z)) == R.add(R.mul(x, y), R.mul(x, z))
    if x != 0:
        assert R.mul(x, R.inverse(x)) == 1
    assert R.is_unit(x) == (x != 0)


@given(st.integers(-10**6, 10**6), st.integers(2, 40))
def test_reduction_is_a_homomorphism_on_integers(k, n):
    h = ReduceMod(INTEGERS, zmod(n))
    assert h.apply(k) == k % n
    assert h.apply(k * k) == zmod(n).mul(h.apply(k), h.apply(k))


@settings(max_examples=60)
@given(st.integers(2, 12), st.integers(2, 12))
def test_verified_homs_preserve_units(m, n):
    src, dst = zmod(m), zmod(n)
    for h in ring_homomorphisms(src, dst):
        assert hom_verify(h) is True
        for x in src.elements():
            if src.is_unit(x):
                assert dst.is_unit(h.apply(x))
    assert bool(ring_homomorphisms(src, dst)) == (m % n == 0)


@settings(max_examples=40)
@given(st.sampled_from(FINITE_RINGS), st.sampled_from(FINITE_RINGS))
def test_hom_enumeration_members_verify(r, s):
    homs = ring_homomorphisms(r, s)
    for h in homs:
        assert hom_verify(h) is True
    # no two listed homomorphisms agree everywhere
    for g, h in itertools.combinations(homs, 2):
        assert not hom_equal(g, h)


SMALL = [ZERO, Z2, Z3, Z4, Product((Z2, Z2))]


def _brute_force_homs(r, s):
    """Every map between element lists that preserves 1, + and *."""
    E, F = r.elements(), s.elements()
    out = []
    for images in itertools.product(F, repeat=len(E)):
        f = dict(zip(E, images))
        if f[r.one()] != s.one():
            continue
        if all(
            f[r.add(x, y)] == s.add(f[x], f[y]) and f[r.mul(x, y)] == s.mul(f[x], f[y])
            for x, y in itertools.product(E, repeat=2)
        ):
            out.append(f)
    return out


@pytest.mark.parametrize("r,s", list(itertools.product(SMALL, repeat=2)), ids=str)
def test_hom_enumeration_matches_brute_force(r, s):
    found = {tuple(h.apply(x) for x in r.elements()) for h in ring_homomorphisms(r, s)}
    brute = {tuple(f[x] for x in r.elements()) for f in _brute_force_homs(r, s)}
    assert found == brute
