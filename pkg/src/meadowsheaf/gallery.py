"""Named worked examples, each built deterministically."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .meadow import Meadow, trivial_meadow
from .presheaf import Presheaf, constant_presheaf, direct_image
from .ring import INTEGERS, RATIONALS, FunctionRing, Inclusion, Identity, Ring, zmod
from .topology import ContinuousMap, FiniteSpace, discrete, sierpinski

# ----------------------------------------------------------------------
# Regular functions on the projective line over F2

#: the three rational points [x:y] of the projective line over F2
P1_POINTS = {"P0": (0, 1), "P1": (1, 1), "Pinf": (1, 0)}


def binary_forms(degree: int) -> list[tuple]:
    """Coefficient tuples ``(c_0..c_d)`` of ``sum c_i x^i y^(d-i)`` over F2."""
    return list(itertools.product((0, 1), repeat=degree + 1))


def eval_form(coeffs: tuple, point: tuple) -> int:
    x, y = point
    d = len(coeffs) - 1
    return sum(c * x**i * y ** (d - i) for i, c in enumerate(coeffs)) % 2


def _times_linear(coeffs: tuple, lin: tuple) -> tuple:
    """Multiply a form by the linear form with coefficients ``lin = (c_0, c_1)``."""
    out = [0] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i] = (out[i] + c * lin[0]) % 2
        out[i + 1] = (out[i + 1] + c * lin[1]) % 2
    return tuple(out)


def split_forms(degree: int, allowed_zeros) -> list[tuple]:
    """Products of linear forms vanishing only at points in ``allowed_zeros``.

    Over the algebraic closure a denominator must not vanish anywhere on the
    open set, which contains every non-rational point; so it has to split
    into linear factors over F2 with zeros outside the set.
    """
    # linear form vanishing exactly at [x:y] is y X + x Y, coefficients (c_0, c_1) = (x, y)
    linears = [(P1_POINTS[p][0], P1_POINTS[p][1]) for p in sorted(allowed_zeros)]
    forms = set()
    for combo in itertools.combinations_with_replacement(linears, degree):
        f = (1,)
        for lin in combo:
            f = _times_linear(f, lin)
        forms.add(f)
    return sorted(forms)


def regular_functions(u, max_degree: int = 3) -> frozenset:
    """Point functions ``U -> F2`` given by ``f/g`` with ``g`` a unit on ``U``."""
    pts = sorted(u)
    outside = set(P1_POINTS) - set(pts)
    funcs = set()
    for d in range(max_degree + 1):
        for g in split_forms(d, outside):
            if any(eval_form(g, P1_POINTS[p]) == 0 for p in pts):
                continue
            # g takes the value 1 on U, so f/g agrees with f there
            for f in binary_forms(d):
                funcs.add(tuple(eval_form(f, P1_POINTS[p]) for p in pts))
    return frozenset(funcs)


def _ring_for(u, funcs: frozenset) -> Ring:
    pts = sorted(u)
    if len(funcs) == 2 ** len(pts):
        return FunctionRing(tuple(pts), zmod(2))
    if funcs == {tuple([0] * len(pts)), tuple([1] * len(pts))}:
        return zmod(2)
    raise ValueError(f"unexpected function set on {pts}: {sorted(funcs)}")


def p1f2_presheaf() -> Presheaf:
    space = discrete(P1_POINTS)
    assign = {u: _ring_for(u, regular_functions(u)) for u in space.opens if u}
    return Presheaf(space, assign)


# ----------------------------------------------------------------------
# The other examples

AB = discrete(["a", "b"])


def notameadow_presheaf() -> Presheaf:
    """Z over the whole space, Q on each point, inclusions."""
    a, b = frozenset("a"), frozenset("b")
    return Presheaf(
        AB,
        {AB.X: INTEGERS, a: RATIONALS, b: RATIONALS},
        {(a, AB.X): Inclusion(INTEGERS, RATIONALS), (b, AB.X): Inclusion(INTEGERS, RATIONALS)},
    )


def ambiguity_presheaves() -> tuple[Presheaf, Presheaf]:
    """Two presheaves sharing one pre-meadow, swapped by exchanging the points."""
    a, b = frozenset("a"), frozenset("b")
    f = Presheaf(
        AB,
        {AB.X: INTEGERS, a: INTEGERS, b: RATIONALS},
        {(a, AB.X): Identity(INTEGERS, INTEGERS), (b, AB.X): Inclusion(INTEGERS, RATIONALS)},
    )
    swap = ContinuousMap(AB, AB, {"a": "b", "b": "a"})
    return f, direct_image(swap, f)


def function_sheaf(space: FiniteSpace, ring: Ring) -> Presheaf:
    """All functions ``U -> ring`` with restriction of functions."""
    return Presheaf(space, {u: FunctionRing(tuple(sorted(u)), ring) for u in space.opens if u})


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    description: str
    build: Callable[[], object]
    expected: dict = field(default_factory=dict)
    parts: dict = field(default_factory=dict)
    samples: dict = field(default_factory=dict)


def _entries() -> list[GalleryEntry]:
    third, half = Fraction(1, 3), Fraction(1, 2)
    a, b = frozenset("a"), frozenset("b")
    return [
        GalleryEntry(
            "p1f2",
            "regular functions on the projective line over F2 (discrete 3-point space)",
            p1f2_presheaf,
            {"nodes": 8, "edges": 12, "meadow_size": 21, "is_common": True, "is_sheaf": False},
        ),
        GalleryEntry(
            "notameadow",
            "Z over {a,b}, Q on each point, inclusion maps",
            notameadow_presheaf,
            {"nodes": 4, "edges": 4, "is_common": False, "is_sheaf": False},
            samples={"glueing": {a: [third], b: [third]}},
        ),
        GalleryEntry(
            "ambiguity",
            "F with F({a}) = Z, F({b}) = Q; part F-prime has the points swapped",
            lambda: ambiguity_presheaves()[0],
            {"nodes": 4, "edges": 4},
            parts={"F": lambda: ambiguity_presheaves()[0], "F-prime": lambda: ambiguity_presheaves()[1]},
        ),
        GalleryEntry(
            "constQ-discrete2",
            "constant Q on the discrete 2-point space",
            lambda: constant_presheaf(AB, RATIONALS),
            {"nodes": 4, "edges": 4, "is_sheaf": False},
            samples={"condition2": {a: [third], b: [half]}},
        ),
        GalleryEntry(
            "constZ2-discrete2",
            "constant Z/2 on the discrete 2-point space",
            lambda: constant_presheaf(AB, zmod(2)),
            {"nodes": 4, "edges": 4, "is_sheaf": False, "is_common": True, "meadow_size": 7},
        ),
        GalleryEntry(
            "constZ2-sierpinski",
            "constant Z/2 on the Sierpinski space",
            lambda: constant_presheaf(sierpinski(), zmod(2)),
            {"nodes": 3, "edges": 2, "is_sheaf": True, "is_common": True, "meadow_size": 5},
        ),
        GalleryEntry(
            "function-sheaf-2pt-Z2",
            "all Z/2-valued functions on the discrete 2-point space",
            lambda: function_sheaf(AB, zmod(2)),
            {"nodes": 4, "edges": 4, "is_sheaf": True, "is_common": True, "meadow_size": 9},
        ),
        GalleryEntry(
            "trivial",
            "the meadow {0, 1, a} over the one-point space",
            trivial_meadow,
            {"nodes": 2, "edges": 1, "is_common": True, "meadow_size": 3},
        ),
    ]


GALLERY: dict[str, GalleryEntry] = {e.name: e for e in _entries()}
MEADOW_SUFFIX = "-meadow"


def gallery_names() -> list[str]:
    return list(GALLERY)


def gallery(name: str, part: str | None = None):
    """Build a gallery example.

    ``NAME-meadow`` gives the pre-meadow ``T`` of the named presheaf.
    """
    from .bridge import functor_T

    as_meadow = name.endswith(MEADOW_SUFFIX) and name not in GALLERY
    base = name[: -len(MEADOW_SUFFIX)] if as_meadow else name
    if base not in GALLERY:
        raise KeyError(f"unknown gallery entry {name!r}; known: {', '.join(GALLERY)}")
    entry = GALLERY[base]
    if part is not None:
        if part not in entry.parts:
            raise KeyError(f"{base} has no part {part!r}; parts: {', '.join(entry.parts) or 'none'}")
        obj = entry.parts[part]()
    else:
        obj = entry.build()
    if as_meadow and not isinstance(obj, Meadow):
        obj = functor_T(obj)
    return obj
