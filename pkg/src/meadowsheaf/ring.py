"""Exact commutative rings, their elements and ring homomorphisms.

Ring values are plain Python objects in canonical form: ``int`` residues in
``[0, n)`` for ``ZMod(n)``, ``int`` for the integers, ``Fraction`` for the
rationals and tuples for the composite kinds.  Every ring exposes its
arithmetic as methods acting on those raw values; :class:`RingElement` wraps
a value together with its ring for the public, operator-based API.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Iterator

from .errors import (
    DomainMismatch,
    DocumentError,
    MixedRings,
    NotAUnit,
    NotEnumerable,
    Witness,
)


class Ring:
    """Common interface of every ring kind."""

    enumerable: bool = False

    # -- arithmetic on raw values -------------------------------------
    def zero(self) -> Any:
        raise NotImplementedError

    def one(self) -> Any:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inverse(self, a):
        """Inverse of ``a`` or ``None`` when ``a`` is not a unit."""
        raise NotImplementedError

    def contains(self, v) -> bool:
        raise NotImplementedError

    def canonical(self, v):
        """Coerce ``v`` to the canonical representative, or raise ValueError."""
        if not self.contains(v):
            raise ValueError(f"{v!r} is not an element of {self}")
        return v

    # -- enumeration ----------------------------------------------------
    def elements(self) -> list:
        raise NotEnumerable(f"{self} is not enumerable")

    @property
    def size(self) -> int | None:
        return len(self.elements()) if self.enumerable else None

    def probe_elements(self) -> list:
        """Deterministic sample used by witness-mode checks."""
        return self.elements()

    @cached_property
    def table(self) -> "FiniteTable":
        return FiniteTable(self)

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        raise NotImplementedError

    def value_to_json(self, v) -> Any:
        return v

    def value_from_json(self, j) -> Any:
        return self.canonical(j)

    def label(self) -> str:
        return str(self)

    # -- sugar ----------------------------------------------------------
    def __call__(self, v) -> "RingElement":
        return RingElement(self, self.canonical(v))


@dataclass(frozen=True)
class ZeroRing(Ring):
    """The ring with one element, in which 0 = 1."""

    enumerable = True

    def zero(self):
        return 0

    def one(self):
        return 0

    def add(self, a, b):
        return 0

    def mul(self, a, b):
        return 0

    def neg(self, a):
        return 0

    def is_unit(self, a):
        return True

    def inverse(self, a):
        return 0

    def contains(self, v):
        return v == 0 and not isinstance(v, bool)

    def elements(self):
        return [0]

    def to_json(self):
        return {"kind": "zero"}

    def __str__(self):
        return "0"


ZERO = ZeroRing()


@dataclass(frozen=True)
class ZMod(Ring):
    n: int

    enumerable = True

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError("ZMod needs n >= 2; use ZERO for the zero ring")

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def is_unit(self, a):
        return math.gcd(a, self.n) == 1

    def inverse(self, a):
        if math.gcd(a, self.n) != 1:
            return None
        return pow(a, -1, self.n)

    def contains(self, v):
        return isinstance(v, int) and not isinstance(v, bool) and 0 <= v < self.n

    def canonical(self, v):
        if isinstance(v, str):
            v = int(v)
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"{v!r} is not an integer residue")
        return v % self.n

    def elements(self):
        return list(range(self.n))

    def to_json(self):
        return {"kind": "zmod", "n": self.n}

    def __str__(self):
        return f"Z/{self.n}"


def zmod(n: int) -> Ring:
    """``Z/n`` with the degenerate ``n == 1`` mapped to the zero ring."""
    return ZERO if n == 1 else ZMod(n)


@dataclass(frozen=True)
class Integers(Ring):
    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_unit(self, a):
        return a in (1, -1)

    def inverse(self, a):
        return a if a in (1, -1) else None

    def contains(self, v):
        return isinstance(v, int) and not isinstance(v, bool)

    def canonical(self, v):
        if isinstance(v, Fraction) and v.denominator == 1:
            return v.numerator
        if isinstance(v, str):
            try:
                return int(v)
            except ValueError:
                raise ValueError(f"{v!r} is not an integer literal") from None
        return super().canonical(v)

    def probe_elements(self):
        return [0, 1, -1, 2, -2, 3, -3, 6]

    def value_to_json(self, v):
        return str(v)

    def to_json(self):
        return {"kind": "integers"}

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class Rationals(Ring):
    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_unit(self, a):
        return a != 0

    def inverse(self, a):
        return 1 / a if a != 0 else None

    def contains(self, v):
        return isinstance(v, Fraction)

    def canonical(self, v):
        if isinstance(v, bool):
            raise ValueError("booleans are not rationals")
        if isinstance(v, (int, str)):
            try:
                return Fraction(v)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"{v!r} is not a rational literal") from None
        return super().canonical(v)

    def probe_elements(self):
        return [Fraction(x) for x in ("0", "1", "-1", "2", "1/2", "1/3", "-2/3", "3/7")]

    def value_to_json(self, v):
        return str(v)

    def to_json(self):
        return {"kind": "rationals"}

    def __str__(self):
        return "Q"


INTEGERS = Integers()
RATIONALS = Rationals()


class _Tuples(Ring):
    """Shared componentwise arithmetic for tuple-valued rings."""

    @property
    def parts(self) -> tuple:
        raise NotImplementedError

    @property
    def keys(self) -> tuple:
        raise NotImplementedError

    def zero(self):
        return tuple(r.zero() for r in self.parts)

    def one(self):
        return tuple(r.one() for r in self.parts)

    def add(self, a, b):
        return tuple(r.add(x, y) for r, x, y in zip(self.parts, a, b))

    def mul(self, a, b):
        return tuple(r.mul(x, y) for r, x, y in zip(self.parts, a, b))

    def neg(self, a):
        return tuple(r.neg(x) for r, x in zip(self.parts, a))

    def is_unit(self, a):
        return all(r.is_unit(x) for r, x in zip(self.parts, a))

    def inverse(self, a):
        out = []
        for r, x in zip(self.parts, a):
            y = r.inverse(x)
            if y is None:
                return None
            out.append(y)
        return tuple(out)

    def _shape_ok(self, v):
        return (
            isinstance(v, tuple)
            and len(v) == len(self.parts)
            and all(r.contains(x) for r, x in zip(self.parts, v))
        )

    def contains(self, v):
        return self._shape_ok(v)

    def canonical(self, v):
        if isinstance(v, dict):
            missing = set(self.keys) - set(v)
            if missing:
                raise ValueError(f"missing components {sorted(missing)}")
            v = [v[k] for k in self.keys]
        if not isinstance(v, (list, tuple)) or len(v) != len(self.parts):
            raise ValueError(f"{v!r} does not have {len(self.parts)} components")
        out = tuple(r.canonical(x) for r, x in zip(self.parts, v))
        if not self.contains(out):
            raise ValueError(f"{v!r} is not an element of {self}")
        return out

    @property
    def enumerable(self):  # type: ignore[override]
        return all(r.enumerable for r in self.parts)

    def elements(self):
        if not self.enumerable:
            raise NotEnumerable(f"{self} is not enumerable")
        return [t for t in itertools.product(*(r.elements() for r in self.parts)) if self.contains(t)]

    def probe_elements(self):
        if self.enumerable:
            return self.elements()
        probes = [r.probe_elements()[:5] for r in self.parts]
        return [t for t in itertools.product(*probes) if self.contains(t)]

    def value_to_json(self, v):
        return {k: r.value_to_json(x) for k, r, x in zip(self.keys, self.parts, v)}


@dataclass(frozen=True)
class Product(_Tuples):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("an empty product is the zero ring; use ZERO")

    @property
    def parts(self):
        return self.factors

    @property
    def keys(self):
        return tuple(str(i) for i in range(len(self.factors)))

    def value_to_json(self, v):
        return [r.value_to_json(x) for r, x in zip(self.factors, v)]

    def to_json(self):
        return {"kind": "product", "factors": [f.to_json() for f in self.factors]}

    def __str__(self):
        return " x ".join(_paren(f) for f in self.factors)


@dataclass(frozen=True)
class FunctionRing(_Tuples):
    """All functions from a finite point set into a finite ring, pointwise."""

    points: tuple
    codomain: Ring

    def __post_init__(self):
        pts = tuple(sorted(self.points))
        if not pts:
            raise ValueError("FunctionRing needs at least one point")
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points")
        object.__setattr__(self, "points", pts)

    @property
    def parts(self):
        return (self.codomain,) * len(self.points)

    @property
    def keys(self):
        return self.points

    def to_json(self):
        return {"kind": "function", "points": list(self.points), "codomain": self.codomain.to_json()}

    def __str__(self):
        return f"Fun({{{','.join(self.points)}}}, {self.codomain})"


@dataclass(frozen=True)
class LimitRing(_Tuples):
    """Compatible families: tuples whose components satisfy ``hom(x[s]) == x[t]``.

    ``constraints`` holds ``(source_index, target_index, hom)`` triples where
    ``hom`` maps ``components[source_index]`` to ``components[target_index]``.
    """

    labels: tuple
    components: tuple
    constraints: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "constraints", tuple(tuple(c) for c in self.constraints))
        if not self.components:
            raise ValueError("an empty limit is the zero ring; use ZERO")
        if len(self.labels) != len(self.components):
            raise ValueError("one label per component")
        for s, t, h in self.constraints:
            if h.domain != self.components[s] or h.codomain != self.components[t]:
                raise DomainMismatch(f"constraint {s}->{t} has the wrong signature")

    @property
    def parts(self):
        return self.components

    @property
    def keys(self):
        return self.labels

    def contains(self, v):
        if not self._shape_ok(v):
            return False
        return all(h.apply(v[s]) == v[t] for s, t, h in self.constraints)

    def elements(self):
        if not self.enumerable:
            raise NotEnumerable(f"{self} is not enumerable")
        n = len(self.components)
        checks: list[list] = [[] for _ in range(n)]
        for s, t, h in self.constraints:
            checks[max(s, t)].append((s, t, h))
        values = [c.elements() for c in self.components]
        out = []
        current = [None] * n

        def fill(i):
            if i == n:
                out.append(tuple(current))
                return
            for x in values[i]:
                current[i] = x
                if all(h.apply(current[s]) == current[t] for s, t, h in checks[i]):
                    fill(i + 1)

        fill(0)
        return out

    def to_json(self):
        return {
            "kind": "limit",
            "components": [[k, c.to_json()] for k, c in zip(self.labels, self.components)],
            "constraints": [[s, t, h.to_json()] for s, t, h in self.constraints],
        }

    def __str__(self):
        inner = ", ".join(f"{k}:{c}" for k, c in zip(self.labels, self.components))
        if not self.constraints:
            return " (+) ".join(_paren(c) for c in self.components)
        return f"lim[{inner}]"


def _paren(r: Ring) -> str:
    s = str(r)
    return f"({s})" if " " in s else s


# ----------------------------------------------------------------------
# Finite tables


class FiniteTable:
    """Index-based operation tables of an enumerable ring."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.elems = ring.elements()
        self.index = {v: i for i, v in enumerate(self.elems)}
        n = len(self.elems)
        idx = self.index
        self.add = [[idx[ring.add(a, b)] for b in self.elems] for a in self.elems]
        self.mul = [[idx[ring.mul(a, b)] for b in self.elems] for a in self.elems]
        self.zero = idx[ring.zero()]
        self.one = idx[ring.one()]
        self.n = n

    @cached_property
    def add_order(self) -> list[int]:
        orders = []
        for i in range(self.n):
            k, acc = 1, i
            while acc != self.zero:
                acc = self.add[acc][i]
                k += 1
            orders.append(k)
        return orders

    @cached_property
    def invariants(self) -> list[tuple]:
        z = self.zero
        out = []
        for i in range(self.n):
            row = self.mul[i]
            ann = sum(1 for j in range(self.n) if row[j] == z)
            unit = self.one in row
            out.append((self.add_order[i], row[i] == i, unit, ann, len(set(row))))
        return out

    @cached_property
    def signature(self) -> tuple:
        return (self.n, tuple(sorted(self.invariants)))

    @cached_property
    def additive_generators(self) -> list[int]:
        """Greedy additive generating set, starting with the identity."""
        gens = [self.one]
        span = self._span({self.zero}, self.one)
        while len(span) < self.n:
            best = max(
                (i for i in range(self.n) if i not in span),
                key=lambda i: (self.add_order[i], -i),
            )
            gens.append(best)
            span = self._span(span, best)
        return gens

    def _span(self, span: set, g: int) -> set:
        out = set(span)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                y = self.add[x][g]
                if y not in out:
                    out.add(y)
                    nxt.append(y)
            frontier = nxt
        return out


# ----------------------------------------------------------------------
# Elements


@dataclass(frozen=True)
class RingElement:
    ring: Ring
    value: Any

    def _check(self, other: "RingElement"):
        if not isinstance(other, RingElement) or other.ring != self.ring:
            raise MixedRings(f"cannot combine elements of {self.ring} and {getattr(other, 'ring', other)}")

    def __add__(self, other):
        self._check(other)
        return RingElement(self.ring, self.ring.add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return RingElement(self.ring, self.ring.sub(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return RingElement(self.ring, self.ring.mul(self.value, other.value))

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.value))

    def to_json(self):
        return self.ring.value_to_json(self.value)

    def __str__(self):
        return format_element(self.ring, self.value)


def ring_add(x: RingElement, y: RingElement) -> RingElement:
    return x + y


def ring_mul(x: RingElement, y: RingElement) -> RingElement:
    return x * y


def ring_neg(x: RingElement) -> RingElement:
    return -x


def ring_zero(r: Ring) -> RingElement:
    return RingElement(r, r.zero())


def ring_one(r: Ring) -> RingElement:
    return RingElement(r, r.one())


def is_unit(x: RingElement) -> bool:
    return x.ring.is_unit(x.value)


def try_inverse(x: RingElement) -> RingElement | None:
    """The inverse of ``x``, or ``None`` if ``x`` is not a unit."""
    y = x.ring.inverse(x.value)
    return None if y is None else RingElement(x.ring, y)


def inverse(x: RingElement) -> RingElement:
    y = try_inverse(x)
    if y is None:
        raise NotAUnit(f"{x} is not a unit in {x.ring}")
    return y


def enumerate_ring(r: Ring) -> list[RingElement]:
    return [RingElement(r, v) for v in r.elements()]


def format_element(r: Ring, v) -> str:
    import json

    return json.dumps(r.value_to_json(v), separators=(",", ":"), sort_keys=True)


def parse_element(r: Ring, text: str) -> RingElement:
    import json

    return RingElement(r, r.value_from_json(json.loads(text)))


# ----------------------------------------------------------------------
# Homomorphisms


def _components(r: Ring) -> tuple:
    return r.parts if isinstance(r, _Tuples) else ()


@dataclass(frozen=True)
class RingHom:
    domain: Ring
    codomain: Ring

    rule = "abstract"

    def apply(self, v):
        raise NotImplementedError

    def __call__(self, x: RingElement) -> RingElement:
        if x.ring != self.domain:
            raise DomainMismatch(f"{x} is not in the domain {self.domain} of {self.label()}")
        return RingElement(self.codomain, self.apply(x.value))

    def rule_problem(self) -> str | None:
        """Structural reason this rule cannot be a ring homomorphism."""
        return None

    def preimage(self, y):
        """Unique preimage of ``y``; ``None`` when ``y`` is not in the image.

        Raises ``NotImplementedError`` when the rule is not injective.
        """
        raise NotImplementedError(f"{self.rule} is not invertible")

    def params_json(self) -> dict:
        return {}

    def to_json(self) -> dict:
        d = {"rule": self.rule, "domain": self.domain.to_json(), "codomain": self.codomain.to_json()}
        d.update(self.params_json())
        return d

    def label(self) -> str:
        return self.rule


@dataclass(frozen=True)
class Identity(RingHom):
    rule = "identity"

    def apply(self, v):
        return v

    def rule_problem(self):
        if self.domain != self.codomain:
            return "identity needs equal domain and codomain"
        return None

    def preimage(self, y):
        return y

    def label(self):
        return "id"


@dataclass(frozen=True)
class ZeroMap(RingHom):
    rule = "zero"

    def apply(self, v):
        return 0

    def rule_problem(self):
        if not isinstance(self.codomain, ZeroRing):
            return "the zero map is a ring homomorphism only into the zero ring"
        return None

    def label(self):
        return "0"


@dataclass(frozen=True)
class ReduceMod(RingHom):
    """Residue map ``Z/n -> Z/m`` (``m | n``) or ``Z -> Z/m``."""

    rule = "reduce"

    def apply(self, v):
        return v % self.codomain.n

    def rule_problem(self):
        if not isinstance(self.codomain, ZMod):
            return "reduction needs a Z/m codomain"
        m = self.codomain.n
        if isinstance(self.domain, Integers):
            return None
        if not isinstance(self.domain, ZMod):
            return "reduction needs a Z or Z/n domain"
        if self.domain.n % m:
            return f"{m} does not divide {self.domain.n}"
        return None

    def label(self):
        return f"mod {self.codomain.n}"


@dataclass(frozen=True)
class Inclusion(RingHom):
    """Integers into rationals."""

    rule = "inclusion"

    def apply(self, v):
        return Fraction(v)

    def rule_problem(self):
        if not (isinstance(self.domain, Integers) and isinstance(self.codomain, Rationals)):
            return "inclusion is defined from Z to Q"
        return None

    def preimage(self, y):
        return y.numerator if y.denominator == 1 else None

    def label(self):
        return "incl"


@dataclass(frozen=True)
class Projection(RingHom):
    index: int = 0

    rule = "projection"

    def apply(self, v):
        return v[self.index]

    def rule_problem(self):
        comps = _components(self.domain)
        if not 0 <= self.index < len(comps):
            return "projection index out of range"
        if comps[self.index] != self.codomain:
            return "projection codomain differs from the component ring"
        return None

    def params_json(self):
        return {"index": self.index}

    def label(self):
        if isinstance(self.domain, (FunctionRing, LimitRing)):
            return f"proj {self.domain.keys[self.index]}"
        return f"proj {self.index}"


@dataclass(frozen=True)
class Diagonal(RingHom):
    rule = "diagonal"

    def apply(self, v):
        return (v,) * len(_components(self.codomain))

    def rule_problem(self):
        comps = _components(self.codomain)
        if not comps or any(c != self.domain for c in comps):
            return "diagonal needs every codomain component equal to the domain"
        return None

    def preimage(self, y):
        return y[0] if all(c == y[0] for c in y) else None

    def label(self):
        return "diag"


@dataclass(frozen=True)
class Tupling(RingHom):
    """Componentwise pairing ``v -> (h_1(v), ..., h_k(v))``."""

    parts: tuple = ()

    rule = "tupling"

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    def apply(self, v):
        return tuple(h.apply(v) for h in self.parts)

    def rule_problem(self):
        comps = _components(self.codomain)
        if len(comps) != len(self.parts):
            return "one part per codomain component"
        for h, c in zip(self.parts, comps):
            if h.domain != self.domain or h.codomain != c:
                return "tupling part has the wrong signature"
            p = h.rule_problem()
            if p:
                return p
        return None

    def params_json(self):
        return {"parts": [h.to_json() for h in self.parts]}

    def label(self):
        return "(" + ", ".join(h.label() for h in self.parts) + ")"


@dataclass(frozen=True)
class Restriction(RingHom):
    """Truncate a point-indexed family to a subset of its points."""

    rule = "restriction"

    @cached_property
    def _positions(self):
        src = self.domain.keys
        return tuple(src.index(k) for k in self.codomain.keys)

    def apply(self, v):
        return tuple(v[i] for i in self._positions)

    def rule_problem(self):
        if not isinstance(self.domain, (FunctionRing, LimitRing)) or type(self.domain) is not type(
            self.codomain
        ):
            return "restriction maps a point-indexed ring to one of the same kind"
        if not set(self.codomain.keys) <= set(self.domain.keys):
            return "restriction keeps a subset of the points"
        src_parts = dict(zip(self.domain.keys, self.domain.parts))
        if any(src_parts[k] != c for k, c in zip(self.codomain.keys, self.codomain.parts)):
            return "restriction changes a component ring"
        return None

    def label(self):
        return "restrict {" + ",".join(self.codomain.keys) + "}"


@dataclass(frozen=True)
class ExplicitTable(RingHom):
    """A map on a finite domain given by its full graph."""

    table: tuple = ()

    rule = "table"

    def __post_init__(self):
        object.__setattr__(self, "table", tuple((a, b) for a, b in self.table))

    @cached_property
    def _lookup(self):
        return dict(self.table)

    def apply(self, v):
        return self._lookup[v]

    def rule_problem(self):
        if not self.domain.enumerable:
            return "tables need a finite domain"
        if set(self._lookup) != set(self.domain.elements()) or len(self._lookup) != len(self.table):
            return "table must list every domain element exactly once"
        if not all(self.codomain.contains(b) for b in self._lookup.values()):
            return "table value outside the codomain"
        return None

    def preimage(self, y):
        pre = [a for a, b in self.table if b == y]
        if len(set(self._lookup.values())) != len(self.table):
            raise NotImplementedError("table is not injective")
        return pre[0] if pre else None

    def params_json(self):
        return {
            "table": [[self.domain.value_to_json(a), self.codomain.value_to_json(b)] for a, b in self.table]
        }


@dataclass(frozen=True)
class Composite(RingHom):
    """``steps`` applied left to right."""

    steps: tuple = ()

    rule = "composite"

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def apply(self, v):
        for h in self.steps:
            v = h.apply(v)
        return v

    def rule_problem(self):
        if not self.steps:
            return "empty composite"
        if self.steps[0].domain != self.domain or self.steps[-1].codomain != self.codomain:
            return "composite endpoints do not match"
        for g, h in zip(self.steps, self.steps[1:]):
            if g.codomain != h.domain:
                return "composite steps do not chain"
        for h in self.steps:
            p = h.rule_problem()
            if p:
                return p
        return None

    def preimage(self, y):
        for h in reversed(self.steps):
            y = h.preimage(y)
            if y is None:
                return None
        return y

    def params_json(self):
        return {"steps": [h.to_json() for h in self.steps]}

    def label(self):
        return " . ".join(h.label() for h in reversed(self.steps))


def identity(r: Ring) -> RingHom:
    return Identity(r, r)


def hom_apply(h: RingHom, x: RingElement) -> RingElement:
    return h(x)


def hom_compose(g: RingHom, h: RingHom) -> RingHom:
    """``g . h`` (apply ``h`` first), simplified where the rules allow."""
    if h.codomain != g.domain:
        raise DomainMismatch(f"cannot compose {g.label()} after {h.label()}: {h.codomain} != {g.domain}")
    if isinstance(h, Identity):
        return g
    if isinstance(g, Identity):
        return h
    if isinstance(g.codomain, ZeroRing):
        return ZeroMap(h.domain, g.codomain)
    if isinstance(g, ReduceMod) and isinstance(h, ReduceMod):
        return ReduceMod(h.domain, g.codomain)
    if isinstance(g, Restriction) and isinstance(h, Restriction):
        return Restriction(h.domain, g.codomain)
    if isinstance(g, Restriction) and isinstance(h, Diagonal):
        return Diagonal(h.domain, g.codomain)
    if isinstance(g, Restriction) and isinstance(h, Tupling):
        pos = g._positions
        parts = [_part(h, i) for i in pos]
        return Tupling(h.domain, g.codomain, tuple(parts))
    if isinstance(g, Projection) and isinstance(h, (Diagonal, Tupling)):
        return _part(h, g.index)
    if isinstance(g, Projection) and isinstance(h, Restriction):
        return Projection(h.domain, g.codomain, h._positions[g.index])
    steps = []
    for part in (h, g):
        steps.extend(part.steps if isinstance(part, Composite) else [part])
    return Composite(h.domain, g.codomain, tuple(steps))


def _part(h: RingHom, i: int) -> RingHom:
    if isinstance(h, Diagonal):
        return Identity(h.domain, h.domain)
    return h.parts[i]


def hom_equal(g: RingHom, h: RingHom) -> bool:
    """Extensional equality; on symbolic domains compared on probe elements."""
    if g.domain != h.domain or g.codomain != h.codomain:
        return False
    if g == h:
        return True
    dom = g.domain
    sample = dom.elements() if dom.enumerable else dom.probe_elements()
    return all(g.apply(v) == h.apply(v) for v in sample)


def hom_verify(h: RingHom):
    """``True`` when ``h`` preserves 1, + and *, else a :class:`Witness`.

    Finite domains are checked exhaustively over all pairs.  Symbolic domains
    are checked on the rule's structural validity plus the probe elements.
    """
    problem = h.rule_problem()
    note = {"reason": problem} if problem else {}
    dom, cod = h.domain, h.codomain
    exhaustive = dom.enumerable
    if problem and not exhaustive:
        return Witness("invalid-rule", {"rule": h.rule, **note})
    sample = dom.elements() if exhaustive else dom.probe_elements()
    try:
        images = {v: h.apply(v) for v in sample}
    except (KeyError, IndexError, TypeError, AttributeError) as exc:
        return Witness("invalid-rule", {"rule": h.rule, "reason": problem or repr(exc)})
    for v, w in images.items():
        if not cod.contains(w):
            return Witness("codomain", {"x": v, "image": w, **note})
    if images.get(dom.one(), None) != cod.one() and h.apply(dom.one()) != cod.one():
        return Witness("unit", {"image_of_one": h.apply(dom.one()), **note})

    def image(v):
        return images[v] if v in images else h.apply(v)

    for x, y in itertools.product(sample, repeat=2):
        if image(dom.add(x, y)) != cod.add(images[x], images[y]):
            return Witness("additivity", {"x": x, "y": y, **note})
    for x, y in itertools.product(sample, repeat=2):
        if image(dom.mul(x, y)) != cod.mul(images[x], images[y]):
            return Witness("multiplicativity", {"x": x, "y": y, **note})
    if problem:
        return Witness("invalid-rule", {"rule": h.rule, **note})
    return True


def is_bijective(h: RingHom) -> bool:
    if not (h.domain.enumerable and h.codomain.enumerable):
        raise NotEnumerable("bijectivity is only decided for finite rings")
    images = {h.apply(v) for v in h.domain.elements()}
    return len(images) == h.domain.size == h.codomain.size


# ----------------------------------------------------------------------
# Canonical maps and homomorphism enumeration


def default_hom(src: Ring, dst: Ring) -> RingHom | None:
    """The evident homomorphism ``src -> dst`` when one is implied by the kinds."""
    if src == dst:
        return Identity(src, dst)
    if isinstance(dst, ZeroRing):
        return ZeroMap(src, dst)
    if isinstance(dst, ZMod) and (
        isinstance(src, Integers) or (isinstance(src, ZMod) and src.n % dst.n == 0)
    ):
        return ReduceMod(src, dst)
    if isinstance(src, Integers) and isinstance(dst, Rationals):
        return Inclusion(src, dst)
    if isinstance(dst, (FunctionRing, LimitRing)) and type(src) is type(dst):
        h = Restriction(src, dst)
        if h.rule_problem() is None:
            return h
    if isinstance(dst, (Product, FunctionRing)) and all(c == src for c in dst.parts):
        return Diagonal(src, dst)
    return None


def simplify_table(h: RingHom) -> RingHom:
    """Replace an explicit table by a named rule when one matches."""
    for cand in _named_candidates(h.domain, h.codomain):
        if cand.rule_problem() is None and hom_equal(cand, h):
            return cand
    return h


def _named_candidates(src: Ring, dst: Ring):
    cand = default_hom(src, dst)
    if cand is not None:
        yield cand
    comps = _components(src)
    for i, c in enumerate(comps):
        if c == dst:
            yield Projection(src, dst, i)
    targets = _components(dst)
    if comps and targets and len(comps) == len(targets):
        for perm in itertools.permutations(range(len(comps))):
            if all(comps[perm[j]] == targets[j] for j in range(len(targets))):
                yield Tupling(src, dst, tuple(Projection(src, targets[j], perm[j]) for j in range(len(targets))))


def ring_homomorphisms(src: Ring, dst: Ring) -> list[RingHom]:
    """All unital ring homomorphisms between two finite rings."""
    return list(_finite_homs(src, dst, bijective=False))


@lru_cache(maxsize=4096)
def _cached_isos(src: Ring, dst: Ring) -> tuple:
    return tuple(_isos(src, dst))


def ring_isomorphisms(src: Ring, dst: Ring) -> list[RingHom]:
    """All ring isomorphisms ``src -> dst`` in deterministic order.

    Finite rings are searched exhaustively.  Symbolic rings are handled for
    Z, Q and products or unconstrained limits of them, whose isomorphisms
    are exactly the component permutations.
    """
    return list(_cached_isos(src, dst))


def _isos(src, dst):
    if src.enumerable and dst.enumerable:
        if src.table.signature != dst.table.signature:
            return
        yield from _finite_homs(src, dst, bijective=True)
        return
    if src.enumerable != dst.enumerable:
        return
    yield from _symbolic_isos(src, dst)


def _atoms(r: Ring):
    if isinstance(r, (Integers, Rationals)):
        return None
    if isinstance(r, Product) or isinstance(r, FunctionRing) or (
        isinstance(r, LimitRing) and not r.constraints
    ):
        if all(isinstance(c, (Integers, Rationals)) for c in r.parts):
            return r.parts
    raise NotEnumerable(f"isomorphism search is not supported for {r}")


def _symbolic_isos(src, dst):
    a, b = _atoms(src), _atoms(dst)
    if a is None and b is None:
        if src == dst:
            yield Identity(src, dst)
        return
    if a is None or b is None:
        # an atom against a one-component family
        if a is None and len(b) == 1 and b[0] == src:
            yield Tupling(src, dst, (Identity(src, src),))
        elif b is None and len(a) == 1 and a[0] == dst:
            yield Projection(src, dst, 0)
        return
    if sorted(map(str, a)) != sorted(map(str, b)):
        return
    for perm in itertools.permutations(range(len(a))):
        if all(a[perm[j]] == b[j] for j in range(len(b))):
            if src == dst and perm == tuple(range(len(a))):
                yield Identity(src, dst)
            else:
                yield Tupling(src, dst, tuple(Projection(src, b[j], perm[j]) for j in range(len(b))))


def _finite_homs(src: Ring, dst: Ring, bijective: bool) -> Iterator[RingHom]:
    if not (src.enumerable and dst.enumerable):
        raise NotEnumerable("homomorphism enumeration needs finite rings")
    ts, td = src.table, dst.table
    if bijective and ts.n != td.n:
        return
    gens = ts.additive_generators
    inv_s, inv_d = ts.invariants, td.invariants
    order_d = td.add_order

    def candidates(g):
        if g == ts.one:
            return [td.one]
        if bijective:
            return [t for t in range(td.n) if inv_d[t] == inv_s[g]]
        return [t for t in range(td.n) if ts.add_order[g] % order_d[t] == 0]

    def extend(mapping: dict, g: int, t: int):
        new = dict(mapping)
        frontier = list(mapping.items())
        while frontier:
            nxt = []
            for x, y in frontier:
                x2, y2 = ts.add[x][g], td.add[y][t]
                if x2 in new:
                    if new[x2] != y2:
                        return None
                else:
                    new[x2] = y2
                    nxt.append((x2, y2))
            frontier = nxt
        if bijective and len(set(new.values())) != len(new):
            return None
        return new

    def mult_ok(mapping, assigned):
        for i in assigned:
            for j in assigned:
                p = ts.mul[i][j]
                if p in mapping and mapping[p] != td.mul[mapping[i]][mapping[j]]:
                    return False
        return True

    def search(k, mapping, assigned):
        if k == len(gens):
            if not mult_ok(mapping, gens):
                return
            table = tuple((ts.elems[i], td.elems[mapping[i]]) for i in range(ts.n))
            yield simplify_table(ExplicitTable(src, dst, table))
            return
        g = gens[k]
        for t in candidates(g):
            m = extend(mapping, g, t)
            if m is None:
                continue
            if not mult_ok(m, gens[: k + 1]):
                continue
            yield from search(k + 1, m, gens[: k + 1])

    yield from search(0, {ts.zero: td.zero}, [])


# ----------------------------------------------------------------------
# JSON descriptors


def ring_from_json(d: Any) -> Ring:
    if not isinstance(d, dict) or "kind" not in d:
        raise DocumentError(f"ring descriptor must be an object with a 'kind': {d!r}")
    kind = d["kind"]
    try:
        if kind == "zero":
            return ZERO
        if kind == "zmod":
            return zmod(int(d["n"]))
        if kind == "integers":
            return INTEGERS
        if kind == "rationals":
            return RATIONALS
        if kind == "product":
            return Product(tuple(ring_from_json(f) for f in d["factors"]))
        if kind == "function":
            return FunctionRing(tuple(d["points"]), ring_from_json(d["codomain"]))
        if kind == "limit":
            labels = [c[0] for c in d["components"]]
            comps = [ring_from_json(c[1]) for c in d["components"]]
            cons = []
            for s, t, h in d.get("constraints", []):
                cons.append((int(s), int(t), hom_from_json(h, comps[int(s)], comps[int(t)])))
            return LimitRing(tuple(labels), tuple(comps), tuple(cons))
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"bad {kind} ring descriptor: {exc}") from None
    raise DocumentError(f"unknown ring kind {kind!r}")


_RULES = {
    "identity": Identity,
    "zero": ZeroMap,
    "reduce": ReduceMod,
    "inclusion": Inclusion,
    "projection": Projection,
    "diagonal": Diagonal,
    "tupling": Tupling,
    "restriction": Restriction,
    "table": ExplicitTable,
    "composite": Composite,
}


def hom_from_json(d: Any, domain: Ring | None = None, codomain: Ring | None = None) -> RingHom:
    if not isinstance(d, dict) or "rule" not in d:
        raise DocumentError(f"hom descriptor must be an object with a 'rule': {d!r}")
    dom = ring_from_json(d["domain"]) if "domain" in d else domain
    cod = ring_from_json(d["codomain"]) if "codomain" in d else codomain
    if dom is None or cod is None:
        raise DocumentError("hom descriptor needs a domain and codomain")
    rule = d["rule"]
    cls = _RULES.get(rule)
    if cls is None:
        raise DocumentError(f"unknown hom rule {rule!r}")
    try:
        if cls is Projection:
            return Projection(dom, cod, int(d["index"]))
        if cls is Tupling:
            comps = _components(cod)
            return Tupling(dom, cod, tuple(hom_from_json(p, dom, c) for p, c in zip(d["parts"], comps)))
        if cls is ExplicitTable:
            table = tuple((dom.value_from_json(a), cod.value_from_json(b)) for a, b in d["table"])
            return ExplicitTable(dom, cod, table)
        if cls is Composite:
            return Composite(dom, cod, tuple(hom_from_json(s) for s in d["steps"]))
        return cls(dom, cod)
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"bad {rule} hom descriptor: {exc}") from None


def parse_ring_token(token: str) -> Ring:
    """Ring catalog tokens such as ``zmod4`` or ``zmod2xzmod2``."""
    parts = token.strip().lower().split("x")
    rings = []
    for p in parts:
        if p.startswith("zmod") and p[4:].isdigit():
            rings.append(zmod(int(p[4:])))
        elif p in ("zero", "z1"):
            rings.append(ZERO)
        else:
            raise ValueError(f"unknown ring token {token!r}")
    return rings[0] if len(rings) == 1 else Product(tuple(rings))


def ring_token(r: Ring) -> str:
    if isinstance(r, ZMod):
        return f"zmod{r.n}"
    if isinstance(r, Product):
        return "x".join(ring_token(f) for f in r.factors)
    return str(r)


__all__ = [
    "Ring",
    "ZeroRing",
    "ZERO",
    "ZMod",
    "zmod",
    "Integers",
    "Rationals",
    "INTEGERS",
    "RATIONALS",
    "Product",
    "FunctionRing",
    "LimitRing",
    "RingElement",
    "RingHom",
    "Identity",
    "ZeroMap",
    "ReduceMod",
    "Inclusion",
    "Projection",
    "Diagonal",
    "Tupling",
    "Restriction",
    "ExplicitTable",
    "Composite",
]

