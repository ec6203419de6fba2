"""Passing between presheaves on a finite space and pre-meadows with ``a``."""

from __future__ import annotations

import itertools
from typing import Mapping

from .errors import InvalidMorphism, InvalidPresheaf, NotAnIso, NotTD, Report, Undecided, Witness
from .meadow import (
    ISO_SEARCH_BOUND,
    DirectedLattice,
    Meadow,
    MeadowElement,
    MeadowHom,
    meadow_iso_search,
)
from .presheaf import Presheaf, PresheafMorphism, morphism_verify, sheafify, solve_glue, verify_presheaf
from .topology import FiniteSpace, LatticeIso, identity_iso, sort_key


def functor_T(p: Presheaf, check: bool = True) -> Meadow:
    """The pre-meadow with ``a`` formed by the disjoint union of the sections of ``p``."""
    if check:
        w = verify_presheaf(p)
        if not w:
            raise InvalidPresheaf(f"not a presheaf: {w}", w)
    return Meadow(DirectedLattice.from_presheaf(p), check=False)


def functor_T_on_morphism(m: PresheafMorphism) -> MeadowHom:
    """The meadow homomorphism acting on each fiber by the matching component."""
    w = morphism_verify(m)
    if not w:
        raise InvalidMorphism(f"not a presheaf morphism: {w}", w)
    src, tgt = functor_T(m.source, check=False), functor_T(m.target, check=False)
    return MeadowHom(src, tgt, {u: u for u in src.indices}, m.components)


def _phi(m: Meadow, phi: LatticeIso | None) -> LatticeIso:
    if phi is None:
        return identity_iso(m.space)
    if phi.source != m.space:
        raise NotAnIso("Phi must start at the meadow's index lattice")
    problem = phi.problem()
    if problem:
        raise NotAnIso(problem)
    return phi


def presheaf_of_meadow(m: Meadow, phi: LatticeIso | None = None) -> Presheaf:
    """``U -> M_{Phi^{-1}(U)}`` with the transition maps as restrictions."""
    phi = _phi(m, phi)
    x: FiniteSpace = phi.target
    back = phi.backward
    assign = {u: m.fiber(back[u]) for u in x.opens}
    restrict = {(v, u): m.lattice.restriction(back[v], back[u]) for v, u in x.hasse_edges}
    return Presheaf(x, assign, restrict)


def meadowify(m: Meadow, phi: LatticeIso | None = None, require_td: bool = True) -> Meadow:
    """``T`` of the sheafification of the presheaf attached to ``m``.

    The construction is only claimed for T_D spaces; ``require_td=False``
    skips that guard for experiments.
    """
    phi = _phi(m, phi)
    if require_td and not phi.target.is_TD():
        raise NotTD("meadowification needs a T_D space")
    plus, _ = sheafify(presheaf_of_meadow(m, phi))
    return functor_T(plus, check=False)


def phi_independence_check(
    m: Meadow, phi: LatticeIso, phi2: LatticeIso, bound: int = ISO_SEARCH_BOUND
) -> bool:
    return meadow_iso_search(meadowify(m, phi), meadowify(m, phi2), bound) is not None


# ----------------------------------------------------------------------
# The two conditions


def _values(m: Meadow, idx, samples: Mapping | None) -> list:
    if samples is not None and idx in samples:
        return list(samples[idx])
    r = m.fiber(idx)
    if r.enumerable:
        return r.elements()
    if samples is None:
        from .errors import NotEnumerable

        raise NotEnumerable(f"fiber {r} is infinite: pass samples")
    return r.probe_elements()


def _norm_samples(samples) -> Mapping | None:
    if samples is None:
        return None
    if samples == "probes":
        return {}
    return {frozenset(k): list(v) for k, v in samples.items()}


def condition1_check(m: Meadow, samples=None):
    """``x + z = y + z`` and ``x + w = y + w`` force ``x = y`` in ``M_{z v w}``.

    ``samples`` maps indices to candidate values for infinite fibers (or
    is ``"probes"``); finite fibers are always searched completely.
    """
    samples = _norm_samples(samples)
    zs = m.zero_parts()
    for z, w in itertools.combinations_with_replacement(zs, 2):
        k = z.index | w.index
        seen: dict = {}
        for v in _values(m, k, samples):
            x = MeadowElement(k, v)
            key = (m.madd(x, z), m.madd(x, w))
            if key in seen and seen[key] != x:
                return Witness("condition1", {"z": z, "w": w, "x": seen[key], "y": x})
            seen[key] = x
    return True


def _compatible(m: Meadow, fam) -> bool:
    for xi, xj in itertools.combinations(fam, 2):
        zij = m.zero_part(m.mmul(xi, xj))
        if m.madd(xi, zij) != m.madd(xj, zij):
            return False
    return True


def _glue(m: Meadow, fam) -> object | None:
    """An element ``x`` at the join with ``x + 0 x_i = x_i``, or ``None``."""
    view = Presheaf(m.space, m.lattice.assign, m.lattice.restrict)
    join = frozenset().union(*(x.index for x in fam))
    return solve_glue(view, join, [x.index for x in fam], [x.value for x in fam])


def condition2_check(m: Meadow, samples=None, families: str = "basis"):
    """Every pairwise compatible family ``{x_i}`` glues to some ``x``.

    ``families="basis"`` ranges over families indexed by sets of
    join-irreducible zero-parts; ``"all"`` ranges over every set of
    indices and searches the whole meadow for ``x`` (tiny inputs only).
    """
    samples = _norm_samples(samples)
    if families == "all":
        return _condition2_all(m)
    basis = sorted(m.space.join_irreducibles, key=sort_key)
    for k in range(2, len(basis) + 1):
        for idxs in itertools.combinations(basis, k):
            for vals in itertools.product(*(_values(m, i, samples) for i in idxs)):
                fam = [MeadowElement(i, v) for i, v in zip(idxs, vals)]
                if not _compatible(m, fam):
                    continue
                try:
                    glue = _glue(m, fam)
                except Undecided:
                    continue
                if glue is None:
                    return Witness("condition2", {"family": fam})
    return True


def _condition2_all(m: Meadow):
    E = m.elements()
    for k in range(2, len(m.indices) + 1):
        for idxs in itertools.combinations(m.indices, k):
            for vals in itertools.product(*(m.fiber(i).elements() for i in idxs)):
                fam = [MeadowElement(i, v) for i, v in zip(idxs, vals)]
                if not _compatible(m, fam):
                    continue
                if not any(all(m.madd(x, m.zero_part(xi)) == xi for xi in fam) for x in E):
                    return Witness("condition2", {"family": fam})
    return True


def functorequi_equivalence(
    m: Meadow, phi: LatticeIso | None = None, bound: int = ISO_SEARCH_BOUND
) -> Report:
    """Compare (condition1 and condition2) with ``meadowify(m) ~ m``.

    The report passes when both sides agree, whatever their common value.
    """
    c1 = condition1_check(m)
    c2 = condition2_check(m)
    mm = meadowify(m, phi, require_td=False)
    iso = meadow_iso_search(mm, m, bound)
    conditions = c1 is True and c2 is True
    r = Report("meadowify(M) ~ M versus conditions (1) and (2)")
    r.notes = {
        "condition1": c1,
        "condition2": c2,
        "isomorphic": iso is not None,
        "conditions_hold": conditions,
    }
    r.results["agreement"] = (
        True
        if conditions == (iso is not None)
        else Witness("disagreement", {"conditions": conditions, "isomorphic": iso is not None})
    )
    return r


# ----------------------------------------------------------------------
# The glued inverse


def glued_inverse(p: Presheaf, u, s) -> MeadowElement | None:
    """Invert ``s`` on the union of all opens where it restricts to a unit.

    Local inverses on those opens are glued with the sheaf property.  The
    result is ``None`` when the local inverses have no glue, which can only
    happen when ``p`` is not a sheaf.
    """
    u = frozenset(u)
    good = [v for v in p.space.opens if v <= u and p.assign[v].is_unit(p.restrict_value(s, u, v))]
    union = frozenset().union(*good)
    if not union:
        return MeadowElement(union, p.assign[union].zero())
    cover = [v for v in good if v]
    local = [p.assign[v].inverse(p.restrict_value(s, u, v)) for v in cover]
    g = solve_glue(p, union, cover, local)
    if g is None:
        return None
    if not p.assign[union].is_unit(p.restrict_value(s, u, union)):
        return None
    return MeadowElement(union, g)
