"""Meadowification of the constant Q meadow on two points.

The constant meadow violates the glueing condition: 1/3 on {a} and 1/2
on {b} have no common extension. Meadowifying replaces the top fiber by
Q (+) Q with the two projections. Over Z/2 the same construction changes
the top fiber from 2 to 4 elements, so the result is not isomorphic.
"""

from fractions import Fraction

from meadowsheaf.bridge import condition2_check, functorequi_equivalence, meadowify
from meadowsheaf.gallery import gallery
from meadowsheaf.meadow import meadow_iso_search

F = frozenset
A, B, AB = F("a"), F("b"), F("ab")

q = gallery("constQ-discrete2-meadow")
w = condition2_check(q, {A: [Fraction(1, 3)], B: [Fraction(1, 2)]})
print("condition 2 witness:", w.kind, [str(x) for x in w.detail["family"]])

mq = meadowify(q)
print("top fiber:", mq.fiber(AB))
print("edges:", mq.lattice.restrict[(A, AB)].label(), "/", mq.lattice.restrict[(B, AB)].label())

c = gallery("constZ2-discrete2-meadow")
mc = meadowify(c)
print("Z/2 top fiber sizes:", c.fiber(AB).size, "->", mc.fiber(AB).size)
print("isomorphic:", meadow_iso_search(mc, c) is not None)
r = functorequi_equivalence(c)
print("conditions hold:", r.notes["conditions_hold"], " isomorphic:", r.notes["isomorphic"])
