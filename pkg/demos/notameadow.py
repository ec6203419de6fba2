"""Walk through a pre-meadow that is not common.

The presheaf lives on the discrete two-point space {a, b}: Z on {a, b},
Q on each singleton, and the zero ring on the empty set. The element 2
on the top index becomes invertible on both {a} and {b}, but not on
their union, so the set of indices where it is invertible has no
maximum.
"""

from fractions import Fraction

from meadowsheaf.gallery import gallery
from meadowsheaf.meadow import is_common, verify_premeadow

F = frozenset

m = gallery("notameadow-meadow")
print("indices:", [sorted(i) for i in m.indices])

two = m.element(F("ab"), 2)
half = m.element(F("a"), Fraction(1, 2))
print("2 + 1/2 =", m.madd(two, half))
print("J(2) =", [sorted(j) for j in m.J_set(two)])

print("pre-meadow (sampled):", verify_premeadow(m, "probes").passed)
w = is_common(m, "probes")
print("common:", bool(w))
print("witness:", w.kind, w.detail["element"], "maximal", [sorted(j) for j in w.detail["maximal"]])
