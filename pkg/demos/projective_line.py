"""The structure sheaf of the projective line over F2 as a meadow.

Eight opens, 21 elements. Every pre-meadow and common-meadow axiom is
checked exhaustively, and one inverse is computed by hand.
"""

from meadowsheaf.bridge import functor_T
from meadowsheaf.gallery import gallery
from meadowsheaf.meadow import verify_common, verify_premeadow

F = frozenset

p = gallery("p1f2")
m = functor_T(p)
print("opens:", len(p.space.opens), "elements:", m.size)
for i in m.indices:
    print(f"  {sorted(i)}: {m.fiber(i)}")

for report in (verify_premeadow(m), verify_common(m)):
    print(report.mode, "pass" if report.passed else report.failures())

x = m.element(F(["P0", "P1"]), (1, 0))
print("x =", x, " J_max(x) =", sorted(m.J_max(x)), " 1/x =", m.minverse(x))
print("1/0 =", m.minverse(m.zero))
