# Building stable sheaves: the rank-2 recipe and adding one point at a time.
from quasitrivial.constructions import (ExtensionSpec, Rank2Spec, build_rank2,
                                        count_point_quotient_homs, extend_by_point,
                                        iterate_construction_with_stats)
from quasitrivial.homology import ext1_E_E
from quasitrivial.quot import reduced_ideal
from quasitrivial.stability import check_stability

spec = Rank2Spec(((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 1)), ((1, 0), (0, 1), (1, 1), (1, -1)))
E = build_rank2(spec)
print("rank 2, length 4:", check_stability(E).status, "ext1 =", ext1_E_E(E))

# extension of I_p by the ideal of two points; u = 0 is the split one
base = reduced_ideal([(0, 0, 0), (1, 0, 0)])
for u in [(0, 0), (1, 2)]:
    E = extend_by_point(ExtensionSpec(base, (0, 1, 0), u))
    print("u =", u, "->", check_stability(E).status)

E, tries = iterate_construction_with_stats(3, 6, seed=4)
print("(r, n) = (3, 6):", check_stability(E).status, "ext1 =", ext1_E_E(E), "tries:", tries)

# one epimorphism onto I_q for each support point, none elsewhere
for q, k in count_point_quotient_homs(E, [(9, 9, 9)]).items():
    print(tuple(str(x) for x in q), k)
