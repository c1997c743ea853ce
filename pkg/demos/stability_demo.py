# Stability of the kernel sheaf, Jordan-Hoelder factors and isomorphism.
from quasitrivial.linalg import Matrix
from quasitrivial.quot import apply_glr, diagonal_point
from quasitrivial.stability import (check_stability, is_isomorphic, jordan_holder,
                                    s_equivalence_class)

p, q, s = (0, 0, 0), (1, 0, 0), (0, 1, 0)

# two points, rank two: always on the wall
ss = diagonal_point([p, q], [[1, 0], [0, 1]])
print(check_stability(ss).to_json())

# proportional framing rows: the kernel contains a trivial summand
print(check_stability(diagonal_point([p, q], [[1, 0], [2, 0]])).status)

# three points with pairwise independent rows is stable
st = diagonal_point([p, q, s], [[1, 0], [0, 1], [1, 1]])
print(check_stability(st).status)

for f in jordan_holder(ss).factors:
    print("factor of rank", f.rank, "at", f.to_json()["support"])
print("S-class:", [[tuple(map(str, p)) for p in c] for c in s_equivalence_class(ss)])

# the GL_r action does not change the isomorphism class
g = Matrix([[2, 1], [1, 1]])
print("iso to a GL_2 translate:", is_isomorphic(st, apply_glr(st, g)).isomorphic)
moved = diagonal_point([p, q, (3, 3, 3)], [[1, 0], [0, 1], [1, 1]])
print("iso after moving a point:", is_isomorphic(st, moved).isomorphic)
