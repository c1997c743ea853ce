# Quot points as commuting matrices plus framing vectors.
from quasitrivial.linalg import Matrix
from quasitrivial.quot import (QuotPoint, conjugate, diagonal_point, krylov_closure,
                               support_decomposition, validate)

# three points of 3-space, each with a 1-dim eigenline; two framing vectors
qp = diagonal_point([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [[1, 0], [0, 1], [1, 1]])
print("n, r =", qp.n, qp.r)
print("valid:", validate(qp).ok)

# the framing vectors generate the module
print("closure of v_1:", krylov_closure(qp, [qp.vectors[0]]).length)
print("closure of v_1, v_2:", krylov_closure(qp, qp.vectors).length)

# a nilpotent block: one point of multiplicity 2
z = Matrix.zeros(2, 2)
fat = QuotPoint.build([[0, 0], [1, 0]], z, z, [[1, 0]])
for s in support_decomposition(fat):
    print("point", s.coords_json(), "multiplicity", s.multiplicity)

# a non-commuting pair is reported with a witness
bad = QuotPoint.build([[0, 1], [0, 0]], [[1, 0], [0, 0]], z, [[1, 1]])
print(validate(bad).to_json())

# a change of basis gives the same module
h = Matrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
print("support after conjugation:",
      [s.coords_json() for s in support_decomposition(conjugate(qp, h))])
print(qp.to_json())
