# Ext dimensions from Koszul complexes, and two ways to get the tangent space.
from quasitrivial.homology import (adhm_tangent, cohomology_of_kernel, ext1_E_E,
                                   formula_dim_family, formula_dim_family_variant,
                                   formula_ext1_component, hom_E_Q, hom_IZ_OZ, koszul_ext)
from quasitrivial.linalg import Matrix
from quasitrivial.quot import Module, diagonal_point

origin = Module.point(0, 0, 0)
print("Ext(O_p, O_p):", koszul_ext(origin, origin).dims)
print("disjoint points:", koszul_ext(origin, Module.point(1, 2, 3)).dims)

z = Matrix.zeros(2, 2)
fat = Module(Matrix([[0, 0], [1, 0]]), z, z)
print("double point:", koszul_ext(fat, fat).dims, "hom(I_Z, O_Z) =", hom_IZ_OZ(fat))

qp = diagonal_point([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], [[1, 0], [0, 1], [1, 1], [1, 2]])
r, n = qp.r, qp.n
print("hom(E, Q) =", hom_E_Q(qp), "  matrix model:", adhm_tangent(qp))
print("ext^1(E, E) =", ext1_E_E(qp), "  expected:", formula_ext1_component(r, n))
print("h^i(E):", cohomology_of_kernel(qp).to_json())

# the two forms of the family count; only the first matches ext^1(E, E)
hz = hom_IZ_OZ(qp)
print("family count:", formula_dim_family(hz, r, n), "variant:", formula_dim_family_variant(hz, r, n))
