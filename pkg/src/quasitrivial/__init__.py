"""Exact computations with quasi-trivial sheaves on 3-space via commuting matrices."""
from .constructions import (
    ExtensionSpec,
    Rank2Spec,
    build_rank2,
    count_point_quotient_homs,
    extend_by_point,
    iterate_construction,
    random_quot_point,
    random_rank2_spec,
    retry_stable_extension,
)
from .experiments import commvar_tangent_sample, verify_dimension, verify_empty, verify_symn
from .homology import (
    CohomologyTable,
    ExtTable,
    adhm_tangent,
    cohomology_of_kernel,
    ext1_E_E,
    formula_dim_family,
    formula_disjoint_ext,
    formula_ext1_component,
    hom_E_Q,
    hom_IZ_OZ,
    koszul_ext,
)
from .linalg import Matrix, nullspace, rank, rref, solve, span_intersection, span_sum
from .quot import (
    Module,
    QuotPoint,
    Submodule,
    compare_reduced,
    hilbert_poly_kernel,
    hilbert_poly_point,
    krylov_closure,
    support_decomposition,
    validate,
)
from .stability import (
    SEMISTABLE,
    STABLE,
    UNSTABLE,
    StabilityVerdict,
    check_stability,
    is_isomorphic,
    jordan_holder,
    polystable_representative,
    s_equivalence_class,
)
