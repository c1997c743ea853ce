import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import box_module, ext_from_box_resolution
from quasitrivial.constructions import (
    iterate_construction,
    Rank2Spec,
    build_rank2,
    monomial_module,
    random_monomial_block,
    random_partition,
    random_quot_point,
)
from quasitrivial.homology import (
    FormulaPreconditionError,
    NonCommutingError,
    adhm_tangent,
    cohomology_of_kernel,
    ext1_E_E,
    formula_dim_family,
    formula_dim_family_variant,
    formula_disjoint_ext,
    formula_ext1_component,
    hom_E_Q,
    hom_IZ_OZ,
    koszul_ext,
)
from quasitrivial.linalg import Matrix
from quasitrivial.quot import (
    Module,
    diagonal_point,
    point_ideal,
    reduced_ideal,
    support_decomposition,
)
from quasitrivial.stability import check_stability

P0, P1, P2, P3 = (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)


def random_module(rng, n, points=None):
    mod = None
    for k in random_partition(n, rng):
        p = points.pop() if points else tuple(rng.randint(-2, 2) for _ in range(3))
        block = monomial_module(random_monomial_block(k, rng), p)
        mod = block if mod is None else mod.direct_sum(block)
    return mod


def test_koszul_examples():
    assert koszul_ext(Module.point(0, 0, 0), Module.point(0, 0, 0)).dims == (1, 3, 3, 1)
    assert koszul_ext(Module.point(0, 0, 0), Module.point(1, 0, 0)).dims == (0, 0, 0, 0)
    two = Module.point(0, 0, 0).direct_sum(Module.point(1, 2, 3))
    assert koszul_ext(two, two).dims == (2, 6, 6, 2)


def test_koszul_rejects_noncommuting():
    bad = Module(Matrix([[0, 1], [0, 0]]), Matrix([[1, 0], [0, 0]]), Matrix.zeros(2, 2))
    with pytest.raises(NonCommutingError):
        koszul_ext(bad, bad)


@pytest.mark.parametrize("exps", [(2, 1, 1), (1, 2, 2), (3, 1, 1), (2, 2, 1)])
def test_box_modules_against_resolution(exps):
    M = box_module(*exps)
    assert koszul_ext(M, M).dims == ext_from_box_resolution(exps, M)
    rng = random.Random(sum(exps))
    for _ in range(4):
        N = random_module(rng, 4, points=[P0, P0, P1, P0])
        assert koszul_ext(M, N).dims == ext_from_box_resolution(exps, N)


def test_nilpotent_length_two():
    M = Module(Matrix([[0, 0], [1, 0]]), Matrix.zeros(2, 2), Matrix.zeros(2, 2))
    assert koszul_ext(M, M).dims == ext_from_box_resolution((2, 1, 1), M) == (2, 6, 6, 2)
    assert hom_IZ_OZ(M) == 6


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10_000))
def test_koszul_invariants(n1, n2, seed):
    rng = random.Random(seed)
    M, N = random_module(rng, n1), random_module(rng, n2)
    mn, nm = koszul_ext(M, N), koszul_ext(N, M)
    assert mn.euler_characteristic == 0
    assert (mn.hom, mn.ext1) == (nm.ext3, nm.ext2)
    M2 = random_module(rng, 2)
    assert koszul_ext(M.direct_sum(M2), N) == mn + koszul_ext(M2, N)


def test_hom_q_q_at_least_support_size():
    rng = random.Random(2)
    for _ in range(10):
        M = random_module(rng, 5, points=[P0, P1, P2, P3, (1, 1, 1)])
        assert koszul_ext(M, M).hom >= len(support_decomposition(M))


def test_cohomology_examples():
    stable = build_rank2(Rank2Spec((P0, P1, P2), ((1, 0), (0, 1), (1, 1))))
    assert cohomology_of_kernel(stable).to_json() == {"h0": 0, "h1": 1, "h2": 0, "h3": 0}
    assert cohomology_of_kernel(point_ideal(P0)).to_json() == {"h0": 0, "h1": 0, "h2": 0, "h3": 0}
    split = diagonal_point([P0, P1], [[1, 0], [1, 0]])
    c = cohomology_of_kernel(split)
    assert (c.h0, c.h1) == (1, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.booleans(), st.integers(0, 10_000))
def test_cohomology_euler(n, r, reduced, seed):
    qp = random_quot_point(n, r, reduced=reduced, seed=seed)
    c = cohomology_of_kernel(qp)
    assert c.h0 - c.h1 == r - n and c.h2 == c.h3 == 0


def test_hom_E_Q_examples():
    assert hom_E_Q(point_ideal(P0)) == 3
    assert hom_E_Q(build_rank2(Rank2Spec((P0, P1, P2), ((1, 0), (0, 1), (1, 1))))) == 12
    assert hom_E_Q(diagonal_point([P0, P1], [[1, 0], [0, 1]])) == 8


def test_ext1_examples():
    qp = build_rank2(Rank2Spec((P0, P1, P2), ((1, 0), (0, 1), (1, 1))))
    assert ext1_E_E(qp) == 9
    qp = build_rank2(Rank2Spec((P0, P1, P2, P3), ((1, 0), (0, 1), (1, 1), (1, 2))))
    assert hom_E_Q(qp) == 16 and ext1_E_E(qp) == 13
    qp = diagonal_point([P0, P1, P2, P3], [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]])
    assert check_stability(qp).status == "stable"
    assert hom_E_Q(qp) == 20 and ext1_E_E(qp) == 12


def test_ext1_refuses_non_stable():
    with pytest.raises(FormulaPreconditionError):
        ext1_E_E(diagonal_point([P0, P1], [[1, 0], [0, 1]]))
    with pytest.raises(FormulaPreconditionError):
        ext1_E_E(random_quot_point(4, 2, reduced=False, seed=1))


def test_hom_IZ_OZ_examples():
    assert hom_IZ_OZ(Module.point(0, 0, 0)) == 3
    assert hom_IZ_OZ(reduced_ideal([P0, P1, P2, P3])) == 12


def test_adhm_examples():
    assert adhm_tangent(point_ideal(P0)) == 3
    assert adhm_tangent(reduced_ideal([P0, P1])) == 6


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 3), st.booleans(), st.integers(0, 10_000))
def test_adhm_equals_hom_E_Q(n, r, reduced, seed):
    qp = random_quot_point(n, r, reduced=reduced, seed=seed)
    assert adhm_tangent(qp) == hom_E_Q(qp)


def test_formulas():
    for n in range(1, 12):
        assert formula_ext1_component(2, n, 3) == 4 * n - 3
        for r in range(1, n + 1):
            assert formula_dim_family(3 * n, r, n) == formula_ext1_component(r, n, 3)
            for d in range(1, 6):
                assert formula_dim_family(n * d, r, n) == formula_ext1_component(r, n, d)
            if r > 1:
                assert formula_dim_family_variant(3 * n, r, n) != formula_dim_family(3 * n, r, n)
    assert formula_disjoint_ext(1, 3, 4, 5) == (4, 15, 0)
    with pytest.raises(ValueError):
        formula_disjoint_ext(-1, 0, 0, 0)


@pytest.mark.parametrize("r, n", [(2, 3), (2, 5), (3, 4), (3, 5)])
def test_dim_family_matches_stable_models(r, n):
    qp = iterate_construction(r, n, seed=r * 10 + n)
    assert ext1_E_E(qp) == formula_dim_family(hom_IZ_OZ(qp), r, n)
