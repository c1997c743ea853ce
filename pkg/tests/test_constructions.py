import random

import pytest

from quasitrivial.constructions import (
    ConstructionError,
    ExhaustedError,
    ExtensionSpec,
    Rank2Spec,
    build_rank2,
    count_point_quotient_homs,
    extend_by_point,
    iterate_construction,
    iterate_construction_with_stats,
    random_points,
    random_quot_point,
    random_rank2_spec,
    retry_stable_extension,
)
from quasitrivial.quot import (
    direct_sum,
    is_reduced_support,
    point_ideal,
    reduced_ideal,
    support_multiset,
    validate,
)
from quasitrivial.stability import (
    SEMISTABLE,
    STABLE,
    UNSTABLE,
    check_stability,
    reduced_data,
    subset_preimage_dims,
)

P0, P1, P2, P3 = (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)


def test_rank2_examples():
    qp = build_rank2(Rank2Spec((P0, P1, P2), ((1, 0), (0, 1), (1, 1))))
    assert validate(qp).ok
    assert check_stability(qp).status == STABLE
    assert check_stability(build_rank2(Rank2Spec((P0, P1), ((1, 0), (0, 1))))).status == SEMISTABLE
    with pytest.raises(ConstructionError):
        Rank2Spec((P0, P1, P2), ((1, 0), (2, 0), (1, 1)))
    with pytest.raises(ConstructionError):
        Rank2Spec((P0, P0, P2), ((1, 0), (0, 1), (1, 1)))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_rank2_unbalanced_structure(n):
    rng = random.Random(n)
    spec = random_rank2_spec(n, rng)
    qp = build_rank2(spec)
    data = reduced_data(qp)
    dims = subset_preimage_dims(data)
    full = (1 << n) - 1
    for j in range(n):
        # the points other than p_j carry a rank-one sub with length n - 1
        assert dims[full ^ (1 << j)] == 1


def test_extension_examples():
    base = reduced_ideal([P0, P1])
    qp = extend_by_point(ExtensionSpec(base, P2, (1, 2)))
    assert (qp.n, qp.r) == (3, 2)
    assert check_stability(qp).status == STABLE
    split = extend_by_point(ExtensionSpec(base, P2, (0, 0)))
    assert check_stability(split).status == UNSTABLE
    with pytest.raises(ConstructionError):
        extend_by_point(ExtensionSpec(base, P1, (1, 2)))
    unstable = direct_sum(point_ideal(P0), point_ideal(P0))
    with pytest.raises(ConstructionError):
        extend_by_point(ExtensionSpec(unstable, P2, (1, 2)))


def test_retry_examples():
    qp = retry_stable_extension(reduced_ideal([P0, P1]), P2, seed=1)
    assert check_stability(qp).status == STABLE and (qp.n, qp.r) == (3, 2)
    qp4 = retry_stable_extension(qp, P3, seed=1)
    assert check_stability(qp4).status == STABLE and (qp4.n, qp4.r) == (4, 3)
    semistable = direct_sum(point_ideal(P0), point_ideal(P1))
    with pytest.raises(ConstructionError):
        retry_stable_extension(semistable, P2)


def test_retry_exhaustion_reports_verdicts():
    # a single try with u drawn from {-1, 0, 1}: seed chosen so that u = 0
    base = reduced_ideal([P0, P1])
    for seed in range(50):
        try:
            retry_stable_extension(base, P2, seed=seed, max_tries=1)
        except ExhaustedError as exc:
            assert exc.verdicts and exc.verdicts[0] != STABLE
            return
    pytest.fail("no exhausting seed found")


@pytest.mark.parametrize("r, n", [(1, 3), (2, 5), (3, 4), (3, 6)])
def test_iterate_construction(r, n):
    qp, tries = iterate_construction_with_stats(r, n, seed=4)
    assert (qp.r, qp.n) == (r, n) and len(tries) == r - 1
    assert validate(qp).ok and is_reduced_support(qp)
    assert len(set(support_multiset(qp))) == n
    v = check_stability(qp)
    assert (v.status, v.certified) == (STABLE, True)


def test_iterate_construction_edges():
    qp = iterate_construction(4, 4, seed=0)
    assert check_stability(qp).status == SEMISTABLE
    with pytest.raises(ConstructionError):
        iterate_construction(5, 4)
    assert iterate_construction(2, 5, seed=3) == iterate_construction(2, 5, seed=3)


def test_point_homs():
    qp = build_rank2(Rank2Spec((P0, P1, P2), ((1, 0), (0, 1), (1, 1))))
    homs = count_point_quotient_homs(qp, [(5, 5, 5)])
    assert sorted(homs.values()) == [0, 1, 1, 1]
    assert homs[(5, 5, 5)] == 0
    homs = count_point_quotient_homs(reduced_ideal([P0, P3]))
    assert list(homs.values()) == [1, 1]


def test_random_quot_point_contract():
    for seed in range(10):
        for reduced in (True, False):
            qp = random_quot_point(5, 2, reduced=reduced, seed=seed)
            assert validate(qp).ok
            if reduced:
                assert is_reduced_support(qp)
