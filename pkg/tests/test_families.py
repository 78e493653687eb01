"""Family expansions and the closed depth-one and depth-two reductions."""
import itertools

from gmpy2 import mpq

import pytest

from motivix.core import FamilyIndex
from motivix.decompose import get_engine
from motivix.errors import InvalidWord
from motivix.families import (
    distribution_factor,
    distribution_pair,
    family_value,
    log2_value,
    reduce_double_L,
    reduce_double_zeta,
    single_family_reduction,
    single_zeta_reduction,
    t_value,
    tz_value,
    zeta_value,
)
from motivix.numerics import period_of_value
from motivix.shuffle import value_mul

Q = mpq


def test_weight_one_identities():
    assert t_value((1,)) == log2_value()
    assert family_value(FamilyIndex("T", 0, (1,))) == log2_value()
    assert family_value(FamilyIndex("S", 0, (1,))) == log2_value().scale(-1)


def test_small_proportionalities():
    eng = get_engine()
    assert eng.phi(t_value((2,))) == eng.phi(zeta_value((2,))).scale(Q(3, 2))
    assert eng.phi(family_value(FamilyIndex("T", 0, (3,)))) == eng.phi(
        zeta_value((3,))
    ).scale(Q(7, 4))
    assert eng.phi(tz_value((3,))) == eng.phi(zeta_value((3,))).scale(Q(1, 4))


def test_single_zeta_reduction_signs():
    # plain: (-1)^a C(w-1, a); signed gains the (2^{1-w} - 1) factor
    assert single_zeta_reduction(0, 3, 1) == 1
    assert single_zeta_reduction(3, 4, 1) == -Q(20)
    assert single_zeta_reduction(2, 5, 1) == Q(15)
    assert single_zeta_reduction(3, 4, -1) == Q(315, 16)
    assert single_zeta_reduction(0, 2, -1) == Q(1, 2) - 1


def test_single_zeta_reduction_matches_engine():
    eng = get_engine()
    for prefix in range(0, 4):
        for k in range(2, 7 - prefix):
            for sign in (1, -1):
                got = eng.phi(zeta_value((k,), (sign,), prefix=prefix))
                want = eng.phi(zeta_value((prefix + k,))).scale(
                    single_zeta_reduction(prefix, k, sign)
                )
                assert got == want, (prefix, k, sign)


def test_single_family_reduction_matches_engine():
    eng = get_engine()
    for family in ("t", "T", "S", "tz"):
        for prefix in range(0, 3):
            for k in range(2, 6 - prefix):
                fi = FamilyIndex(family, prefix, (k,))
                got = eng.phi(family_value(fi))
                want = eng.phi(zeta_value((prefix + k,))).scale(
                    single_family_reduction(family, prefix, k)
                )
                assert got == want, (family, prefix, k)


def test_distribution_pair_is_exact():
    eng = get_engine()
    for prefix, parts in [(0, (2,)), (1, (2,)), (0, (2, 3)), (2, (3,)), (0, (4, 2))]:
        tz, plus, factor = distribution_pair(prefix, parts)
        assert factor == distribution_factor(FamilyIndex("tz", prefix, parts))
        assert eng.phi(tz) == eng.phi(plus).scale(factor)


@pytest.mark.parametrize("s1,s2", list(itertools.product((1, -1), repeat=2)))
def test_double_reduction_interior(s1, s2):
    eng = get_engine()
    for m, n in [(2, 3), (3, 2), (2, 5), (4, 3)]:
        got = eng.phi(reduce_double_zeta(m, n, s1, s2))
        want = eng.phi(zeta_value((m, n), (s1, s2)))
        assert got == want, (m, n, s1, s2)


@pytest.mark.parametrize("s1,s2", list(itertools.product((1, -1), repeat=2)))
def test_double_reduction_unit_edges(s1, s2):
    # a unit first or last part feeds a weight-one product term into the
    # reduction; it survives only with the series sign -1
    eng = get_engine()
    for m, n in [(1, 4), (1, 6), (4, 1), (6, 1)]:
        if (n, s2) == (1, 1):
            continue  # divergent tail has no canonical value
        got = eng.phi(reduce_double_zeta(m, n, s1, s2))
        want = eng.phi(zeta_value((m, n), (s1, s2)))
        assert got == want, (m, n, s1, s2)


def test_double_L_reduction_mod_products():
    # the induced reduction kills products, so compare leading projections
    eng = get_engine()
    for family in ("t", "T", "S"):
        for m, n in [(2, 3), (1, 4), (3, 2), (2, 5)]:
            w = m + n
            coeff = reduce_double_L(family, m, n)
            fi = FamilyIndex(family, 0, (m, n))
            got = eng.l_project(family_value(fi), w)
            want = coeff * eng.l_project(zeta_value((w,)), w)
            assert got == want, (family, m, n)


def test_zeta_value_rejects_bad_input():
    with pytest.raises(InvalidWord):
        zeta_value((2,), (1, 1))
    with pytest.raises(InvalidWord):
        zeta_value((0, 2))


def test_log2_numeric():
    import math

    v = period_of_value(log2_value(), 30)
    assert abs(float(v) - math.log(2)) < 1e-15
