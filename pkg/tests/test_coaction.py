"""Graded derivations: generic cuts against the proved closed forms."""
import pytest
from gmpy2 import mpq

from motivix.coaction import TensorElem, d1_closed, dr, dr_closed_mtv, to_value
from motivix.core import FamilyIndex, IntegralWord, LinComb
from motivix.decompose import get_engine, product_span_contains
from motivix.errors import InvalidR
from motivix.families import family_value, log2_value, t_value, tz_value

Q = mpq


def _same_mod_products(elem: TensorElem) -> bool:
    """Zero check in the coalgebra tensor: group left blocks by the letter
    coordinates of their right factors, then test each block against the
    span of products."""
    eng = get_engine()
    blocks: dict = {}
    for (left, right), c in elem.items():
        for word, cw in eng.phi(LinComb.single(right)).items():
            blocks.setdefault(word, []).append((left, c * cw))
    for pairs in blocks.values():
        left = LinComb(pairs)
        if left.is_zero():
            continue
        if not product_span_contains(eng.phi(left), elem.left_weight):
            return False
    return True


def test_r_validation():
    v = t_value((2, 2))
    with pytest.raises(InvalidR):
        dr(v, 2)  # even degree
    with pytest.raises(InvalidR):
        dr(v, 5)  # out of range
    with pytest.raises(InvalidR):
        dr_closed_mtv((2, 2), -1)


def test_tensor_algebra():
    a = dr(t_value((2, 2)), 1)
    z = TensorElem.zero(1, 3)
    assert (a - a).is_zero()
    assert (a + z) == a
    assert a.scale(Q(2)) - a == a


def test_depth_one_unit_cuts():
    # leading unit doubles, trailing unit subtracts
    k = (1, 2)
    got = dr(t_value(k), 1)
    assert got == d1_closed(FamilyIndex("t", 0, k))
    assert not got.is_zero()
    k = (2, 1)
    got = dr(t_value(k), 1)
    assert got == d1_closed(FamilyIndex("t", 0, k))


def test_depth_one_T_vanishes_S_does_not():
    for parts in [(1, 2), (2, 3), (1, 1, 2)]:
        assert dr(family_value(FamilyIndex("T", 0, parts)), 1).is_zero()
    fi = FamilyIndex("S", 0, (1, 2))
    got = dr(family_value(fi), 1)
    assert got == d1_closed(fi)
    assert not got.is_zero()


def test_depth_one_tz_trailing_unit():
    for prefix in (0, 2):
        for head in [(2,), (1, 2), (3, 1)]:
            got = dr(tz_value(head + (1,), prefix), 1)
            want = d1_closed(FamilyIndex("tz", prefix, head + (1,)))
            assert got == want, (prefix, head)


@pytest.mark.parametrize(
    "parts,r",
    [
        ((2, 2), 1),
        ((2, 2), 3),
        ((3, 2), 3),
        ((2, 1, 2), 3),
        ((2, 2, 2), 5),
        ((1, 3, 2), 3),
        ((2, 2, 1), 3),  # divergent tail still reduces
        ((3, 1, 1), 3),
        ((5, 4), 3),
        ((5, 4), 5),
    ],
)
def test_closed_derivation_matches_generic(parts, r):
    generic = dr(t_value(parts), r)
    closed = dr_closed_mtv(parts, r)
    if r == 1:
        assert generic == closed
    else:
        assert _same_mod_products(generic - closed)


def test_closed_derivation_window_sign_sums():
    # weight-nine window cuts expose the sign-summed left factors: with
    # plain all-plus zetas the difference would be 6615/128 f7 on the
    # even-generator block
    generic = dr(t_value((5, 4)), 7)
    closed = dr_closed_mtv((5, 4), 7)
    assert _same_mod_products(generic - closed)


def test_weight_one_window_degenerates_to_log():
    # the only weight-one window content is the negative-sign letter
    assert tz_value((1,)) == log2_value().scale(-1)


def test_to_value_accepts_each_shape():
    w = IntegralWord(0, (1, 0), 1)
    assert to_value(w) == to_value(to_value(w))
    fi = FamilyIndex("t", 0, (2,))
    assert to_value(fi) == t_value((2,))
    with pytest.raises(TypeError):
        to_value("t(2)")
