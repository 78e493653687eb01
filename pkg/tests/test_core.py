"""Container types: linear combinations, words, indices."""
from gmpy2 import mpq

import pytest

from motivix.core import EulerIndex, FamilyIndex, IntegralWord, LinComb
from motivix.errors import InvalidWord

Q = mpq


def test_lincomb_merges_duplicates_and_drops_zeros():
    a = EulerIndex(0, (2,), (1,))
    b = EulerIndex(0, (3,), (1,))
    lc = LinComb([(a, Q(1, 2)), (a, Q(1, 2)), (b, Q(0))])
    assert lc.coeff(a) == 1
    assert lc.coeff(b) == 0
    assert len(lc) == 1


def test_lincomb_algebra():
    a = EulerIndex(0, (2,), (1,))
    b = EulerIndex(0, (3,), (1,))
    x = LinComb.single(a) + LinComb.single(b).scale(Q(2))
    y = x - LinComb.single(b).scale(Q(2))
    assert y == LinComb.single(a)
    assert (y - y).is_zero()
    assert x.scale(Q(0)).is_zero()


def test_common_weight_rejects_mixtures():
    a = EulerIndex(0, (2,), (1,))
    b = EulerIndex(0, (3,), (1,))
    assert LinComb.single(a).common_weight() == 2
    with pytest.raises(Exception):
        (LinComb.single(a) + LinComb.single(b)).common_weight()


def test_word_text_round_trip():
    w = IntegralWord(0, (1, 0, -1), 1)
    assert IntegralWord.from_text(w.text()) == w
    assert w.text() == "0;p0m;p"
    with pytest.raises(InvalidWord):
        IntegralWord.from_text("0;xy;p")


def test_euler_index_text():
    idx = EulerIndex(0, (2, 3), (1, -1))
    assert idx.text() == "z(2,-3)"
    assert EulerIndex(1, (2,), (1,)).text() == "z_1(2)"
    assert idx.weight == 5
    assert idx.depth == 2


def test_family_index_validation():
    FamilyIndex("t", 0, (2, 3))
    with pytest.raises(InvalidWord):
        FamilyIndex("q", 0, (2,))
    with pytest.raises(InvalidWord):
        FamilyIndex("t", 0, ())
    with pytest.raises(InvalidWord):
        FamilyIndex("t", 0, (0, 2))
    with pytest.raises(InvalidWord):
        FamilyIndex("t", 0, (2,), (1,))  # signs are a z-only field
    with pytest.raises(InvalidWord):
        FamilyIndex("z", 0, (2,))  # missing signs


def test_family_index_convergence_flag():
    assert FamilyIndex("t", 0, (2, 1)).is_convergent() is False
    assert FamilyIndex("t", 0, (1, 2)).is_convergent() is True
    assert FamilyIndex("z", 0, (1,), (1,)).is_convergent() is False
    assert FamilyIndex("z", 0, (1,), (-1,)).is_convergent() is True
