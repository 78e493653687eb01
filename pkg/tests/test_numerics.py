"""Exact-rational period evaluation and the table interface."""
import json

import pytest
from gmpy2 import mpq

from motivix.core import EulerIndex, IntegralWord
from motivix.errors import PrecisionCap, TableError
from motivix.numerics import (
    PeriodValue,
    clear_period_table,
    constant,
    emit_period_table,
    load_period_table,
    period,
    period_of_value,
    period_word,
    reconstruct_rational,
)
from motivix.shuffle import canonical_index

Q = mpq

# reference digits from independent tabulations
ZETA2 = "1.6449340668482264364724151666460251892189499012067984377355582293"
ZETA3 = "1.2020569031595942853997381615114499907649862923404988817922715553"
LOG2 = "0.6931471805599453094172321214581765680755001343602552541206800094"


def _close(q: mpq, ref: str, digits: int) -> bool:
    return abs(q - Q(int(ref.replace(".", "")), 10 ** (len(ref) - 2))) < Q(1, 10 ** digits)


def test_known_constants():
    assert _close(period_word(IntegralWord(0, (1, 0), 1), 40), ZETA2, 38)
    assert _close(constant("zeta3", 40), ZETA3, 38)
    assert _close(constant("log2", 40), LOG2, 38)


def test_period_of_value_linear():
    digits = 30
    z2 = canonical_index(EulerIndex(0, (2,), (1,)))
    z3 = canonical_index(EulerIndex(0, (3,), (1,)))
    combo = z2.scale(Q(2)) + z3.scale(Q(-1, 3))
    got = period_of_value(combo, digits)
    want = 2 * period_of_value(z2, digits) - period_of_value(z3, digits) / 3
    assert abs(got - want) < Q(1, 10 ** (digits - 2))


def test_period_value_decimal_round_trip():
    v = period(EulerIndex(0, (2,), (1,)), 35)
    assert isinstance(v, PeriodValue)
    assert v.digits == 35
    assert v.decimal.startswith("1.644934066848226436472415166646")
    assert abs(v.to_mpq() - constant("zeta2", 35)) < Q(1, 10 ** 34)


def test_precision_cap_guard():
    with pytest.raises(PrecisionCap):
        period(EulerIndex(0, (2,), (1,)), 50, cap=40)


def test_reconstruct_rational():
    from motivix.numerics import _decimal_from_mpq

    q = Q(2, 5) + Q(1, 10 ** 45)  # tiny contamination below the window
    v = PeriodValue(_decimal_from_mpq(q, 40), 40)
    assert reconstruct_rational(v, 10 ** 6) == Q(2, 5)
    noisy = PeriodValue(_decimal_from_mpq(Q(1, 3) + Q(1, 7), 40), 40)
    assert reconstruct_rational(noisy, 100) == Q(10, 21)


def test_table_round_trip(tmp_path):
    path = str(tmp_path / "table.json")
    words = [IntegralWord(0, (1, 0), 1), IntegralWord(0, (-1,), 1)]
    doc = emit_period_table(words, 25, path)
    assert doc["version"] == 1
    assert len(doc["entries"]) == 2
    try:
        assert load_period_table(path) == 2
    finally:
        clear_period_table()


def test_table_rejects_corruption(tmp_path):
    path = str(tmp_path / "bad.json")
    emit_period_table([IntegralWord(0, (1, 0), 1)], 25, path)
    with open(path) as fh:
        doc = json.load(fh)
    doc["entries"][0]["value"] = "1.23456789012345678901234"
    with open(path, "w") as fh:
        json.dump(doc, fh)
    with pytest.raises(TableError):
        load_period_table(path)
    clear_period_table()


def test_table_rejects_unknown_version(tmp_path):
    path = str(tmp_path / "v9.json")
    with open(path, "w") as fh:
        json.dump({"version": 9, "digits": 10, "entries": []}, fh)
    with pytest.raises(TableError):
        load_period_table(path)
