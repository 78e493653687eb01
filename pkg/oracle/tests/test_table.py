"""Period-table emission, validation, and decimal formatting."""

import json

from mpmath import mp, mpf, zeta

import pytest

from mtoracle.errors import BadWord, TableError
from mtoracle.table import (
    TABLE_VERSION,
    decimal_mpf,
    decimal_str,
    emit_period_table,
    eval_numeric,
    load_table,
    read_words_file,
    table_mismatches,
    write_table,
)


def test_decimal_rendering():
    mp.dps = 40
    assert decimal_str(mpf(1) / 4, 6) == "0.250000"
    assert decimal_str(mpf(-1) / 3, 8) == "-0.33333333"
    assert decimal_str(mpf(2), 4) == "2.0000"
    assert decimal_str(mpf("1.00005"), 4) == "1.0001"  # ties round up
    s = decimal_str(zeta(2), 30)
    assert s == "1.644934066848226436472415166646"


def test_decimal_parsing():
    mp.dps = 40
    assert decimal_mpf("0.25") == mpf(1) / 4
    assert decimal_mpf("-3.5") == mpf(-7) / 2
    assert decimal_mpf("7") == 7
    assert decimal_mpf(".5") == mpf(1) / 2
    for bad in ("", "abc", "1.2.3", "--1"):
        with pytest.raises(TableError):
            decimal_mpf(bad)


def test_eval_numeric_decimal_strings():
    got = eval_numeric("zeta", 0, (2,), 40)
    assert got.startswith("1.6449340668")
    assert len(got.split(".")[1]) == 40
    t2 = eval_numeric("t", 0, (2,), 30)
    assert t2.startswith("2.4674011002")
    alt = eval_numeric("z", 0, (-1,), 20)
    assert alt.startswith("-0.6931471805")


def test_emit_single_known_word():
    doc = emit_period_table(["0;p0;p"], 30)
    assert doc["version"] == TABLE_VERSION
    assert doc["digits"] == 30
    assert len(doc["entries"]) == 1
    entry = doc["entries"][0]
    assert entry["word"] == "0;p0;p"
    mp.dps = 40
    assert abs(decimal_mpf(entry["value"]) - zeta(2)) < mpf(10) ** -29


def test_emit_empty_listing():
    doc = emit_period_table([], 25)
    assert doc == {"version": TABLE_VERSION, "digits": 25, "entries": []}


def test_emit_names_malformed_words():
    with pytest.raises(BadWord) as info:
        emit_period_table(["0;p0;p", "0;q;p"], 20)
    assert "0;q;p" in str(info.value)


def test_emit_dedupes_and_sorts():
    doc = emit_period_table(["0;p0;p", "0;m;p", "0;p0;p"], 20)
    words = [e["word"] for e in doc["entries"]]
    assert words == sorted(set(words)) == ["0;m;p", "0;p0;p"]


def test_parallel_matches_serial():
    words = ["0;p0;p", "0;m;p", "0;p0m;p"]
    assert emit_period_table(words, 20, jobs=3) == emit_period_table(words, 20)


def test_roundtrip_and_mismatch_scan(tmp_path):
    doc = emit_period_table(["0;p0;p", "0;p0m;p"], 25)
    path = tmp_path / "table.json"
    write_table(doc, str(path))
    loaded = load_table(str(path))
    assert loaded == doc
    assert table_mismatches(loaded) == []
    # corrupt one value beyond the tolerance
    doc["entries"][0]["value"] = decimal_str(mpf("1.5"), 25)
    assert table_mismatches(doc) == [doc["entries"][0]["word"]]


def test_load_rejects_bad_documents(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("not json")
    with pytest.raises(TableError):
        load_table(str(path))
    cases = [
        {"version": 99, "digits": 10, "entries": []},
        {"version": TABLE_VERSION, "digits": 0, "entries": []},
        {"version": TABLE_VERSION, "digits": 10, "entries": {}},
        {"version": TABLE_VERSION, "digits": 10, "entries": [{"word": "0;p0;p"}]},
        {"version": TABLE_VERSION, "digits": 10,
         "entries": [{"word": "0;q;p", "value": "1.0"}]},
        {"version": TABLE_VERSION, "digits": 10,
         "entries": [{"word": "0;p0;p", "value": "zzz"}]},
    ]
    for doc in cases:
        path.write_text(json.dumps(doc))
        with pytest.raises(TableError):
            load_table(str(path))
    with pytest.raises(TableError):
        load_table(str(tmp_path / "missing.json"))


def test_load_names_offending_entry(tmp_path):
    path = tmp_path / "named.json"
    doc = {"version": TABLE_VERSION, "digits": 10,
           "entries": [{"word": "0;p0;p", "value": "1.6449340668"},
                       {"word": "0;zz;p", "value": "1.0"}]}
    path.write_text(json.dumps(doc))
    with pytest.raises(TableError) as info:
        load_table(str(path))
    msg = str(info.value)
    assert "entry 1" in msg and "0;zz;p" in msg


def test_words_file_reader(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("# header\n0;p0;p\n\n  0;m;p  \n")
    assert read_words_file(str(path)) == ["0;p0;p", "0;m;p"]
