"""CLI surface: eval, relate, table."""

import json

from click.testing import CliRunner
from mpmath import mp, mpf, zeta

from mtoracle.cli import main
from mtoracle.table import decimal_mpf


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_eval_family():
    res = run("eval", "t(2)", "--digits", "30")
    assert res.exit_code == 0
    mp.dps = 40
    assert abs(decimal_mpf(res.output.strip()) - mpf(3) / 2 * zeta(2)) < mpf(10) ** -29


def test_eval_word_and_product():
    res = run("eval", "0;m;p", "--digits", "20")
    assert res.exit_code == 0
    assert res.output.strip().startswith("-0.693147180559945")
    res = run("eval", "zeta(2)*log2", "--digits", "20")
    assert res.exit_code == 0
    mp.dps = 30
    assert abs(decimal_mpf(res.output.strip()) - zeta(2) * mp.log(2)) < mpf(10) ** -19


def test_eval_rejects_garbage():
    res = run("eval", "frob(2)")
    assert res.exit_code == 2
    res = run("eval", "t(1)")
    assert res.exit_code == 2


def test_relate_found_and_not_found():
    res = run("relate", "zeta(4)", "-b", "zeta(2)^2", "--digits", "30")
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["coefficients"] == ["2/5"]
    res = run("relate", "zeta(5)", "-b", "zeta(2)*zeta(3)", "--digits", "30")
    assert res.exit_code == 3


def test_table_flow(tmp_path):
    words = tmp_path / "words.txt"
    words.write_text("0;p0;p\n0;m;p\n")
    out = tmp_path / "table.json"
    res = run("table", str(words), "--out", str(out), "--digits", "20")
    assert res.exit_code == 0
    assert "wrote 2 entries" in res.output
    doc = json.loads(out.read_text())
    assert doc["version"] == 1 and len(doc["entries"]) == 2


def test_table_errors(tmp_path):
    res = run("table", str(tmp_path / "missing.txt"), "--out", str(tmp_path / "x.json"))
    assert res.exit_code == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("0;q;p\n")
    res = run("table", str(bad), "--out", str(tmp_path / "x.json"))
    assert res.exit_code == 2
