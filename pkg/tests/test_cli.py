"""Command surface: grammar, exit codes, determinism, configuration."""
import json

import pytest
from click.testing import CliRunner
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from motivix.cli import main, parse_expr
from motivix.config import Settings, set_settings
from motivix.errors import GradeError, InvalidWord

Q = mpq


@pytest.fixture(autouse=True)
def _fresh_settings():
    yield
    set_settings(Settings())


def run(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env, catch_exceptions=False)


# --- parsing ---------------------------------------------------------------

def test_parse_family_forms():
    e = parse_expr("T(1,2,3)")
    ((c, atom),) = e.terms
    assert c == 1 and atom.family == "T" and atom.parts == (1, 2, 3)
    e = parse_expr("t_1(2)")
    ((_, atom),) = e.terms
    assert atom.prefix == 1
    e = parse_expr("z(2,-3)")
    ((_, atom),) = e.terms
    assert atom.parts == (2, 3) and atom.signs == (1, -1)


def test_parse_raw_word_and_scalars():
    e = parse_expr("3/2*t(2) - 0;p0;p")
    assert len(e.terms) == 2
    assert e.terms[0][0] == Q(3, 2)
    assert e.terms[1][0] == -1


def test_parse_errors_carry_position():
    with pytest.raises(InvalidWord, match="position 0"):
        parse_expr("q(2)")
    with pytest.raises(InvalidWord, match="position"):
        parse_expr("t(2) + ")
    with pytest.raises(InvalidWord):
        parse_expr("")
    with pytest.raises(GradeError):
        parse_expr("t(2) + t(3)")
    with pytest.raises(InvalidWord):
        parse_expr("z(2,0)")


_atoms = st.one_of(
    st.tuples(
        st.sampled_from(["t", "T", "S", "tz"]),
        st.integers(0, 2),
        st.lists(st.integers(1, 4), min_size=1, max_size=3),
    ),
    st.tuples(
        st.just("z"),
        st.integers(0, 2),
        st.lists(st.integers(1, 4), min_size=1, max_size=3),
    ),
)


@settings(max_examples=80, deadline=None)
@given(_atoms, st.integers(1, 9), st.integers(1, 9), st.booleans())
def test_round_trip_parse_print(atom, num, den, negate):
    family, prefix, parts = atom
    sub = f"_{prefix}" if prefix else ""
    body = ",".join(str(k) for k in parts)
    text = f"{family}{sub}({body})"
    coeff = Q(num, den) * (-1 if negate else 1)
    if coeff != 1:
        text = f"{abs(coeff)}*{text}" if coeff > 0 else f"-{abs(coeff)}*{text}"
    expr = parse_expr(text)
    again = parse_expr(expr.text())
    assert again == expr


# --- commands --------------------------------------------------------------

def test_normalize_and_phi():
    res = run("normalize", "t(2)")
    assert res.exit_code == 0
    assert res.output.strip() == "-z(-2) + z(2)"
    res = run("phi", "t(3,2)")
    assert res.exit_code == 0
    assert res.output.strip() == "- 31/16*f5 + 3/2*f3*f2"


def test_normalize_round_trips_through_parser():
    res = run("normalize", "t(3,2)")
    txt = res.output.strip()
    res2 = run("normalize", txt)
    assert res2.output == res.output


def test_check_exit_codes():
    assert run("check", "T(2,3)").exit_code == 0
    assert run("check", "t(1,2)").exit_code == 10


def test_dr_prints_tensors():
    res = run("dr", "--r", "1", "t(2,1)")
    assert res.exit_code == 0
    assert "(x)" in res.output
    res = run("dr", "--r", "1", "T(2,2)")
    assert res.output.strip() == "0"
    res = run("dr", "--r", "2", "t(2,2)")
    assert res.exit_code == 31


def test_classify_formats_and_determinism():
    a = run("classify", "--family", "t", "--depth", "2", "--max-weight", "6",
            "--format", "json")
    b = run("classify", "--family", "t", "--depth", "2", "--max-weight", "6",
            "--format", "json", "--jobs", "4")
    assert a.exit_code == 0
    assert a.output == b.output
    rows = json.loads(a.output)
    assert {r["index"] for r in rows} >= {"t(2,2)", "t(1,1)"}


def test_classify_csv_header():
    res = run("classify", "--family", "S", "--depth", "2", "--max-weight", "5",
              "--format", "csv")
    head = res.output.splitlines()[0]
    assert head.split(",")[:4] == ["family", "index", "weight", "depth"]


def test_search_small():
    res = run("search", "--family", "S", "--depth-min", "4", "--max-weight", "6")
    assert res.exit_code == 0
    assert "0 unramified" in res.output


def test_period_digits_flag():
    res = run("period", "z(2)", "--digits", "12")
    assert res.exit_code == 0
    assert res.output.strip().startswith("1.64493406684")


def test_period_table_emission(tmp_path):
    path = tmp_path / "t.json"
    res = run("period", "t(2)", "--digits", "15", "--emit-table", str(path))
    assert res.exit_code == 0
    doc = json.loads(path.read_text())
    assert doc["version"] == 1 and doc["digits"] == 15


def test_env_layer_feeds_digits():
    res = run("period", "z(2)", env={"MOTIVIX_DIGITS": "8"})
    assert res.output.strip() == "1.64493407"


def test_flag_beats_env():
    res = run("--digits", "10", "period", "z(2)", env={"MOTIVIX_DIGITS": "8"})
    assert res.output.strip() == "1.6449340668"


def test_config_file_layer(tmp_path):
    cfg = tmp_path / "m.toml"
    cfg.write_text("digits = 6\n")
    res = run("--config", str(cfg), "period", "z(2)")
    assert res.output.strip() == "1.644934"


def test_overweight_exit():
    res = run("--max-weight", "5", "classify", "--family", "t", "--depth", "2",
              "--max-weight", "9")
    assert res.exit_code == 37
