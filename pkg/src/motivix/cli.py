"""Command line front end.

Wraps the symbolic engine behind a small expression language plus
subcommands for derivations, letter images, unramifiedness checks,
classification sweeps, the depth-four search, and period emission.
"""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass

import click
from gmpy2 import mpq

from . import acceptance
from .coaction import TensorElem, dr, to_value
from .config import resolve_settings, set_settings
from .core import FamilyIndex, IntegralWord, LinComb, word_from_euler_index
from .decompose import get_engine, phi_text
from .descent import (
    RAMIFIED,
    classify,
    descend,
    report_csv,
    report_json,
    report_text,
    search_unramified,
    value_text,
)
from .errors import GradeError, InvalidWord, MotivixError
from .numerics import emit_period_table, load_period_table, period

Q = mpq


@dataclass(frozen=True)
class ValueExpr:
    """A weight-homogeneous rational combination of parsed atoms."""

    terms: tuple[tuple[mpq, FamilyIndex | IntegralWord], ...]

    @property
    def weight(self) -> int:
        return self.terms[0][1].weight

    def value(self) -> LinComb:
        out = LinComb.zero()
        for coeff, atom in self.terms:
            out = out + to_value(atom).scale(coeff)
        return out

    def text(self) -> str:
        bits: list[str] = []
        for coeff, atom in self.terms:
            mag = coeff if coeff > 0 else -coeff
            body = atom.text()
            if mag != 1:
                body = f"{mag}*{body}"
            if not bits:
                bits.append(body if coeff > 0 else f"-{body}")
            else:
                bits.append(f"{'+' if coeff > 0 else '-'} {body}")
        return " ".join(bits)


_FAMILY_RE = re.compile(r"(tz|t|T|S|z)(?:_(\d+))?\(([-\d,\s]*)\)")
_WORD_RE = re.compile(r"[0pm];[0pm]*;[0pm]")
_SCALAR_RE = re.compile(r"(\d+)(?:\s*/\s*(\d+))?\s*\*")


def _parse_family(m: re.Match, pos: int) -> FamilyIndex:
    family, sub, body = m.group(1), m.group(2), m.group(3)
    prefix = int(sub) if sub else 0
    entries = []
    for piece in body.split(","):
        piece = piece.strip()
        if not re.fullmatch(r"-?\d+", piece):
            raise InvalidWord(f"syntax error at position {pos}: bad argument {piece!r}")
        entries.append(int(piece))
    if family == "z":
        parts = tuple(abs(k) for k in entries)
        signs = tuple(1 if k > 0 else -1 for k in entries)
        if 0 in entries:
            raise InvalidWord(f"syntax error at position {pos}: zero argument")
        return FamilyIndex("z", prefix, parts, signs)
    for k in entries:
        if k < 1:
            raise InvalidWord(
                f"syntax error at position {pos}: family {family} takes positive arguments"
            )
    return FamilyIndex(family, prefix, tuple(entries))


def parse_expr(text: str) -> ValueExpr:
    """Parse a rational combination of family indices and raw words.

    Grammar: terms joined by + or -, each an optional nonnegative rational
    scalar times an atom.  Atoms are family calls like "t_1(2)" or "z(2,-3)"
    (negative z entries flip the series sign) and raw three-field words like
    "0;p0m;p".  All terms must share one weight.
    """
    s = text
    i = 0
    n = len(s)
    terms: list[tuple[mpq, FamilyIndex | IntegralWord]] = []
    sign = 1
    first = True
    while True:
        while i < n and s[i].isspace():
            i += 1
        if i >= n:
            if first:
                raise InvalidWord("syntax error at position 0: empty expression")
            break
        if not first or s[i] in "+-":
            if first and s[i] == "-":
                sign = -1
                i += 1
            elif first and s[i] == "+":
                i += 1
            elif not first:
                if s[i] == "+":
                    sign = 1
                elif s[i] == "-":
                    sign = -1
                else:
                    raise InvalidWord(
                        f"syntax error at position {i}: expected + or -"
                    )
                i += 1
            while i < n and s[i].isspace():
                i += 1
        coeff = Q(sign)
        m = _SCALAR_RE.match(s, i)
        if m:
            num, den = m.group(1), m.group(2)
            if den is not None and int(den) == 0:
                raise InvalidWord(f"syntax error at position {i}: zero denominator")
            coeff = coeff * Q(int(num), int(den) if den else 1)
            i = m.end()
            while i < n and s[i].isspace():
                i += 1
        m = _FAMILY_RE.match(s, i)
        if m:
            terms.append((coeff, _parse_family(m, i)))
            i = m.end()
        else:
            m = _WORD_RE.match(s, i)
            if m:
                terms.append((coeff, IntegralWord.from_text(m.group(0))))
                i = m.end()
            else:
                raise InvalidWord(f"syntax error at position {i}: expected a value")
        first = False
        sign = 1
    weights = {atom.weight for _, atom in terms}
    if len(weights) > 1:
        raise GradeError(
            f"mixed weights {sorted(weights)} in one expression"
        )
    return ValueExpr(tuple(terms))


def _fail(exc: MotivixError) -> None:
    click.echo(f"error[{type(exc).__name__}]: {exc}", err=True)
    sys.exit(exc.exit_code)


@click.group()
@click.option("--digits", type=int, default=None, help="Working digit count.")
@click.option("--precision-cap", type=int, default=None, help="Hard digit ceiling.")
@click.option("--max-weight", "max_weight", type=int, default=None, help="Weight ceiling.")
@click.option("--jobs", type=int, default=None, help="Worker count (0 = cores).")
@click.option("--period-table", "period_table", type=str, default=None,
              help="Period table to load and cross-check.")
@click.option("--config", "config_file", type=str, default=None,
              help="TOML settings file.")
def main(digits, precision_cap, max_weight, jobs, period_table, config_file):
    """Exact engine for level-two motivic iterated integrals."""
    flags = {
        "digits": digits,
        "precision_cap": precision_cap,
        "max_weight": max_weight,
        "jobs": jobs,
        "period_table": period_table,
        "config_file": config_file,
    }
    try:
        settings = set_settings(resolve_settings(flags))
        if settings.period_table:
            load_period_table(settings.period_table)
    except MotivixError as exc:
        _fail(exc)


@main.command()
@click.argument("expr")
def normalize(expr: str):
    """Print the canonical form of EXPR."""
    try:
        click.echo(value_text(parse_expr(expr).value()))
    except MotivixError as exc:
        _fail(exc)


@main.command("dr")
@click.option("--r", "r", type=int, required=True, help="Odd derivation degree.")
@click.argument("expr")
def dr_cmd(r: int, expr: str):
    """Print the degree-r derivation of EXPR as tensor terms."""
    try:
        elem: TensorElem = dr(parse_expr(expr).value(), r)
        lines = elem.text_lines()
        click.echo("\n".join(lines) if lines else "0")
    except MotivixError as exc:
        _fail(exc)


@main.command()
@click.argument("expr")
def phi(expr: str):
    """Print the letter image of EXPR."""
    try:
        eng = get_engine()
        click.echo(phi_text(eng.phi(parse_expr(expr).value())))
    except MotivixError as exc:
        _fail(exc)


@main.command()
@click.argument("expr")
def check(expr: str):
    """Decide whether EXPR is unramified; exit 10 when it is not."""
    try:
        parsed = parse_expr(expr)
        cert = descend(parsed.value(), parsed.text())
        click.echo("Unramified" if cert.unramified else "Ramified")
        click.echo(f"certificate: {cert.summary()}")
        if cert.status == RAMIFIED:
            sys.exit(10)
    except MotivixError as exc:
        _fail(exc)


@main.command("classify")
@click.option("--family", required=True, type=click.Choice(["t", "T", "S", "tz", "z"]))
@click.option("--depth", required=True, type=int)
@click.option("--max-weight", "max_weight", required=True, type=int)
@click.option("--jobs", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]),
              default="text")
def classify_cmd(family, depth, max_weight, jobs, fmt):
    """Classify one family at one depth; exit 20 on rule disagreement."""
    try:
        report = classify(family, depth, max_weight, jobs=jobs)
        renderer = {"json": report_json, "csv": report_csv, "text": report_text}[fmt]
        click.echo(renderer(report), nl=False)
        click.echo()
        if report.disagreements():
            sys.exit(20)
    except MotivixError as exc:
        _fail(exc)


@main.command("verify-paper")
@click.option("--max-weight", "max_weight", type=int, default=None,
              help="Shrink the weight-sweep checks.")
def verify_paper(max_weight):
    """Run the acceptance checks, one labeled line each; exit 20 on failure."""
    try:
        results = acceptance.run_all(max_weight=max_weight)
        failed = False
        for res in results:
            click.echo(res.line())
            failed = failed or not res.passed
        if failed:
            sys.exit(20)
    except MotivixError as exc:
        _fail(exc)


@main.command()
@click.option("--family", default="S", type=click.Choice(["t", "T", "S", "tz", "z"]))
@click.option("--depth-min", "depth_min", default=4, type=int)
@click.option("--max-weight", "max_weight", required=True, type=int)
@click.option("--jobs", type=int, default=None)
def search(family, depth_min, max_weight, jobs):
    """List unramified indices of depth at least DEPTH_MIN."""
    try:
        hits = search_unramified(family, depth_min, max_weight, jobs=jobs)
        for fi, cert in hits:
            click.echo(f"{fi.text()}  weight {fi.weight}  {cert.summary()}")
        click.echo(f"{len(hits)} unramified {family} indices "
                   f"of depth >= {depth_min}, weight <= {max_weight}")
    except MotivixError as exc:
        _fail(exc)


@main.command("period")
@click.option("--digits", type=int, default=None, help="Digits to print.")
@click.option("--emit-table", "emit_table", type=str, default=None,
              help="Write the canonical words of EXPR to a period table.")
@click.argument("expr")
def period_cmd(digits, emit_table, expr):
    """Evaluate EXPR numerically; optionally emit its period table."""
    from .config import current_settings

    try:
        d = digits if digits is not None else current_settings().digits
        value = parse_expr(expr).value()
        click.echo(period(value, d).decimal)
        if emit_table:
            words = [word_from_euler_index(idx) for idx, _ in value.sorted_items()]
            doc = emit_period_table(words, d, emit_table)
            click.echo(f"wrote {len(doc['entries'])} entries to {emit_table}", err=True)
    except MotivixError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
