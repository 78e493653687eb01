"""Command-line front end: oracle eval | relate | table."""

import json
import sys

import click

from .errors import OracleError
from .relations import eval_expression, find_relation
from .table import decimal_str, emit_period_table, read_words_file, write_table


def _fail(exc) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(2)


@click.group()
def main():
    """Independent high-precision checker for nested parity-restricted and
    alternating sums: direct evaluation, integer-relation search, and period
    table fixtures."""


@main.command("eval")
@click.argument("expr")
@click.option("--digits", type=int, default=40, show_default=True,
              help="Fractional digits to print.")
def eval_cmd(expr, digits):
    """Evaluate EXPR by direct accelerated summation.

    EXPR is a product of atoms: family indices like "t(1,2)" or "S_1(2,3)",
    raw words like "0;p0;p", "zeta(...)" with negative entries for sign
    flips, "log2", or "pi"; join with '*' and raise with '^'.
    """
    try:
        value = eval_expression(expr, digits)
        click.echo(decimal_str(value, digits))
    except OracleError as exc:
        _fail(exc)


@main.command("relate")
@click.argument("target")
@click.option("--basis", "-b", multiple=True, required=True,
              help="Basis constant; repeat for each one.")
@click.option("--digits", type=int, default=40, show_default=True)
@click.option("--height-bound", type=int, default=10**6, show_default=True,
              help="Cap on relation coefficient height.")
def relate_cmd(target, basis, digits, height_bound):
    """Search for TARGET as a rational combination of the basis constants."""
    try:
        result = find_relation(target, basis, digits=digits, height_bound=height_bound)
    except OracleError as exc:
        _fail(exc)
    if not result.found:
        click.echo("no relation found within the height bound", err=True)
        sys.exit(3)
    click.echo(json.dumps(result.as_dict(), indent=1))


@main.command("table")
@click.argument("words_file")
@click.option("--out", required=True, help="Output JSON path.")
@click.option("--digits", type=int, default=30, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Parallel evaluation workers.")
def table_cmd(words_file, out, digits, jobs):
    """Evaluate the words listed in WORDS_FILE and write a period table."""
    try:
        words = read_words_file(words_file)
        doc = emit_period_table(words, digits, jobs=jobs)
        write_table(doc, out)
    except (OracleError, OSError) as exc:
        _fail(exc)
    click.echo(f"wrote {len(doc['entries'])} entries to {out}")


if __name__ == "__main__":
    main()
