"""Period-table interchange and decimal formatting.

The table format is the JSON fixture contract shared with the engine under
test: {"version": 1, "digits": D, "entries": [{"word": ..., "value": ...}]}
with values rendered as fixed-point decimals carrying D fractional digits.
Everything here works purely from that schema; no engine code is imported.
"""

import json
from concurrent.futures import ProcessPoolExecutor

from mpmath import mp, mpf

from .errors import OracleError, TableError
from .sums import eval_family, eval_word, parse_word

TABLE_VERSION = 1


def decimal_str(x, digits: int) -> str:
    """Fixed-point rendering with `digits` fractional digits, ties rounded up."""
    with mp.workdps(digits + 30):
        n = int(mp.floor(mpf(x) * mpf(10) ** digits + mpf(1) / 2))
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), 10**digits)
    return f"{sign}{whole}.{str(frac).zfill(digits)}"


def decimal_mpf(text: str):
    """Parse a plain decimal literal at the current working precision."""
    s = str(text).strip()
    sign = 1
    if s[:1] in ("+", "-"):
        sign = -1 if s[0] == "-" else 1
        s = s[1:]
    whole, _, frac = s.partition(".")
    if not (whole + frac).isdigit():
        raise TableError(f"bad decimal literal {text!r}")
    return mpf(sign * int(whole + frac)) / mpf(10) ** len(frac)


def eval_numeric(family: str, prefix: int, parts, digits: int, signs=None) -> str:
    """Decimal string for one index; negative entries of z/zeta mark sign flips."""
    fam = "z" if family == "zeta" else family
    parts = tuple(int(k) for k in parts)
    if fam == "z" and signs is None:
        signs = tuple(1 if k > 0 else -1 for k in parts)
        parts = tuple(abs(k) for k in parts)
    value = eval_family(fam, parts, digits, prefix=prefix, signs=signs)
    return decimal_str(value, digits)


def read_words_file(path: str) -> list[str]:
    """One word per line; blank lines and # comments are skipped."""
    words = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            text = line.strip()
            if text and not text.startswith("#"):
                words.append(text)
    return words


def _word_task(args):
    word, digits = args
    return word, decimal_str(eval_word(word, digits), digits)


def emit_period_table(words, digits: int, jobs: int = 1) -> dict:
    """Evaluate each word and assemble a table document.

    Words are validated up front so a malformed entry is reported by name
    before any summation starts.  Duplicates collapse; entries come out
    sorted.  An empty word list yields a valid zero-entry table.
    """
    ordered = sorted(set(words))
    for word in ordered:
        parse_word(word)
    if jobs and jobs > 1 and len(ordered) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = dict(pool.map(_word_task, [(w, digits) for w in ordered]))
    else:
        values = {w: decimal_str(eval_word(w, digits), digits) for w in ordered}
    entries = [{"word": w, "value": values[w]} for w in ordered]
    return {"version": TABLE_VERSION, "digits": digits, "entries": entries}


def write_table(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_table(path: str) -> dict:
    """Read and structurally validate a table document."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise TableError(f"cannot read table {path!r}: {exc}")
    except ValueError as exc:
        raise TableError(f"table {path!r} is not valid JSON: {exc}")
    if not isinstance(doc, dict) or doc.get("version") != TABLE_VERSION:
        raise TableError(f"table {path!r} has unsupported version")
    digits = doc.get("digits")
    if not isinstance(digits, int) or digits < 1:
        raise TableError(f"table {path!r} has a bad digit count")
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise TableError(f"table {path!r} has no entry list")
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "word" not in entry or "value" not in entry:
            raise TableError(f"table entry {i} is malformed")
        try:
            parse_word(entry["word"])
        except OracleError as exc:
            raise TableError(f"table entry {i}: {exc}")
        with mp.workdps(digits + 10):
            decimal_mpf(entry["value"])
    return doc


def table_mismatches(doc: dict, jobs: int = 1) -> list[str]:
    """Re-evaluate every entry; returns the words whose stated values are off
    by more than 10^-(digits-5)."""
    digits = doc["digits"]
    entries = doc["entries"]
    if jobs and jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = dict(
                pool.map(_word_task, [(e["word"], digits) for e in entries])
            )
    else:
        values = {
            e["word"]: decimal_str(eval_word(e["word"], digits), digits)
            for e in entries
        }
    bad = []
    with mp.workdps(digits + 10):
        tol = mpf(10) ** (-(digits - 5))
        for entry in entries:
            stated = decimal_mpf(entry["value"])
            fresh = decimal_mpf(values[entry["word"]])
            if abs(stated - fresh) > tol:
                bad.append(entry["word"])
    return bad
