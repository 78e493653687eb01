"""Arbitrary-precision realization of the period map.

Strategy per convergent word: split the integration path at 1/2, map the
upper segment by t -> 1-t (which reverses the letters, complements them,
and contributes a sign per letter), and evaluate every resulting chunk as
a nested series whose gap-variable ratios all have modulus <= 1/2.  The
series run in scaled big-integer fixed point, so results are bit-exact
across platforms.  mpmath is deliberately not used here; the test suite
uses it as an independent oracle.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Union

from gmpy2 import mpq, mpz

from .core import EulerIndex, FamilyIndex, IntegralWord, LinComb, Q
from .errors import Divergent, InvalidWord, PrecisionCap, TableError

GUARD_DIGITS = 6


def _bits_for(digits: int) -> int:
    # 10^(digits + guard) in bits, plus rounding headroom
    return int((digits + GUARD_DIGITS + 6) * 3.3220) + 64


def _series_length(digits: int, depth: int) -> int:
    if depth == 0:
        return 0
    target = mpz(10) ** (digits + GUARD_DIGITS)
    n = max(32, int((digits + GUARD_DIGITS) * 3.33) + 8 * depth)
    while 4 * comb(n, depth) * target > mpz(2) ** n:
        n += 32
    return n


def _blocks(letters: tuple[int, ...]) -> list[tuple[int, int]]:
    """Group a chunk as (leader, length) blocks; leaders are nonzero."""
    if letters and letters[0] == 0:
        raise Divergent(f"chunk with leading zero: {letters!r}")
    out: list[tuple[int, int]] = []
    for x in letters:
        if x != 0:
            out.append((x, 1))
        else:
            y, a = out[-1]
            out[-1] = (y, a + 1)
    return out


def _shift_for(leader: int) -> int:
    # multiply by (1/2)/leader: leaders are 1, -1 (lower path) or 2 (mapped)
    return 1 if abs(leader) == 1 else 2


_chunk_cache: dict[tuple[tuple[int, ...], int], mpz] = {}


def _chunk(letters: tuple[int, ...], digits: int) -> mpz:
    """Scaled-integer value of the nested integral of one chunk from 0 to
    1/2, letters from {0, 1, -1, 2}, no leading zero."""
    key = (letters, digits)
    cached = _chunk_cache.get(key)
    if cached is not None:
        return cached
    bits = _bits_for(digits)
    one = mpz(1) << bits
    if not letters:
        return one
    blocks = _blocks(letters)
    m = len(blocks)
    n_max = _series_length(digits, m)

    # hoisted per-block constants: (index, shift, negate, exponent)
    plan = [
        (j, _shift_for(y), y < 0, a) for j, (y, a) in enumerate(blocks, start=1)
    ]
    plan.reverse()
    acc = [mpz(0)] * (m + 1)  # acc[j] = running value A_j at the current n
    geo = [mpz(0)] * (m + 1)  # geo[j] = geometric accumulator B_j
    zero = mpz(0)
    total = zero
    for n in range(1, n_max + 1):
        acc[0] = one if n == 1 else zero  # A_0(n-1)
        npow = None
        for j, shift, neg, a in plan:
            b = (geo[j] + acc[j - 1]) >> shift
            if neg:
                b = -b
            geo[j] = b
            if a == 1:
                acc[j] = b // n
            else:
                if npow is None or npow[0] != a:
                    npow = (a, mpz(n) ** a)
                acc[j] = b // npow[1]
        total += acc[m]
    if m % 2:
        total = -total
    _chunk_cache[key] = total
    return total


def _raw_word_value(word: IntegralWord, digits: int) -> mpz:
    """Scaled integral of the form product over the simplex, path split at
    1/2; the upper segment substitution contributes (-1) per letter."""
    ls = word.letters
    w = len(ls)
    bits = _bits_for(digits)
    total = mpz(0)
    for p in range(w + 1):
        lower = _chunk(ls[:p], digits)
        upper_letters = tuple(1 - x for x in reversed(ls[p:]))
        upper = _chunk(upper_letters, digits)
        term = (lower * upper) >> bits
        if (w - p) % 2:
            term = -term
        total += term
    return total


_table_store: dict[str, tuple[str, int]] = {}
_table_digits: int = 0


def period_word(word: IntegralWord, digits: int) -> mpq:
    """Exact-rational approximation of the period of one convergent word,
    within 10^-(digits+2).  Consults the loaded period table first."""
    if word.start != 0 or word.end != 1 or not word.is_convergent():
        raise Divergent(f"word {word.text()!r} has no convergent period")
    if _table_store and _table_digits >= digits:
        hit = _table_store.get(word.text())
        if hit is not None:
            return _decimal_to_mpq(hit[0])
    bits = _bits_for(digits)
    value = _raw_word_value(word, digits)
    if word.depth % 2:
        value = -value
    return mpq(value, mpz(1) << bits)


def period_of_value(value: LinComb, digits: int) -> mpq:
    out = mpq(0)
    for idx, c in value.items():
        from .core import word_from_euler_index

        out += c * period_word(word_from_euler_index(idx), digits)
    return out


@dataclass(frozen=True)
class PeriodValue:
    """A decimal approximation with a claimed digit count."""

    decimal: str
    digits: int

    def to_mpq(self) -> mpq:
        return _decimal_to_mpq(self.decimal)

    def __str__(self) -> str:
        return self.decimal


def _decimal_from_mpq(q: mpq, digits: int) -> str:
    scale = mpz(10) ** digits
    scaled = q * scale
    n = scaled.numerator // scaled.denominator
    if (scaled - n) * 2 >= 1:
        n += 1
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, scale)
    return f"{sign}{whole}.{str(frac).zfill(digits)}"


def _decimal_to_mpq(s: str) -> mpq:
    s = s.strip()
    sign = 1
    if s.startswith(("-", "+")):
        sign = -1 if s[0] == "-" else 1
        s = s[1:]
    if "." in s:
        whole, frac = s.split(".", 1)
    else:
        whole, frac = s, ""
    if not (whole + frac).isdigit() or not (whole or frac):
        raise TableError(f"bad decimal literal {s!r}")
    num = int(whole + frac) if whole + frac else 0
    return mpq(sign * num, mpz(10) ** len(frac))


ValueLike = Union[IntegralWord, EulerIndex, FamilyIndex, LinComb]


def period(x: ValueLike, digits: int, cap: int | None = None) -> PeriodValue:
    """Period of a value as a PeriodValue with the requested digit count."""
    from .config import current_settings

    limit = cap if cap is not None else current_settings().precision_cap
    if digits > limit:
        raise PrecisionCap(f"{digits} digits exceeds the cap of {limit}")
    from .coaction import to_value

    q = period_of_value(to_value(x), digits)
    return PeriodValue(_decimal_from_mpq(q, digits), digits)


def reconstruct_rational(v: PeriodValue, den_bound: int) -> mpq | None:
    """Best continued-fraction convergent within the denominator bound; the
    residual must beat 10^-(digits-6) or nothing is returned."""
    target = v.to_mpq()
    tol = mpq(1, mpz(10) ** (v.digits - GUARD_DIGITS))
    p0, q0, p1, q1 = mpz(0), mpz(1), mpz(1), mpz(0)
    x = target
    for _ in range(10_000):
        a = x.numerator // x.denominator
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > den_bound:
            break
        if abs(target - mpq(p1, q1)) < tol:
            return mpq(p1, q1)
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return None


_const_cache: dict[tuple[str, int], mpq] = {}


def constant(name: str, digits: int) -> mpq:
    """Shared numeric constants: zeta(k) for k >= 2 as 'zeta<k>' and log 2
    as 'log2', evaluated through the same engine."""
    key = (name, digits)
    cached = _const_cache.get(key)
    if cached is not None:
        return cached
    if name == "log2":
        out = -period_word(IntegralWord(0, (-1,), 1), digits)
    elif name.startswith("zeta"):
        k = int(name[4:])
        if k < 2:
            raise InvalidWord("zeta constant needs k >= 2")
        out = period_word(IntegralWord(0, (1,) + (0,) * (k - 1), 1), digits)
    else:
        raise InvalidWord(f"unknown constant {name!r}")
    _const_cache[key] = out
    return out


TABLE_VERSION = 1


def emit_period_table(words: Iterable[IntegralWord], digits: int, path: str) -> dict:
    entries = []
    seen = set()
    for word in words:
        text = word.text()
        if text in seen:
            continue
        seen.add(text)
        q = period_word(word, digits)
        entries.append({"word": text, "value": _decimal_from_mpq(q, digits)})
    doc = {"version": TABLE_VERSION, "digits": digits, "entries": entries}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    return doc


def load_period_table(path: str) -> int:
    """Load and cross-validate a period table; every entry must agree with
    internal evaluation to 10^-(digits-5).  Returns the entry count."""
    global _table_store, _table_digits
    if not os.path.exists(path):
        raise TableError(f"period table {path!r} not found")
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except ValueError as exc:
            raise TableError(f"period table {path!r} is not valid JSON: {exc}")
    if not isinstance(doc, Mapping) or doc.get("version") != TABLE_VERSION:
        raise TableError(f"period table {path!r} has unsupported version")
    digits = doc.get("digits")
    if not isinstance(digits, int) or digits < 1:
        raise TableError(f"period table {path!r} has bad digit count")
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise TableError(f"period table {path!r} has no entry list")
    tol = mpq(1, mpz(10) ** (digits - 5))
    store: dict[str, tuple[str, int]] = {}
    for i, entry in enumerate(entries):
        if not isinstance(entry, Mapping) or "word" not in entry or "value" not in entry:
            raise TableError(f"period table entry {i} is malformed")
        text = entry["word"]
        try:
            word = IntegralWord.from_text(text)
        except InvalidWord as exc:
            raise TableError(f"period table entry {i}: {exc}")
        claimed = _decimal_to_mpq(entry["value"])
        internal = period_word(word, digits)
        if abs(claimed - internal) > tol:
            raise TableError(
                f"period table entry {text!r} is off by more than 10^-{digits - 5}"
            )
        store[text] = (entry["value"], digits)
    _table_store = store
    _table_digits = digits
    return len(store)


def clear_period_table() -> None:
    global _table_store, _table_digits
    _table_store = {}
    _table_digits = 0
