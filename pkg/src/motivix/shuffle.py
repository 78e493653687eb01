"""Shuffle algebra on letter sequences, two-sided regularization, and the
reduction of arbitrary words to the convergent basis.

The basis consists of Euler indices with zero prefix whose canonical words
have no leading '0' and no trailing 'p'; every other word is rewritten into
that span by the identities implemented here.
"""
from __future__ import annotations

from functools import lru_cache

from gmpy2 import mpq

from .core import (
    EulerIndex,
    IntegralWord,
    LinComb,
    Q,
    UNIT_INDEX,
    euler_index_from_word,
    word_from_euler_index,
)
from .errors import InvalidWord

Letters = tuple[int, ...]


@lru_cache(maxsize=None)
def shuffle_letters(u: Letters, v: Letters) -> LinComb:
    """Multiset of interleavings of u and v, as a combination of tuples."""
    if not u:
        return LinComb.single(v)
    if not v:
        return LinComb.single(u)
    left = shuffle_letters(u[1:], v).map_terms(
        lambda t: LinComb.single((u[0],) + t)
    )
    right = shuffle_letters(u, v[1:]).map_terms(
        lambda t: LinComb.single((v[0],) + t)
    )
    return left + right


@lru_cache(maxsize=None)
def regularize_letters(ls: Letters) -> LinComb:
    """Rewrite a letter sequence into convergent sequences.

    Convergent means: no leading 0 and no trailing +1.  The rewriting kills
    the pure generators (the single '0' word and the single 'p' word), which
    pins both regularization constants to zero.
    """
    if not ls:
        return LinComb.single(ls)
    c = 0
    while c < len(ls) and ls[c] == 0:
        c += 1
    if c == len(ls):
        return LinComb.zero()
    if c > 0:
        v = ls[c:]
        head = ls[: c - 1]
        out = LinComb.zero()
        for pos in range(1, len(v) + 1):
            out = out + regularize_letters(head + v[:pos] + (0,) + v[pos:])
        return out.scale(Q(-1, c))
    d = 0
    while d < len(ls) and ls[len(ls) - 1 - d] == 1:
        d += 1
    if d == len(ls):
        return LinComb.zero()
    if d > 0:
        u = ls[: len(ls) - d]
        tail = ls[len(ls) - d + 1 :]
        out = LinComb.zero()
        for pos in range(len(u)):
            out = out + regularize_letters(u[:pos] + (1,) + u[pos:] + tail)
        return out.scale(Q(-1, d))
    return LinComb.single(ls)


@lru_cache(maxsize=None)
def _letters_to_index(ls: Letters) -> EulerIndex:
    return euler_index_from_word(IntegralWord(0, ls, 1))


_canon_cache: dict[IntegralWord, LinComb] = {}


def canonicalize(word: IntegralWord) -> LinComb:
    """Express a word as a combination of convergent zero-prefix indices.

    Rewriting rules, applied in order: the empty word is the unit; equal
    endpoints give zero; words from 0 to 1 are shuffle-regularized; an end
    point 0 is removed by path reversal; an endpoint -1 by the t -> -t
    homothety; two nonzero endpoints by composing the path through 0.
    """
    cached = _canon_cache.get(word)
    if cached is not None:
        return cached
    a, ls, b = word.start, word.letters, word.end
    if not ls:
        out = LinComb.single(UNIT_INDEX)
    elif a == b:
        out = LinComb.zero()
    elif (a, b) == (0, 1):
        out = regularize_letters(ls).map_terms(
            lambda t: LinComb.single(_letters_to_index(t))
        )
    elif b == 0:
        sign = -1 if len(ls) % 2 else 1
        out = canonicalize(word.reversed()).scale(sign)
    elif (a, b) == (0, -1):
        flipped = tuple(-x for x in ls)
        out = canonicalize(IntegralWord(0, flipped, 1))
    else:
        # both endpoints nonzero and distinct: compose through 0
        out = LinComb.zero()
        for p in range(len(ls) + 1):
            left = canonicalize(IntegralWord(a, ls[:p], 0))
            if left.is_zero():
                continue
            right = canonicalize(IntegralWord(0, ls[p:], b))
            out = out + value_mul(left, right)
    _canon_cache[word] = out
    return out


def index_mul(x: EulerIndex, y: EulerIndex) -> LinComb:
    """Product of two basis indices via the shuffle of their words."""
    if x.prefix or y.prefix:
        raise InvalidWord("index_mul expects zero-prefix basis indices")
    xs = word_from_euler_index(x).letters
    ys = word_from_euler_index(y).letters
    return shuffle_letters(xs, ys).map_terms(
        lambda t: LinComb.single(_letters_to_index(t))
    )


def value_mul(x: LinComb, y: LinComb) -> LinComb:
    """Bilinear product of two canonical values."""
    out = LinComb.zero()
    for tx, cx in x.items():
        for ty, cy in y.items():
            out = out + index_mul(tx, ty).scale(cx * cy)
    return out


def value_pow(x: LinComb, n: int) -> LinComb:
    out = LinComb.single(UNIT_INDEX)
    for _ in range(n):
        out = value_mul(out, x)
    return out


def canonical_index(idx: EulerIndex) -> LinComb:
    """Canonical value of an Euler index (expands any zero prefix)."""
    return canonicalize(word_from_euler_index(idx))


def expand_prefix(idx: EulerIndex) -> LinComb:
    """Push a zero prefix into the parts by the binomial shift identity:

    the prefix-c index equals (-1)^c times the sum over all ways to add a
    total of c to the parts, weighted by prod binom(k_j + i_j - 1, i_j),
    of zero-prefix indices.  Agrees with shuffle regularization; kept as an
    independent route for cross-checking.
    """
    from math import comb

    c = idx.prefix
    if c == 0:
        return LinComb.single(idx)
    d = idx.depth
    if d == 0:
        raise InvalidWord("prefix without parts")
    out = LinComb.zero()
    sign = -1 if c % 2 else 1

    def rec(j: int, remaining: int, bumps: tuple[int, ...], weight: mpq) -> None:
        nonlocal out
        if j == d - 1:
            i = remaining
            w = weight * comb(idx.parts[j] + i - 1, i)
            parts = tuple(k + b for k, b in zip(idx.parts, bumps + (i,)))
            out = out + LinComb.single(
                EulerIndex(0, parts, idx.signs), Q(sign) * w
            )
            return
        for i in range(remaining + 1):
            rec(
                j + 1,
                remaining - i,
                bumps + (i,),
                weight * comb(idx.parts[j] + i - 1, i),
            )

    rec(0, c, (), mpq(1))
    return out
