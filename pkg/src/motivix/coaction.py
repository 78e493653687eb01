"""Degree-r derivations on the convergent basis.

The derivation of degree r cuts every subsequence of r consecutive letters
out of a word: the cut piece (with its bounding letters as endpoints) goes
to the left tensor factor, the remaining quotient word to the right.  Both
factors are canonicalized, so a derivation is a combination of pairs of
basis indices, graded (r, weight - r).

Closed forms proved for the t family and for depth-one derivations of the
other families are provided alongside the generic computation so each can
be tested against the other.
"""
from __future__ import annotations

from typing import Iterator, Union

from gmpy2 import mpq

from .core import (
    EulerIndex,
    FamilyIndex,
    IntegralWord,
    LinComb,
    Q,
    word_from_euler_index,
)
from .errors import GradeError, InvalidR, Unsupported
from .families import family_value, log2_value, t_value, tz_value
from .shuffle import canonical_index, canonicalize

ValueLike = Union[IntegralWord, EulerIndex, FamilyIndex, LinComb]


class TensorElem:
    """Combination of (left, right) basis-index pairs with fixed grading."""

    __slots__ = ("lc", "left_weight", "right_weight")

    def __init__(self, lc: LinComb, left_weight: int, right_weight: int) -> None:
        for (u, v) in lc.terms():
            if u.weight != left_weight or v.weight != right_weight:
                raise GradeError(
                    f"pair ({u.text()}, {v.text()}) breaks grading "
                    f"({left_weight}, {right_weight})"
                )
        self.lc = lc
        self.left_weight = left_weight
        self.right_weight = right_weight

    @classmethod
    def zero(cls, left_weight: int, right_weight: int) -> "TensorElem":
        return cls(LinComb.zero(), left_weight, right_weight)

    @classmethod
    def _wrap(cls, lc: LinComb, left_weight: int, right_weight: int) -> "TensorElem":
        # internal: combinations of validated elements stay graded
        out = object.__new__(cls)
        out.lc = lc
        out.left_weight = left_weight
        out.right_weight = right_weight
        return out

    def _check(self, other: "TensorElem") -> None:
        if (self.left_weight, self.right_weight) != (
            other.left_weight,
            other.right_weight,
        ):
            raise GradeError("tensor gradings differ")

    def __add__(self, other: "TensorElem") -> "TensorElem":
        self._check(other)
        return TensorElem._wrap(self.lc + other.lc, self.left_weight, self.right_weight)

    def __sub__(self, other: "TensorElem") -> "TensorElem":
        self._check(other)
        return TensorElem._wrap(self.lc - other.lc, self.left_weight, self.right_weight)

    def scale(self, c: int | mpq) -> "TensorElem":
        return TensorElem._wrap(self.lc.scale(c), self.left_weight, self.right_weight)

    def is_zero(self) -> bool:
        return self.lc.is_zero()

    def items(self) -> Iterator[tuple[tuple[EulerIndex, EulerIndex], mpq]]:
        return self.lc.items()

    def right_for_left_functional(self, fn) -> LinComb:
        """Contract the left factor with a linear functional fn(index)."""
        out = LinComb.zero()
        for (u, v), c in self.lc.items():
            lam = fn(u)
            if lam:
                out = out + LinComb.single(v, c * lam)
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TensorElem)
            and self.left_weight == other.left_weight
            and self.right_weight == other.right_weight
            and self.lc == other.lc
        )

    def text_lines(self) -> list[str]:
        return [
            f"{c}\t{u.text()} (x) {v.text()}" for (u, v), c in self.lc.sorted_items()
        ]

    def __repr__(self) -> str:
        return f"TensorElem({self.left_weight},{self.right_weight}; {len(self.lc)} terms)"


def _tensor_from_values(left: LinComb, right: LinComb, coeff: mpq, r: int, s: int) -> TensorElem:
    pairs = LinComb(
        [((u, v), cu * cv * coeff) for u, cu in left.items() for v, cv in right.items()]
    )
    return TensorElem(pairs, r, s)


def to_value(x: ValueLike) -> LinComb:
    """Canonical value of any supported input."""
    if isinstance(x, LinComb):
        return x
    if isinstance(x, IntegralWord):
        return canonicalize(x)
    if isinstance(x, EulerIndex):
        return canonical_index(x)
    if isinstance(x, FamilyIndex):
        return family_value(x)
    raise TypeError(f"cannot interpret {x!r} as a value")


def dr_cuts(word: IntegralWord, r: int) -> Iterator[tuple[int, IntegralWord, IntegralWord]]:
    """Raw cuts (offset, cut piece, quotient) of one word, before any
    canonicalization.  Used by the generic derivation and for debugging."""
    w = word.weight
    a = (word.start,) + word.letters + (word.end,)
    for p in range(w - r + 1):
        left = IntegralWord(a[p], a[p + 1 : p + r + 1], a[p + r + 1])
        right = IntegralWord(a[0], a[1 : p + 1] + a[p + r + 1 : w + 1], a[w + 1])
        yield p, left, right


def _check_r(r: int, w: int) -> None:
    if r % 2 == 0 or r < 1 or r > w - 1:
        raise InvalidR(f"derivation degree must be odd in [1, {w - 1}], got {r}")


_dr_cache: dict[tuple[EulerIndex, int], TensorElem] = {}


def _dr_index(e: EulerIndex, r: int) -> TensorElem:
    key = (e, r)
    cached = _dr_cache.get(key)
    if cached is not None:
        return cached
    w = e.weight
    out = TensorElem.zero(r, w - r)
    for _, lw, rw in dr_cuts(word_from_euler_index(e), r):
        left = canonicalize(lw)
        if left.is_zero():
            continue
        right = canonicalize(rw)
        if right.is_zero():
            continue
        out = out + _tensor_from_values(left, right, Q(1), r, w - r)
    _dr_cache[key] = out
    return out


def dr(x: ValueLike, r: int) -> TensorElem:
    """Degree-r derivation of a value."""
    value = to_value(x)
    w = value.common_weight()
    _check_r(r, w)
    out = TensorElem.zero(r, w - r)
    for e, c in value.items():
        out = out + _dr_index(e, r).scale(c)
    return out


def dr_closed_mtv(parts: tuple[int, ...], r: int) -> TensorElem:
    """Closed form of the degree-r derivation of a zero-prefix t value.

    Three families of cuts contribute: deconcatenations at part borders,
    cuts opening just after a nonzero letter, and cuts closing just before
    one (these use the reversed inner composition).  The window interior
    sums freely over sign choices, so the window left factors are the
    sign-summed prefixed values; a weight-one window degenerates to minus
    the logarithm automatically (only its negative-sign term survives)."""
    parts = tuple(parts)
    if not parts:
        raise Unsupported("empty composition")
    w = sum(parts)
    _check_r(r, w)
    out = TensorElem.zero(r, w - r)
    d = len(parts)

    def tsub(i: int, j: int) -> tuple[int, ...]:
        return parts[i - 1 : j]

    def wsum(i: int, j: int) -> int:
        return sum(parts[i - 1 : j])

    # deconcatenation cuts
    for j in range(1, d + 1):
        if wsum(1, j) == r:
            out = out + _tensor_from_values(
                t_value(tsub(1, j)), t_value(tsub(j + 1, d)), Q(1), r, w - r
            )
    # cuts starting on a zero, ending on a nonzero letter
    for i in range(1, d):
        for j in range(i + 1, d + 1):
            inner = wsum(i + 1, j)
            if inner <= r < wsum(i, j) - 1:
                left = tz_value(tsub(i + 1, j), r - inner)
                merged = tsub(1, i - 1) + (wsum(i, j) - r,) + tsub(j + 1, d)
                out = out + _tensor_from_values(
                    left, t_value(merged), Q(1), r, w - r
                )
    # cuts starting on a nonzero letter, ending on a zero
    for i in range(1, d):
        for j in range(i + 1, d + 1):
            inner = wsum(i, j - 1)
            if inner <= r < wsum(i, j) - 1:
                left = tz_value(tuple(reversed(tsub(i, j - 1))), r - inner)
                merged = tsub(1, i - 1) + (wsum(i, j) - r,) + tsub(j + 1, d)
                out = out - _tensor_from_values(
                    left, t_value(merged), Q(1), r, w - r
                )
    return out


def d1_closed(fi: FamilyIndex) -> TensorElem:
    """Proved depth-one derivations:

    - t with zero prefix: unit parts at either end deconcatenate against
      log 2 with weights +2 (front) and -1 (back);
    - T with a convergent index vanishes;
    - S with a convergent index: -2 log 2 (x) T(rest) when the first part
      is a unit, zero otherwise;
    - tz with a trailing unit after a nonempty head, any prefix;
    - tz or all-plus z when convergent: vanishes.
    """
    w = fi.weight
    _check_r(1, w)
    zero = TensorElem.zero(1, w - 1)
    if fi.family == "t":
        if fi.prefix:
            raise Unsupported("closed depth-one t derivation needs zero prefix")
        out = zero
        k = fi.parts
        if k[0] == 1:
            out = out + _tensor_from_values(
                log2_value(), t_value(k[1:]), Q(2), 1, w - 1
            )
        if k[-1] == 1:
            out = out - _tensor_from_values(
                log2_value(), t_value(k[:-1]), Q(1), 1, w - 1
            )
        return out
    if fi.family == "T":
        if fi.prefix or not fi.is_convergent():
            raise Unsupported("closed T derivation needs a convergent index")
        return zero
    if fi.family == "S":
        if fi.prefix or not fi.is_convergent():
            raise Unsupported("closed S derivation needs a convergent index")
        if fi.parts[0] == 1:
            # convergence forces a part after the leading 1
            right = family_value(FamilyIndex("T", 0, fi.parts[1:]))
            return _tensor_from_values(log2_value(), right, Q(-2), 1, w - 1)
        return zero
    if fi.family == "tz":
        if fi.is_convergent():
            return zero
        if fi.parts[-1] == 1 and len(fi.parts) > 1:
            return _tensor_from_values(
                log2_value(),
                tz_value(fi.parts[:-1], fi.prefix),
                Q(-1),
                1,
                w - 1,
            )
        raise Unsupported("closed tz derivation needs a single trailing unit")
    if fi.family == "z":
        if all(s == 1 for s in fi.signs) and fi.is_convergent():
            return zero
        raise Unsupported("no closed depth-one form for signed zeta")
    raise Unsupported(f"unknown family {fi.family!r}")
