"""Value families over the convergent basis.

Each family index expands into a signed sum of words over all choices of
nonzero letters e_1..e_d, with the family-specific weight:

    t  : e_1            T : e_1 * ... * e_d     S : e_2 * ... * e_d
    tz : 1              z : the single word determined by the signs

and the canonical value is the regularized combination of basis indices.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import comb

from gmpy2 import mpq

from .core import (
    EulerIndex,
    FamilyIndex,
    IntegralWord,
    LinComb,
    Q,
    UNIT_INDEX,
)
from .errors import InvalidWord, Unsupported
from .shuffle import canonical_index, canonicalize

Composition = tuple[int, ...]


def _family_word(prefix: int, parts: Composition, etas: tuple[int, ...]) -> IntegralWord:
    letters: list[int] = [0] * prefix
    for k, eta in zip(parts, etas):
        letters.append(eta)
        letters.extend([0] * (k - 1))
    return IntegralWord(0, tuple(letters), 1)


def _family_weight(family: str, etas: tuple[int, ...]) -> int:
    if family == "t":
        return etas[0]
    if family == "T":
        w = 1
        for e in etas:
            w *= e
        return w
    if family == "S":
        w = 1
        for e in etas[1:]:
            w *= e
        return w
    if family == "tz":
        return 1
    raise InvalidWord(f"family {family!r} has no letter expansion")


def expand_family(fi: FamilyIndex) -> LinComb:
    """Defining combination of words (before regularization)."""
    if fi.family == "z":
        idx = fi.to_euler()
        from .core import word_from_euler_index

        return LinComb.single(word_from_euler_index(idx))
    out = LinComb.zero()
    for etas in product((1, -1), repeat=fi.depth):
        out = out + LinComb.single(
            _family_word(fi.prefix, fi.parts, etas),
            _family_weight(fi.family, etas),
        )
    return out


_value_cache: dict[FamilyIndex, LinComb] = {}


def family_value(fi: FamilyIndex) -> LinComb:
    """Canonical value of a family index on the convergent basis."""
    cached = _value_cache.get(fi)
    if cached is not None:
        return cached
    out = expand_family(fi).map_terms(canonicalize)
    _value_cache[fi] = out
    return out


def t_value(parts: Composition, prefix: int = 0) -> LinComb:
    """Value of a t index; the empty composition is the unit."""
    if not parts:
        if prefix:
            raise InvalidWord("prefix without parts")
        return LinComb.single(UNIT_INDEX)
    return family_value(FamilyIndex("t", prefix, tuple(parts)))


def tz_value(parts: Composition, prefix: int = 0) -> LinComb:
    if not parts:
        if prefix:
            raise InvalidWord("prefix without parts")
        return LinComb.single(UNIT_INDEX)
    return family_value(FamilyIndex("tz", prefix, tuple(parts)))


def zeta_value(parts: Composition, signs: Composition | None = None, prefix: int = 0) -> LinComb:
    """Canonical value of a signed zeta index (all-plus when signs omitted)."""
    if not parts:
        if prefix:
            raise InvalidWord("prefix without parts")
        return LinComb.single(UNIT_INDEX)
    if signs is None:
        signs = tuple(1 for _ in parts)
    return canonical_index(EulerIndex(prefix, tuple(parts), tuple(signs)))


def log2_value() -> LinComb:
    """log 2 as a canonical value: minus the weight-one alternating index."""
    return LinComb.single(EulerIndex(0, (1,), (-1,)), -1)


def distribution_factor(fi: FamilyIndex) -> mpq:
    """Scaling constant relating a tz index to the matching plain zeta index:
    tz equals 2^(depth - prefix - |parts|) times the all-plus zeta value,
    for convergent indices."""
    if fi.family != "tz":
        raise Unsupported("distribution applies to tz indices")
    if not fi.is_convergent():
        raise Unsupported("distribution needs a convergent index")
    e = fi.depth - fi.prefix - sum(fi.parts)
    return Q(2) ** e if e >= 0 else Q(1, 2 ** (-e))


def distribution_pair(prefix: int, parts: tuple[int, ...]) -> tuple[LinComb, LinComb, mpq]:
    """Both sides of the distribution identity for a convergent tz index:
    (tz value, all-plus zeta value, factor) with tz = factor * zeta."""
    fi = FamilyIndex("tz", prefix, parts)
    factor = distribution_factor(fi)
    return family_value(fi), zeta_value(parts, prefix=prefix), factor


def single_zeta_reduction(prefix: int, k: int, sign: int) -> mpq:
    """Depth-one reduction: the prefix-a single zeta equals this rational
    times zeta(prefix + k).  Plain case needs k >= 2; signed case k >= 1
    reduces through the alternating single value except the weight-one
    logarithm (prefix 0, k 1, sign -1), which is not a zeta multiple."""
    a, w = prefix, prefix + k
    if sign == 1:
        if k < 2:
            raise Unsupported("plain single zeta needs k >= 2")
        c = Q(comb(w - 1, a))
        return -c if a % 2 else c
    if w < 2:
        raise Unsupported("the weight-one alternating value is a logarithm")
    c = Q(comb(w - 1, a)) * (Q(2) ** (1 - w) - 1)
    return -c if a % 2 else c


def single_family_reduction(family: str, prefix: int, k: int) -> mpq:
    """Depth-one t/T/S/tz values as rational multiples of zeta(prefix+k).

    Not defined at total weight one, where the values are logarithms."""
    a, w = prefix, prefix + k
    if w < 2:
        raise Unsupported("weight-one single values are logarithms")
    if family in ("t", "T"):
        c = Q(comb(w - 1, a)) * (2 - Q(2) ** (1 - w))
    elif family == "S":
        c = Q(comb(w - 1, a)) * (Q(2) ** (1 - w))
    elif family == "tz":
        c = Q(comb(w - 1, a)) * (Q(2) ** (1 - a - k))
    else:
        raise Unsupported(f"no single reduction for family {family!r}")
    return -c if a % 2 else c


def reduce_double_zeta(m: int, n: int, s1: int, s2: int) -> LinComb:
    """Closed reduction of the double zeta value with parts (m, n) and signs
    (s1, s2) at odd weight, as a canonical value.

    Uses the conventions zeta(0; any sign) = -1/2 and a vanishing
    regularized plain zeta(1)."""
    w = m + n
    if w % 2 == 0:
        raise Unsupported("double reduction needs odd weight")
    if n < 2 and (n, s2) == (1, 1):
        raise Unsupported("divergent double zeta")
    K = (w - 1) // 2

    def zv(k: int, sign: int) -> LinComb:
        # weight-k depth-one value; regularized zeta(1) vanishes
        if k == 0:
            raise ValueError("handled by caller")
        if k == 1:
            return LinComb.zero() if sign == 1 else LinComb.single(
                EulerIndex(0, (1,), (-1,))
            )
        return zeta_value((k,), (sign,))

    from .shuffle import value_mul

    out = zv(w, s1 * s2).scale(Q(-1, 2))
    sgn = -1 if m % 2 else 1
    for s in range(K):
        coeff_m = Q(comb(w - 2 * s - 1, m - 1))
        coeff_n = Q(comb(w - 2 * s - 1, n - 1))
        if s == 0:
            # zeta(0) = -1/2 folds into a scalar
            out = out + zv(w, s1).scale(sgn * coeff_m * Q(-1, 2))
            out = out + zv(w, s2).scale(sgn * coeff_n * Q(-1, 2))
        else:
            even = zv(2 * s, s1 * s2)
            out = out + value_mul(zv(w - 2 * s, s1), even).scale(sgn * coeff_m)
            out = out + value_mul(zv(w - 2 * s, s2), even).scale(sgn * coeff_n)
    if n % 2 == 0:
        out = out + value_mul(zv(m, s1), zv(n, s2))
    # The even-shift bookkeeping above only reaches product terms whose odd
    # factor has weight >= 3.  A unit first or last part contributes a
    # weight-one odd factor as well; it vanishes for sign +1 (regularized
    # unit) but is the logarithm for sign -1, so it must be restored.
    if m == 1:
        out = out - value_mul(zv(1, s1), zv(w - 1, s1 * s2))
    if n == 1:
        out = out + value_mul(zv(1, s2), zv(w - 1, s1 * s2))
    return out


def reduce_double_L(family: str, m: int, n: int, s1: int = 1, s2: int = 1) -> mpq:
    """Coefficient of zeta(m+n) after projecting the depth-two value to the
    Lie coalgebra side (products and the even generator killed).

    Only odd total weight is supported; the z family accepts signs."""
    w = m + n
    if w % 2 == 0:
        raise Unsupported("L reduction needs odd weight")
    if w < 3:
        raise Unsupported("L reduction needs weight >= 3")

    def gamma(sign: int) -> mpq:
        # depth-one class: zeta(w; -) is (2^(1-w)-1) zeta(w)
        return Q(1) if sign == 1 else Q(2) ** (1 - w) - 1

    if family == "z":
        if n < 1 or (n, s2) == (1, 1):
            raise Unsupported("divergent double zeta")
        c = Q(-1, 2) * gamma(s1 * s2)
        # -1/2 * (-1)^m [ binom(w-1,m-1) gamma(s1) + binom(w-1,n-1) gamma(s2) ]
        sgn = 1 if m % 2 == 0 else -1
        c += Q(-1, 2) * sgn * (
            Q(comb(w - 1, m - 1)) * gamma(s1) + Q(comb(w - 1, n - 1)) * gamma(s2)
        )
        return c
    if s1 != 1 or s2 != 1:
        raise InvalidWord(f"family {family} carries no signs")
    if n < 2:
        raise Unsupported("divergent double value")
    t_class = 2 - Q(2) ** (1 - w)
    sgn_m = 1 if m % 2 == 0 else -1
    sgn_n = 1 if n % 2 == 0 else -1
    if family == "t":
        return -t_class
    if family == "T":
        return Q(sgn_n * comb(w - 1, m - 1)) * t_class
    if family == "S":
        # the surviving sign-weighted slice is the odd-support class, so the
        # depth-one factor here is the t class, not the smaller S one
        return Q(sgn_n * comb(w - 1, n - 1)) * t_class
    if family == "tz":
        return -(1 + sgn_m * comb(w, m)) * Q(2) ** (1 - w)
    raise Unsupported(f"unknown family {family!r}")
