"""Decomposition of values into the graded word algebra.

Every value maps onto a free shuffle algebra on one odd-weight letter per
weight (letter 1 carries the dilogarithm constant log 2, letter w >= 3 the
single zeta value) tensored with a polynomial generator of weight two.  The
map is built weight by weight: the derivation spectrum determines each
image up to its primitive coefficient, and that last coefficient is pinned
through high-precision periods followed by exact rational reconstruction.

The choice of basis in each new-primitive direction is a normalization: the
first spanning-set members (in a fixed deterministic order) that enlarge
the image rank are adopted with primitive coefficient zero.  All reported
coefficients of values inside the classical span are independent of that
choice.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .config import current_settings
from .core import EulerIndex, LinComb, Q, term_sort_key
from .errors import GradeError, Overweight, PinFailure
from .numerics import PeriodValue, _decimal_from_mpq, period_of_value, reconstruct_rational

FIB = [0, 1]
while len(FIB) < 40:
    FIB.append(FIB[-1] + FIB[-2])


@dataclass(frozen=True)
class FWord:
    """Basis word: a tuple of odd letters and a power of the weight-two
    polynomial generator."""

    odd: tuple[int, ...]
    f2: int = 0

    def __post_init__(self) -> None:
        if any(x < 1 or x % 2 == 0 for x in self.odd) or self.f2 < 0:
            raise ValueError(f"bad word ({self.odd}, {self.f2})")

    @property
    def weight(self) -> int:
        return sum(self.odd) + 2 * self.f2

    def has_letter(self, r: int) -> bool:
        return r in self.odd

    def text(self) -> str:
        parts = [f"f{x}" for x in self.odd]
        if self.f2 == 1:
            parts.append("f2")
        elif self.f2 > 1:
            parts.append(f"f2^{self.f2}")
        return "*".join(parts) if parts else "1"

    def sort_key(self) -> tuple:
        return ("f", self.weight, self.f2, len(self.odd), self.odd)


FPoly = LinComb  # combinations of FWord


def _shuffle_tuples(u: tuple[int, ...], v: tuple[int, ...]):
    if not u:
        yield v
        return
    if not v:
        yield u
        return
    for rest in _shuffle_tuples(u[1:], v):
        yield (u[0],) + rest
    for rest in _shuffle_tuples(u, v[1:]):
        yield (v[0],) + rest


@lru_cache(maxsize=None)
def _shuffle_counts(u: tuple[int, ...], v: tuple[int, ...]) -> tuple:
    out: dict[tuple[int, ...], int] = {}
    for w in _shuffle_tuples(u, v):
        out[w] = out.get(w, 0) + 1
    return tuple(out.items())


def fword_mul(a: FPoly, b: FPoly) -> FPoly:
    """Shuffle product on odd letters, additive on the polynomial part."""
    acc: dict[FWord, mpq] = {}
    for u, cu in a.items():
        for v, cv in b.items():
            c = cu * cv
            for letters, mult in _shuffle_counts(u.odd, v.odd):
                w = FWord(letters, u.f2 + v.f2)
                acc[w] = acc.get(w, Q(0)) + c * mult
    return LinComb(list(acc.items()))


def _prepend(r: int, p: FPoly) -> FPoly:
    return p.map_terms(lambda w: LinComb.single(FWord((r,) + w.odd, w.f2)))


def _odd_compositions(w: int):
    if w == 0:
        yield ()
        return
    first = 1
    while first <= w:
        for rest in _odd_compositions(w - first):
            yield (first,) + rest
        first += 2


def fwords_of_weight(w: int) -> list[FWord]:
    out = []
    for k in range(w // 2 + 1):
        for odd in _odd_compositions(w - 2 * k):
            out.append(FWord(odd, k))
    out.sort(key=lambda x: x.sort_key())
    return out


def _shape_class(parts: tuple[int, ...]) -> int:
    # unit parts closed by one large part fill new rank directions fastest,
    # so those shapes are scanned first; the residual classes keep the scan
    # complete
    if parts[-1] >= 2 and all(p == 1 for p in parts[:-1]):
        return 0
    if len(parts) >= 2 and parts[-1] >= 2 and parts[-2] == 2 and all(
        p == 1 for p in parts[:-2]
    ):
        return 1
    return 2


def candidate_indices(w: int) -> list[EulerIndex]:
    """All convergent zero-prefix indices of a weight, in the fixed scan
    order: shape class, then depth, then parts, then signs with plus before
    minus."""
    out = []
    for parts in _compositions(w):
        d = len(parts)
        for mask in range(1 << d):
            signs = tuple(1 if (mask >> i) & 1 == 0 else -1 for i in range(d))
            e = EulerIndex(0, parts, signs)
            if e.is_convergent():
                out.append(e)
    out.sort(
        key=lambda e: (
            _shape_class(e.parts),
            e.depth,
            e.parts,
            tuple(0 if s > 0 else 1 for s in e.signs),
        )
    )
    return out


def _compositions(w: int):
    if w == 0:
        yield ()
        return
    for first in range(1, w + 1):
        for rest in _compositions(w - first):
            yield (first,) + rest


def _reduce_row(row: FPoly, period: mpq, pivots: dict[FWord, tuple[FPoly, mpq]]):
    """Eliminate a row against the current pivot set; returns the reduced
    row and its correspondingly combined period."""
    for word, (prow, pper) in pivots.items():
        c = row.coeff(word)
        if c != 0:
            lam = c / prow.coeff(word)
            row = row - prow.scale(lam)
            period = period - lam * pper
    return row, period


FULL_PHI_MAX = 9  # heaviest weight whose image basis is solved in full


class Engine:
    """Stateful decomposition engine; all public entry points lock, so the
    memo tables behave atomically under concurrent use."""

    def __init__(self) -> None:
        self._phi: dict[EulerIndex, FPoly] = {}
        self._reps: dict[int, list[EulerIndex]] = {}
        self._num: dict[int, dict[FWord, mpq]] = {}
        self._ready: set[int] = set()
        self._periods: dict[tuple[EulerIndex, int], mpq] = {}
        self._zero_memo: dict[tuple, bool] = {}
        self._f1_memo: dict[tuple, bool] = {}
        self._lock = threading.RLock()

    # -- public API ------------------------------------------------------

    def phi(self, value: LinComb) -> FPoly:
        with self._lock:
            value.common_weight()  # homogeneity guard
            out = LinComb.zero()
            for e, c in value.items():
                out = out + self._phi_index(e).scale(c)
            return out

    def is_zero_H(self, value: LinComb) -> bool:
        """Vanishing test.  Up to the solved weights it reads off the full
        image.  Above them it recurses: a value vanishes exactly when every
        odd single-letter projection does and its period is numerically
        zero, since the leftover primitive coefficient is rational with a
        bounded denominator and scales a nonvanishing period."""
        with self._lock:
            if value.is_zero():
                return True
            w = value.common_weight()
            if w <= FULL_PHI_MAX:
                return self.phi(value).is_zero()
            key = self._value_key(value)
            hit = self._zero_memo.get(key)
            if hit is not None:
                return hit
            out = all(
                self.is_zero_H(self.y_r(value, r)) for r in range(1, w, 2)
            ) and self._period_vanishes(value)
            self._zero_memo[key] = out
            return out

    def l_project(self, value: LinComb, r: int) -> mpq:
        """Coefficient of the single-letter word of odd weight r."""
        if r < 1 or r % 2 == 0:
            return Q(0)
        return self.phi(value).coeff(FWord((r,), 0))

    def y_r(self, value: LinComb, r: int):
        """Single-letter projection of the left derivation factor; lands in
        weight w - r."""
        from .coaction import dr

        with self._lock:
            elem = dr(value, r)
            return elem.right_for_left_functional(lambda e: self._l_index(e, r))

    def phi_truncated(self, value: LinComb) -> FPoly:
        """The part of the image determined by derivations alone: every
        word except the pure primitive one.  Needs no pinning at the top
        weight, so it reaches one weight beyond the period budget."""
        with self._lock:
            return self._trunc_value(value)

    def is_f1_free(self, value: LinComb) -> bool:
        """No word of the image touches the weight-one letter.  The pinned
        constant only adds a primitive word, so the truncation decides; at
        weights beyond the solved range the scan turns into a recursion,
        because prepended first letters keep the r-slices of the truncation
        disjoint: the weight-one slice must vanish outright and every
        deeper slice must itself be free of the letter."""
        with self._lock:
            if value.is_zero():
                return True
            w = value.common_weight()
            if w == 0:
                return True
            if w == 1:
                return self.phi(value).is_zero()
            if w <= FULL_PHI_MAX:
                trunc = self._trunc_value(value)
                return not any(word.has_letter(1) for word, _ in trunc.items())
            key = self._value_key(value)
            hit = self._f1_memo.get(key)
            if hit is not None:
                return hit
            out = self.is_zero_H(self.y_r(value, 1)) and all(
                self.is_f1_free(self.y_r(value, r)) for r in range(3, w, 2)
            )
            self._f1_memo[key] = out
            return out

    def pin_constant(self, value: LinComb) -> mpq:
        """Primitive-word coefficient of a value's image."""
        with self._lock:
            w = value.common_weight()
            prim = FWord((w,), 0) if w % 2 else FWord((), w // 2)
            return self.phi(value).coeff(prim)

    def numeric_image(self, value: LinComb) -> mpq:
        """Numeric value recomputed from the letter image alone, through the
        per-word tables built during solving.  The tables come from periods
        at the precision cap, so the result carries far more correct digits
        than a routine comparison needs."""
        with self._lock:
            w = value.common_weight()
            if not 1 <= w <= FULL_PHI_MAX:
                raise GradeError(f"numeric image needs weight 1..{FULL_PHI_MAX}")
            self._bootstrap(w)
            return self._num_eval(self.phi(value), w)

    def rank_of_weight(self, w: int) -> int:
        with self._lock:
            self._bootstrap(w)
            return len(self._num[w])

    @staticmethod
    def _value_key(value: LinComb) -> tuple:
        return tuple(value.sorted_items())

    @staticmethod
    def _period_vanishes(value: LinComb) -> bool:
        # a nonzero primitive coefficient is rational with denominator far
        # below 10^30, and multiplies a period larger than 1, so a period
        # under the window certifies zero with a wide margin on both sides
        digits = current_settings().precision_cap
        gap = min(60, digits - 10)
        return abs(period_of_value(value, digits)) < mpq(1, 10**gap)

    # -- image construction ----------------------------------------------

    def _phi_index(self, e: EulerIndex) -> FPoly:
        cached = self._phi.get(e)
        if cached is not None:
            return cached
        w = e.weight
        if w == 0:
            out = LinComb.single(FWord((), 0))
            self._phi[e] = out
            return out
        self._bootstrap(w)
        cached = self._phi.get(e)
        if cached is not None:
            return cached
        trunc = self._trunc_index(e)
        c = self._pin(LinComb.single(e), trunc, w)
        prim = FWord((w,), 0) if w % 2 else FWord((), w // 2)
        out = trunc + LinComb.single(prim, c)
        self._phi[e] = out
        return out

    def _l_index(self, e: EulerIndex, r: int) -> mpq:
        return self._phi_index(e).coeff(FWord((r,), 0))

    def _trunc_index(self, e: EulerIndex) -> FPoly:
        return self._trunc_value(LinComb.single(e))

    def _trunc_value(self, value: LinComb) -> FPoly:
        w = value.common_weight()
        out = LinComb.zero()
        for r in range(1, w, 2):
            yr = self.y_r(value, r)
            if yr.is_zero():
                continue
            out = out + _prepend(r, self.phi(yr))
        return out

    # -- per-weight bootstrap ----------------------------------------------

    def _bootstrap(self, w: int) -> None:
        if w in self._ready:
            return
        limit = current_settings().max_weight
        if w > limit:
            raise Overweight(f"weight {w} beyond the configured limit {limit}")
        for lower in range(1, w):
            self._bootstrap(lower)

        target = FIB[w + 1]
        pivots: dict[FWord, tuple[FPoly, mpq]] = {}
        reps: list[EulerIndex] = []

        def admit(row: FPoly, period_fn) -> bool:
            # reduce first; fetch the period only for independent rows
            lams: list[tuple[mpq, mpq]] = []
            for word, (prow, pper) in pivots.items():
                c = row.coeff(word)
                if c != 0:
                    lam = c / prow.coeff(word)
                    row = row - prow.scale(lam)
                    lams.append((lam, pper))
            if row.is_zero():
                return False
            period = period_fn()
            for lam, pper in lams:
                period = period - lam * pper
            lead = max((word for word, _ in row.items()), key=term_sort_key)
            scale = row.coeff(lead)
            row, period = row.scale(1 / scale), period / scale
            for word in list(pivots):
                prow, pper = pivots[word]
                c = prow.coeff(lead)
                if c != 0:
                    pivots[word] = (prow - row.scale(c), pper - c * period)
            pivots[lead] = (row, period)
            return True

        seeds: list[EulerIndex] = []
        if w == 1:
            seeds.append(EulerIndex(0, (1,), (-1,)))
        elif w == 2:
            seeds.append(EulerIndex(0, (2,), (1,)))
        elif w % 2:
            seeds.append(EulerIndex(0, (w,), (1,)))
        for e in seeds:
            if w == 1:
                image = LinComb.single(FWord((1,), 0), Q(-1))
            elif w == 2:
                image = LinComb.single(FWord((), 1))
            else:
                image = LinComb.single(FWord((w,), 0))
            self._phi[e] = image
            reps.append(e)
            admit(image, lambda e=e: self._period_index(e))

        for members in self._anchor_multisets(w):
            image = self._phi_index(members[0])
            for m in members[1:]:
                image = fword_mul(image, self._phi_index(m))

            def anchor_period(members=members) -> mpq:
                period = self._period_index(members[0])
                for m in members[1:]:
                    period = period * self._period_index(m)
                return period

            admit(image, anchor_period)

        if len(pivots) < target:
            for e in candidate_indices(w):
                if e in self._phi:
                    continue
                trunc = self._trunc_index(e)
                if admit(trunc, lambda e=e: self._period_index(e)):
                    self._phi[e] = trunc  # primitive coefficient set to zero
                    reps.append(e)
                    if len(pivots) == target:
                        break
        if len(pivots) < target:
            raise PinFailure(
                f"span at weight {w} stalled at rank {len(pivots)} of {target}"
            )

        num: dict[FWord, mpq] = {}
        for word, (row, period) in pivots.items():
            # Gauss-Jordan leaves each pivot row supported on its own word
            num[word] = period / row.coeff(word)
        self._num[w] = num
        self._reps[w] = reps
        self._ready.add(w)

    def _anchor_multisets(self, w: int):
        """Multisets of adopted representatives from lower weights, total
        weight w, at least two members."""
        pool = [e for lower in range(1, w) for e in self._reps.get(lower, ())]

        def rec(start: int, remaining: int, acc: list[EulerIndex]):
            if remaining == 0:
                if len(acc) >= 2:
                    yield tuple(acc)
                return
            for i in range(start, len(pool)):
                e = pool[i]
                if e.weight > remaining:
                    continue
                acc.append(e)
                yield from rec(i, remaining - e.weight, acc)
                acc.pop()

        yield from rec(0, w, [])

    # -- numeric pinning ---------------------------------------------------

    @staticmethod
    def _digits_for(w: int) -> int:
        return min(20 + 10 * w, current_settings().precision_cap)

    def _period_index(self, e: EulerIndex) -> mpq:
        """Always evaluated at the precision cap, so the chunk caches are
        shared across weights; claims are trimmed per use."""
        digits = current_settings().precision_cap
        key = (e, digits)
        cached = self._periods.get(key)
        if cached is None:
            cached = period_of_value(LinComb.single(e), digits)
            self._periods[key] = cached
        return cached

    def _num_eval(self, poly: FPoly, w: int) -> mpq:
        table = self._num[w]
        out = Q(0)
        for word, c in poly.items():
            out += c * table[word]
        return out

    def _pin(self, value: LinComb, trunc: FPoly, w: int) -> mpq:
        digits = self._digits_for(w)
        cap = current_settings().precision_cap
        prim = FWord((w,), 0) if w % 2 else FWord((), w // 2)
        prim_num = self._num[w][prim]
        target = period_of_value(value, cap) - self._num_eval(trunc, w)
        approx = target / prim_num
        claim = digits - 8
        den_bound = max(10**6, 10 ** max(0, (digits - 12) // 2))
        c = reconstruct_rational(
            PeriodValue(_decimal_from_mpq(approx, claim), claim), den_bound
        )
        if c is None:
            raise PinFailure(
                f"no rational within 10^{-(claim - 6)} at weight {w} "
                f"(denominator bound {den_bound})"
            )
        return c


_engine: Engine | None = None
_engine_lock = threading.Lock()


def get_engine() -> Engine:
    global _engine
    with _engine_lock:
        if _engine is None:
            _engine = Engine()
        return _engine


def reset_engine() -> None:
    global _engine
    with _engine_lock:
        _engine = None


def _as_value(x) -> LinComb:
    from .coaction import to_value

    return to_value(x)


def phi(x) -> FPoly:
    return get_engine().phi(_as_value(x))


def is_zero_H(x) -> bool:
    return get_engine().is_zero_H(_as_value(x))


def l_project(x, r: int) -> mpq:
    return get_engine().l_project(_as_value(x), r)


def y_r(x, r: int) -> LinComb:
    return get_engine().y_r(_as_value(x), r)


def pin_even_constant(x) -> mpq:
    """Coefficient of the pure weight-two-generator power in an even-weight
    image (and of the single top letter in an odd-weight one)."""
    return get_engine().pin_constant(_as_value(x))


def phi_text(poly: FPoly) -> str:
    if poly.is_zero():
        return "0"
    bits = []
    for word, c in poly.sorted_items():
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        coeff = "" if mag == 1 and word.text() != "1" else str(mag)
        body = word.text()
        if coeff and body != "1":
            bits.append(f"{sign} {coeff}*{body}")
        elif body != "1":
            bits.append(f"{sign} {body}")
        else:
            bits.append(f"{sign} {mag}")
    out = " ".join(bits)
    return out[2:] if out.startswith("+ ") else out


@lru_cache(maxsize=None)
def _product_span_pivots(w: int):
    pivots: dict[FWord, tuple[FPoly, mpq]] = {}
    for a in range(1, w):
        for u in _odd_compositions(a):
            for v in _odd_compositions(w - a):
                prod = fword_mul(
                    LinComb.single(FWord(u, 0)), LinComb.single(FWord(v, 0))
                )
                row, _ = _reduce_row(prod, Q(0), pivots)
                if row.is_zero():
                    continue
                lead = max((word for word, _ in row.items()), key=term_sort_key)
                lam = row.coeff(lead)
                pivots[lead] = (row.scale(1 / lam), Q(0))
    return pivots


def product_span_contains(value_poly: FPoly, w: int) -> bool:
    """Membership in the shuffle span of products of two nonempty words,
    after dropping every word that carries the polynomial generator.  This
    is the product-modulo-f2 test used for sign-sum identities."""
    stripped = LinComb(
        [(word, c) for word, c in value_poly.items() if word.f2 == 0]
    )
    if stripped.is_zero():
        return True
    row, _ = _reduce_row(stripped, Q(0), _product_span_pivots(w))
    return row.is_zero()
