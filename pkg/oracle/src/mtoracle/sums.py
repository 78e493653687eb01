"""Direct evaluation of the defining nested series.

Every value handled by the oracle is a nested sum over strictly increasing
integers n_1 < ... < n_d where each variable is either restricted to a fixed
parity (the t, T, S and sign-summed families) or carries an alternating sign
(Euler sums).  Evaluation runs innermost-out: each level keeps an exact table
of its partial sums up to a cutoff plus an asymptotic form beyond it, and the
next level consumes both.  The asymptotic constant of each level is fixed by
matching the form against the exact table at one anchor and verified at a
second one, so a failure of the acceleration machinery cannot go unnoticed.

No level-two iterated-integral machinery appears here on purpose: this path
must stay methodologically independent of the engine it cross-checks.
"""

from itertools import combinations
from math import comb

from mpmath import mp, mpf

from .emseries import (
    boole_upper_form,
    em_upper_form,
    form_add,
    form_compose_shift,
    form_eval,
    form_prune,
    form_shift_power,
)
from .errors import AccelerationError, BadWord, DivergentIndex, OracleError

FAMILIES = ("t", "T", "S", "tz", "z")

_LN10 = 2.302585092994046
_PI = 3.141592653589793


def _params(digits: int) -> tuple[int, int]:
    """Working digits and the even cutoff where exact heads hand over to forms."""
    work = digits + 25
    cutoff = int(work * _LN10 / _PI) + 14
    cutoff += cutoff % 2
    return work, cutoff


def _check_anchor(resid, tol, what: str) -> None:
    if abs(resid) > tol:
        raise AccelerationError(
            f"{what}: anchor residual {mp.nstr(abs(resid), 4)} exceeds {mp.nstr(tol, 4)}"
        )


def _parity_cell(ks, parities, digits: int):
    """Sum over n_1 < ... < n_d, n_j = parities[j] mod 2, of prod n_j^-k_j.

    No 2^d normalization here.  The last exponent must keep the outer sum
    convergent; callers enforce that.
    """
    d = len(ks)
    work, cutoff = _params(digits)
    with mp.workdps(work):
        eps = mpf(10) ** (-(work - 5))
        tol = mpf(10) ** (-(digits + 8))
        head_len = cutoff + 22
        heads_prev = [mpf(1)] * (head_len + 2)
        k_prev = mpf(1)
        f_prev: dict = {}
        for j in range(1, d + 1):
            k, p = ks[j - 1], parities[j - 1]
            a2 = cutoff + (0 if cutoff % 2 == p else 1)
            a1 = a2 + 16
            lnref = mp.log(a2)
            g_form = form_shift_power(form_add({(0, 0): k_prev}, f_prev), k)
            g_form = form_prune(g_form, a2, eps / 16, lnref)
            f_raw = em_upper_form(g_form, 2, a2, eps)
            heads = [mpf(0)] * (head_len + 2)
            acc = mpf(0)
            for n in range(1, head_len + 1):
                heads[n] = acc
                if n % 2 == p:
                    acc = acc + heads_prev[n] / mpf(n) ** k
            heads[head_len + 1] = acc
            # partial sums evaluated at class members hit the form directly
            k_const = heads[a1] - form_eval(f_raw, a1)
            _check_anchor(
                heads[a2] - k_const - form_eval(f_raw, a2, lnref), tol, "parity level"
            )
            if j == d:
                return +k_const
            q = parities[j]
            f_next = f_raw if q == p else form_compose_shift(f_raw, 1, cutoff, eps / 16)
            f_prev = form_prune(f_next, a2, eps / 16, lnref)
            k_prev = k_const
            heads_prev = heads
    raise OracleError("empty composition")


def _euler_value(ks, signs, digits: int):
    """Euler sum: n_1 < ... < n_d, signs 1 or -1 raised to n_j in the numerator."""
    d = len(ks)
    work, cutoff = _params(digits)
    with mp.workdps(work):
        eps = mpf(10) ** (-(work - 5))
        tol = mpf(10) ** (-(digits + 8))
        a2, a1 = cutoff, cutoff + 15
        head_len = cutoff + 20
        heads_prev = [mpf(1)] * (head_len + 2)
        k_prev = mpf(1)
        plain_prev: dict = {}
        alt_prev: dict = {}
        for j in range(1, d + 1):
            k, sigma = ks[j - 1], signs[j - 1]
            lnref = mp.log(a2)
            plain_out: dict = {}
            alt_out: dict = {}
            comps = [(sigma, form_shift_power(form_add({(0, 0): k_prev}, plain_prev), k))]
            if alt_prev:
                comps.append((-sigma, form_shift_power(alt_prev, k)))
            for chi, g_form in comps:
                g_form = form_prune(g_form, a2, eps / 16, lnref)
                if chi == 1:
                    plain_out = form_add(plain_out, em_upper_form(g_form, 1, a2, eps))
                else:
                    alt_out = form_add(alt_out, boole_upper_form(g_form, a2, eps))
            heads = [mpf(0)] * (head_len + 2)
            acc = mpf(0)
            for n in range(1, head_len + 1):
                heads[n] = acc
                term = heads_prev[n] / mpf(n) ** k
                acc = acc + (term if sigma == 1 or n % 2 == 0 else -term)
            heads[head_len + 1] = acc

            def _ps_form(x):
                val = form_eval(plain_out, x)
                if alt_out:
                    val += (-1) ** (x % 2) * form_eval(alt_out, x)
                return val

            k_const = heads[a1] - _ps_form(a1)
            _check_anchor(heads[a2] - k_const - _ps_form(a2), tol, "signed level")
            _check_anchor(
                heads[a2 + 1] - k_const - _ps_form(a2 + 1), tol, "signed level"
            )
            if j == d:
                return +k_const
            k_prev = k_const
            plain_prev, alt_prev, heads_prev = plain_out, alt_out, heads
    raise OracleError("empty composition")


def _compositions(total: int, parts: int):
    """Nonnegative integer vectors of given length and sum."""
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def _prefix_shift(base, ks, prefix: int):
    """Absorb leading integration zeros into a binomial-weighted index sum."""
    if prefix == 0:
        return base(ks)
    total = mpf(0)
    for bump in _compositions(prefix, len(ks)):
        weight = 1
        for k, b in zip(ks, bump):
            weight *= comb(k + b - 1, b)
        total += weight * base(tuple(k + b for k, b in zip(ks, bump)))
    return total if prefix % 2 == 0 else -total


def _family_parities(name: str, depth: int) -> tuple[int, ...]:
    if name == "t":
        return (1,) * depth
    if name == "T":
        return tuple(j % 2 for j in range(1, depth + 1))
    if name == "S":
        return tuple((j + 1) % 2 for j in range(1, depth + 1))
    if name == "tz":
        return (0,) * depth
    raise OracleError(f"no parity pattern for family {name!r}")


def _validate_parts(parts) -> None:
    if not parts:
        raise OracleError("index needs at least one entry")
    if any(k < 1 for k in parts):
        raise OracleError("index entries must be positive")


def eval_family(name: str, parts, digits: int, prefix: int = 0, signs=None):
    """Value of one family index as an mpf carrying guard precision.

    t, T, S and tz evaluate their defining parity-restricted sums with the
    2^depth numerator; z takes a parallel tuple of 1/-1 signs.  prefix counts
    leading integration zeros and is folded away with binomial shifts, which
    keeps this path summation-only.
    """
    parts = tuple(int(k) for k in parts)
    _validate_parts(parts)
    if prefix < 0:
        raise OracleError("prefix must be nonnegative")
    work, _ = _params(digits)
    if name == "z":
        if signs is None or len(signs) != len(parts):
            raise OracleError("z needs one sign per entry")
        signs = tuple(1 if s > 0 else -1 for s in signs)
        if parts[-1] == 1 and signs[-1] == 1:
            raise DivergentIndex("trailing bare 1 diverges")
        # combine shifted cells at working precision, not the caller's
        with mp.workdps(work):
            return _prefix_shift(
                lambda ks: _euler_value(ks, signs, digits), parts, prefix
            )
    if name not in FAMILIES:
        raise OracleError(f"unknown family {name!r}")
    if signs is not None:
        raise OracleError(f"family {name} takes no signs")
    if parts[-1] == 1:
        raise DivergentIndex(f"{name} index must end with an entry of 2 or more")
    pattern = _family_parities(name, len(parts))
    scale = mpf(2) ** len(parts)

    def cell(ks):
        return scale * _parity_cell(ks, pattern, digits)

    with mp.workdps(work):
        return _prefix_shift(cell, parts, prefix)


def parse_word(word: str):
    """Split a start;letters;end word into (prefix, parts, euler signs).

    Letters run over 0, p, m with p and m marking the sign carried by each
    block; consecutive zeros extend the previous block.  Endpoints must be 0
    and p, matching the stored-table convention.
    """
    pieces = word.split(";")
    if len(pieces) != 3 or pieces[0] != "0" or pieces[2] != "p" or not pieces[1]:
        raise BadWord(f"malformed word {word!r}")
    body = pieces[1]
    if any(ch not in "0pm" for ch in body):
        raise BadWord(f"malformed word {word!r}")
    prefix = 0
    idx = 0
    while idx < len(body) and body[idx] == "0":
        prefix += 1
        idx += 1
    if idx == len(body):
        raise BadWord(f"word {word!r} has no sign letters")
    etas = []
    parts = []
    for ch in body[idx:]:
        if ch == "0":
            parts[-1] += 1
        else:
            etas.append(1 if ch == "p" else -1)
            parts.append(1)
    signs = tuple(
        etas[i] * (etas[i + 1] if i + 1 < len(etas) else 1) for i in range(len(etas))
    )
    return prefix, tuple(parts), signs


def eval_word(word: str, digits: int):
    """Value of one stored-table word."""
    prefix, parts, signs = parse_word(word)
    if parts[-1] == 1 and signs[-1] == 1:
        raise DivergentIndex(f"word {word!r} diverges")
    return eval_family("z", parts, digits, prefix=prefix, signs=signs)
