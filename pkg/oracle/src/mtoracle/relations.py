"""Integer-relation search over the oracle's numeric values.

Targets and basis constants share a small expression grammar: atoms joined by
'*', each optionally raised with '^'.  An atom is a family index like
"S(2,1,1,1,4)" or "t_1(2)" (the suffix counts leading integration zeros), a
raw word containing ';', "zeta(...)" (negative entries flip signs), "log2",
or "pi".  Depth-one plain zeta goes through the reference library; everything
else runs through the summation engine.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf, pslq

from .errors import OracleError
from .sums import eval_family, eval_word

_INDEX_RE = re.compile(r"^(tz|t|T|S|z|zeta)(?:_(\d+))?\(([-\d,\s]+)\)$")


def _eval_atom(text: str, digits: int):
    if ";" in text:
        return eval_word(text, digits)
    if text == "log2":
        return mp.log(2)
    if text == "pi":
        return +mp.pi
    m = _INDEX_RE.match(text)
    if m is None:
        raise OracleError(f"cannot parse {text!r}")
    family = m.group(1)
    prefix = int(m.group(2) or 0)
    try:
        entries = tuple(int(p) for p in m.group(3).split(","))
    except ValueError:
        raise OracleError(f"bad index list in {text!r}")
    if family in ("z", "zeta"):
        signs = tuple(1 if k > 0 else -1 for k in entries)
        parts = tuple(abs(k) for k in entries)
        if len(parts) == 1 and prefix == 0 and signs == (1,) and parts[0] >= 2:
            return mp.zeta(parts[0])
        return eval_family("z", parts, digits, prefix=prefix, signs=signs)
    if any(k < 0 for k in entries):
        raise OracleError(f"family {family} takes positive entries: {text!r}")
    return eval_family(family, entries, digits, prefix=prefix)


def eval_expression(text: str, digits: int):
    """Value of a product expression as an mpf carrying guard precision."""
    body = text.strip()
    if not body:
        raise OracleError("empty expression")
    with mp.workdps(digits + 15):
        total = mpf(1)
        for piece in body.split("*"):
            atom = piece.strip()
            if "^" in atom:
                base, _, rawpow = atom.rpartition("^")
                base = base.strip()
                rawpow = rawpow.strip()
                if not rawpow.isdigit() or int(rawpow) < 1:
                    raise OracleError(f"bad power in {atom!r}")
                power = int(rawpow)
            else:
                base, power = atom, 1
            total *= _eval_atom(base, digits) ** power
        return +total


@dataclass(frozen=True)
class RelationResult:
    """Outcome of a relation search.

    coefficients[i] is the exact rational weight of basis[i] in the
    decomposition target = sum coefficients[i] * basis[i]; empty when no
    relation survived the bounds and the higher-precision recheck.  residual
    is the decimal mismatch measured at the recheck precision.
    """

    target: str
    basis: tuple[str, ...]
    coefficients: tuple[Fraction, ...]
    residual: str
    digits: int

    @property
    def found(self) -> bool:
        return bool(self.coefficients)

    def as_dict(self) -> dict:
        return {
            "target": self.target,
            "basis": list(self.basis),
            "coefficients": [
                f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)
                for c in self.coefficients
            ],
            "residual": self.residual,
            "digits": self.digits,
        }


def find_relation(
    target: str, basis, digits: int = 40, height_bound: int = 10**6
) -> RelationResult:
    """Search for target as a rational combination of the basis constants.

    Lattice reduction runs at the requested digit count with integer
    coefficients capped by height_bound.  A candidate only counts once it
    re-verifies at 1.5x the digits; otherwise the result comes back empty.
    """
    basis = tuple(basis)
    if not basis:
        raise OracleError("relation search needs a nonempty basis")
    if height_bound < 1:
        raise OracleError("height bound must be positive")
    empty = RelationResult(target, basis, (), "", digits)
    with mp.workdps(digits + 15):
        vec = [eval_expression(target, digits)]
        vec += [eval_expression(b, digits) for b in basis]
        rel = pslq(
            vec,
            tol=mpf(10) ** (-(digits - 8)),
            maxcoeff=height_bound,
            maxsteps=20000,
        )
    if not rel or rel[0] == 0:
        return empty
    coefs = tuple(Fraction(-c, rel[0]) for c in rel[1:])
    if any(max(abs(c.numerator), c.denominator) > height_bound for c in coefs):
        return empty
    recheck = digits + (digits + 1) // 2
    with mp.workdps(recheck + 15):
        acc = eval_expression(target, recheck)
        for c, b in zip(coefs, basis):
            acc -= mpf(c.numerator) / c.denominator * eval_expression(b, recheck)
        residual = abs(acc)
        if residual > mpf(10) ** (-(recheck - 5)):
            return empty
        rendered = mp.nstr(residual, 5)
    return RelationResult(target, basis, coefs, rendered, digits)
