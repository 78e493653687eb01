"""Unramifiedness: the recursive decision procedure with evidence
certificates, the known classification rules as a pattern table, and a
batch classifier that compares the two.

A value of weight w is unramified when its weight-one derivation slice
vanishes and every deeper odd slice is itself unramified.  The procedure
returns a certificate tree recording each slice that was checked; ramified
outcomes carry a concrete nonzero witness.  Wherever the full image is
available the verdict is cross-checked against a direct scan for the
weight-one letter, and any disagreement raises, it is never tied off.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product as iproduct

from gmpy2 import mpq

from .config import current_settings
from .core import EulerIndex, FamilyIndex, LinComb, Q
from .decompose import FULL_PHI_MAX, FWord, get_engine
from .errors import CriterionMismatch, Overweight, PrecisionCap
from .families import family_value
from .numerics import (
    PeriodValue,
    _decimal_from_mpq,
    period_of_value,
    reconstruct_rational,
)

UNRAMIFIED = "unramified"
RAMIFIED = "ramified"
UNKNOWN = "unknown"


def value_text(value: LinComb) -> str:
    """Canonical printable form; parses back to the same combination."""
    if value.is_zero():
        return "0"
    bits: list[str] = []
    for term, c in value.sorted_items():
        mag = c if c > 0 else -c
        body = term.text()
        if mag != 1:
            body = f"{mag}*{body}"
        if not bits:
            bits.append(body if c > 0 else f"-{body}")
        else:
            bits.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(bits)


@dataclass(frozen=True, eq=False)
class Certificate:
    """Evidence tree for one unramifiedness decision.

    children holds one (r, right factor key, sub-certificate) entry per odd
    slice 3 <= r < w that was examined; an unramified verdict examines all
    of them, a ramified one stops at the first failure.  witness is the
    nonzero weight-one assembly when that slice broke, or the value itself
    when a base-weight scan failed.
    """

    subject: str
    weight: int
    status: str
    method: str
    crosscheck: str
    y1_zero: bool | None
    failing_r: int | None
    children: tuple[tuple[int, str, "Certificate"], ...] = ()
    witness: LinComb | None = field(default=None, repr=False)
    value: LinComb = field(default_factory=LinComb.zero, repr=False)

    @property
    def unramified(self) -> bool:
        return self.status == UNRAMIFIED

    def summary(self) -> str:
        if self.method in ("zero", "image-scan"):
            return f"{self.status}; {self.method}"
        bits = [self.status, f"y1={'0' if self.y1_zero else 'nonzero'}"]
        for r, _, sub in self.children:
            bits.append(f"r{r}:{'ok' if sub.unramified else 'fail'}")
        bits.append(self.crosscheck)
        return "; ".join(bits)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "weight": self.weight,
            "status": self.status,
            "method": self.method,
            "crosscheck": self.crosscheck,
            "y1_zero": self.y1_zero,
            "failing_r": self.failing_r,
            "witness": None if self.witness is None else value_text(self.witness),
            "children": [
                {"r": r, "key": key, "certificate": sub.to_dict()}
                for r, key, sub in self.children
            ],
        }


def descend(value: LinComb, subject: str = "value") -> Certificate:
    """Decide unramifiedness and return the evidence tree."""
    eng = get_engine()
    if value.is_zero():
        return Certificate(subject, 0, UNRAMIFIED, "zero", "trivial", None, None)
    w = value.common_weight()
    limit = current_settings().max_weight
    if w > limit:
        raise Overweight(f"weight {w} beyond the configured limit {limit}")
    if w <= 2:
        # the image is one or two dimensional here; scan it directly
        ok = eng.is_f1_free(value)
        return Certificate(
            subject,
            w,
            UNRAMIFIED if ok else RAMIFIED,
            "image-scan",
            "trivial",
            None,
            None,
            witness=None if ok else value,
            value=value,
        )

    y1 = eng.y_r(value, 1)
    y1_zero = eng.is_zero_H(y1)
    children: list[tuple[int, str, Certificate]] = []
    failing_r: int | None = None
    witness: LinComb | None = None
    if not y1_zero:
        failing_r = 1
        witness = y1
    else:
        for r in range(3, w, 2):
            yr = eng.y_r(value, r)
            sub = descend(yr, f"{subject}[r={r}]")
            children.append((r, value_text(yr), sub))
            if not sub.unramified:
                failing_r = r
                break

    status = UNRAMIFIED if failing_r is None else RAMIFIED
    if w <= FULL_PHI_MAX:
        if eng.is_f1_free(value) != (status == UNRAMIFIED):
            raise CriterionMismatch(
                f"slice recursion and letter-one scan disagree on {subject}"
            )
        crosscheck = "scan-agrees"
    else:
        crosscheck = "beyond-scan-range"
    return Certificate(
        subject,
        w,
        status,
        "slice-recursion",
        crosscheck,
        y1_zero,
        failing_r,
        tuple(children),
        witness=witness,
        value=value,
    )


def is_unramified(x) -> Certificate:
    """Certificate for a family index, euler index, word, or combination."""
    from .coaction import to_value

    value = to_value(x)
    subject = x.text() if hasattr(x, "text") else value_text(value)
    return descend(value, subject)


def verify_certificate(cert: Certificate) -> bool:
    """Re-derive every claim a certificate makes from scratch."""
    eng = get_engine()
    if cert.method == "zero":
        return cert.value.is_zero() or cert.unramified
    if cert.method == "image-scan":
        return eng.is_f1_free(cert.value) == cert.unramified
    if eng.is_zero_H(eng.y_r(cert.value, 1)) != cert.y1_zero:
        return False
    if cert.failing_r == 1:
        return cert.witness is not None and not eng.is_zero_H(cert.witness)
    for r, _, sub in cert.children:
        if eng.y_r(cert.value, r) != sub.value:
            return False
        if not verify_certificate(sub):
            return False
    if cert.unramified:
        # every odd slice below the weight must have been covered
        seen = {r for r, _, _ in cert.children}
        return cert.y1_zero is True and seen == set(range(3, cert.weight, 2))
    return any(not sub.unramified for _, _, sub in cert.children)


@dataclass(frozen=True)
class ZetaMultiple:
    """x = coeff * (basis element), basis named explicitly."""

    coeff: mpq
    basis: str
    weight: int


def rational_zeta_multiple(x) -> ZetaMultiple | None:
    """When every odd slice of x vanishes, x is a rational multiple of the
    weight's primitive: the single zeta at odd weight, a power of the
    weight-two zeta at even weight.  Returns that multiple, or None when a
    slice survives."""
    from .coaction import to_value

    value = to_value(x)
    if value.is_zero():
        return ZetaMultiple(Q(0), "0", 0)
    w = value.common_weight()
    limit = current_settings().max_weight
    if w > limit:
        raise Overweight(f"weight {w} beyond the configured limit {limit}")
    if w == 0:
        from .core import UNIT_INDEX

        return ZetaMultiple(value.coeff(UNIT_INDEX), "1", 0)
    if w % 2:
        basis = f"z({w})"
    else:
        basis = "z(2)" if w == 2 else f"z(2)^{w // 2}"
    if w == 1:
        return None  # the only weight-one direction is the ramified logarithm
    eng = get_engine()
    prim = FWord((w,), 0) if w % 2 else FWord((), w // 2)
    if w <= FULL_PHI_MAX:
        poly = eng.phi(value)
        for word, _ in poly.items():
            if word != prim:
                return None
        return ZetaMultiple(poly.coeff(prim), basis, w)
    for r in range(1, w, 2):
        if not eng.is_zero_H(eng.y_r(value, r)):
            return None
    # all slices vanish, so the image is c * prim; pin c numerically
    digits = current_settings().precision_cap
    if w % 2:
        prim_num = period_of_value(
            LinComb.single(EulerIndex(0, (w,), (1,))), digits
        )
    else:
        prim_num = period_of_value(
            LinComb.single(EulerIndex(0, (2,), (1,))), digits
        ) ** (w // 2)
    approx = period_of_value(value, digits) / prim_num
    claim = min(digits, 60) - 8
    c = reconstruct_rational(
        PeriodValue(_decimal_from_mpq(approx, claim), claim), 10**12
    )
    if c is None:
        raise PrecisionCap(
            f"slices vanish at weight {w} but the rational multiple did not "
            f"settle at {claim} digits"
        )
    return ZetaMultiple(c, basis, w)


# -- predicted classifications -------------------------------------------


@dataclass(frozen=True)
class Predicted:
    value: str  # unramified | ramified | unknown
    rule: str
    conjectural: bool = False


_T_TRIPLE_EXCEPTIONS = {(1, 1, 2), (1, 1, 3), (1, 2, 2)}
_S_DEEP_EXCEPTIONS = {(2, 1, 1, 1, 4)}


def _odd_large(k: int) -> bool:
    return k >= 3 and k % 2 == 1


def _even(k: int) -> bool:
    return k % 2 == 0


def _predict_t(parts: tuple[int, ...]) -> Predicted:
    d = len(parts)
    if d == 1:
        if parts[0] == 1:
            return Predicted(RAMIFIED, "single-unit")
        return Predicted(UNRAMIFIED, "single-zeta-multiple")
    if parts[0] == 1 or parts[-1] == 1:
        return Predicted(RAMIFIED, "edge-unit")
    if all(k >= 2 for k in parts):
        return Predicted(UNRAMIFIED, "all-parts-at-least-two")

    units = [i for i, k in enumerate(parts) if k == 1]

    if len(units) == 1:
        i = units[0]
        head, tail = parts[:i], parts[i + 1:]
        if tail and all(k >= 2 for k in tail):
            # a run of one repeated even entry, the unit, then parts >= 2;
            # this also covers twos-then-unit-then-twos-and-one-odd shapes
            if _even(head[0]) and all(k == head[0] for k in head):
                return Predicted(UNRAMIFIED, "even-run-then-unit")
            if (
                len(head) == 3
                and _even(head[0])
                and _even(head[1])
                and head[2] == head[0]
            ):
                return Predicted(UNRAMIFIED, "even-pair-palindrome-then-unit")
            mid = (len(head) - 1) // 2
            if (
                len(head) >= 5
                and len(head) % 2 == 1
                and _even(head[0])
                and _even(head[mid])
                and all(k == head[0] for j, k in enumerate(head) if j != mid)
            ):
                # mirrored even runs around one even entry: only the
                # shortest case is settled, the rest is a stated guess
                return Predicted(UNRAMIFIED, "nested-even-run-then-unit", True)
            # exactly one odd entry >= 3 among evens ahead of the unit
            # leaves a slice that survives
            odd_at = [j for j, k in enumerate(head) if not _even(k)]
            if len(odd_at) == 1 and _odd_large(head[odd_at[0]]):
                return Predicted(RAMIFIED, "odd-in-even-head-before-unit")
    elif len(units) == 2:
        i, j = units
        head, mid, tail = parts[:i], parts[i + 1:j], parts[j + 1:]
        if (
            tail
            and all(k >= 2 for k in tail)
            and head == (2,)
            and mid == (3, 2)
        ):
            return Predicted(UNRAMIFIED, "two-unit-three-two-unit")
    return Predicted(UNKNOWN, "")


def _predict_T(parts: tuple[int, ...]) -> Predicted:
    d = len(parts)
    if d == 1:
        if parts[0] == 1:
            return Predicted(RAMIFIED, "single-unit")
        return Predicted(UNRAMIFIED, "single-zeta-multiple")
    if d == 2:
        k, l = parts
        if l >= 2 and (k + l) % 2 == 1:
            return Predicted(UNRAMIFIED, "double-parity")
        return Predicted(RAMIFIED, "double-parity")
    if d == 3:
        a, b, c = parts
        if parts in _T_TRIPLE_EXCEPTIONS:
            return Predicted(UNRAMIFIED, "low-weight-reversal")
        if _odd_large(a) and _even(b) and _odd_large(c):
            return Predicted(UNRAMIFIED, "odd-even-odd")
        if _even(a) and b == 1 and _even(c):
            return Predicted(UNRAMIFIED, "even-unit-even")
        return Predicted(RAMIFIED, "triple-table")
    return Predicted(UNKNOWN, "")


def _predict_S(parts: tuple[int, ...]) -> Predicted:
    d = len(parts)
    if d == 1:
        if parts[0] == 1:
            return Predicted(RAMIFIED, "single-unit")
        return Predicted(UNRAMIFIED, "single-zeta-multiple")
    if parts[0] == 1:
        return Predicted(RAMIFIED, "leading-unit")
    if d == 2:
        k, l = parts
        if k >= 2 and l >= 2 and (k + l) % 2 == 1:
            return Predicted(UNRAMIFIED, "double-parity")
        return Predicted(RAMIFIED, "double-parity")
    if d == 3:
        a, b, c = parts
        if _odd_large(a) and b % 2 == 1 and _even(c):
            return Predicted(UNRAMIFIED, "odd-odd-even")
        if _odd_large(a) and _even(b) and _odd_large(c):
            return Predicted(UNRAMIFIED, "odd-even-odd")
        if _even(a) and b == 1 and _even(c):
            return Predicted(UNRAMIFIED, "even-unit-even")
        return Predicted(RAMIFIED, "triple-table")
    if parts in _S_DEEP_EXCEPTIONS:
        return Predicted(UNRAMIFIED, "deep-exception")
    return Predicted(UNKNOWN, "")


def _predict_tz(parts: tuple[int, ...], prefix: int) -> Predicted:
    if parts[-1] >= 2:
        return Predicted(UNRAMIFIED, "distribution-to-zeta")
    if len(parts) == 1:
        if prefix == 0:
            return Predicted(RAMIFIED, "single-unit")
        return Predicted(UNKNOWN, "")
    if parts[-2] >= 2:
        return Predicted(RAMIFIED, "unit-tail")
    return Predicted(UNKNOWN, "")


def _predict_z(parts: tuple[int, ...], signs: tuple[int, ...]) -> Predicted:
    if all(s == 1 for s in signs):
        return Predicted(UNRAMIFIED, "level-one")
    if len(parts) == 1:
        if parts[0] == 1:
            return Predicted(RAMIFIED, "single-unit")
        return Predicted(UNRAMIFIED, "single-zeta-multiple")
    return Predicted(UNKNOWN, "")


def predicted_status(
    family: str, parts: tuple[int, ...], prefix: int = 0, signs: tuple[int, ...] = ()
) -> Predicted:
    """Pattern-match the known classification rules; unknown when none fit."""
    parts = tuple(parts)
    if prefix:
        if family == "tz":
            return _predict_tz(parts, prefix)
        if family == "z":
            if all(s == 1 for s in signs):
                return Predicted(UNRAMIFIED, "level-one")
            if len(parts) == 1:
                return Predicted(UNRAMIFIED, "single-zeta-multiple")
            return Predicted(UNKNOWN, "")
        if len(parts) == 1:
            return Predicted(UNRAMIFIED, "single-zeta-multiple")
        if family == "T" and len(parts) == 2:
            k, l = parts
            if l >= 2 and (prefix + k + l) % 2 == 1:
                return Predicted(UNRAMIFIED, "double-parity-prefixed")
        return Predicted(UNKNOWN, "")
    if family == "t":
        return _predict_t(parts)
    if family == "T":
        return _predict_T(parts)
    if family == "S":
        return _predict_S(parts)
    if family == "tz":
        return _predict_tz(parts, 0)
    if family == "z":
        return _predict_z(parts, signs)
    return Predicted(UNKNOWN, "")


# -- batch classification ---------------------------------------------------

REPORT_SCHEMA_VERSION = 1
REPORT_COLUMNS = (
    "family",
    "index",
    "weight",
    "depth",
    "computed",
    "predicted",
    "rule",
    "conjectural",
    "agrees",
    "certificate",
)


@dataclass
class Report:
    rows: list[dict]

    def disagreements(self, include_conjectural: bool = True) -> list[dict]:
        out = []
        for row in self.rows:
            if row["agrees"] is False and (
                include_conjectural or not row["conjectural"]
            ):
                out.append(row)
        return out


def _compositions(total: int, depth: int):
    if depth == 1:
        yield (total,)
        return
    for first in range(1, total - depth + 2):
        for rest in _compositions(total - first, depth - 1):
            yield (first,) + rest


def indices_for(family: str, depth: int, max_weight: int) -> list[FamilyIndex]:
    out: list[FamilyIndex] = []
    for w in range(depth, max_weight + 1):
        for parts in _compositions(w, depth):
            if family == "z":
                for signs in iproduct((1, -1), repeat=depth):
                    out.append(FamilyIndex("z", 0, parts, signs))
            else:
                out.append(FamilyIndex(family, 0, parts))
    return out


def classify_row(fi: FamilyIndex) -> dict:
    cert = descend(family_value(fi), fi.text())
    pred = predicted_status(fi.family, fi.parts, fi.prefix, fi.signs)
    agrees = None if pred.value == UNKNOWN else (cert.status == pred.value)
    return {
        "family": fi.family,
        "index": fi.text(),
        "weight": fi.weight,
        "depth": fi.depth,
        "computed": cert.status,
        "predicted": pred.value,
        "rule": pred.rule,
        "conjectural": pred.conjectural,
        "agrees": agrees,
        "certificate": cert.summary(),
    }


def classify(
    family: str,
    depth: int | tuple[int, ...],
    max_weight: int,
    jobs: int | None = None,
) -> Report:
    depths = (depth,) if isinstance(depth, int) else tuple(depth)
    limit = current_settings().max_weight
    if max_weight > limit:
        raise Overweight(
            f"requested weight {max_weight} beyond the configured limit {limit}"
        )
    indices: list[FamilyIndex] = []
    for d in depths:
        indices.extend(indices_for(family, d, max_weight))
    workers = jobs if jobs and jobs > 0 else current_settings().effective_jobs()
    if workers == 1 or len(indices) <= 1:
        rows = [classify_row(fi) for fi in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(classify_row, indices))
    rows.sort(
        key=lambda row: (row["family"], row["weight"], row["depth"], row["index"])
    )
    return Report(rows)


def report_json(report: Report) -> str:
    rows = [{col: row[col] for col in REPORT_COLUMNS} for row in report.rows]
    return json.dumps(rows, indent=2)


def report_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in report.rows:
        out = []
        for col in REPORT_COLUMNS:
            v = row[col]
            if v is None:
                out.append("")
            elif isinstance(v, bool):
                out.append("true" if v else "false")
            else:
                out.append(str(v))
        writer.writerow(out)
    return buf.getvalue()


def report_text(report: Report) -> str:
    lines = []
    for row in report.rows:
        mark = ""
        if row["agrees"] is False:
            mark = "  << disagrees"
        elif row["agrees"] is None:
            mark = "  (no prediction)"
        conj = " [conjectural]" if row["conjectural"] else ""
        lines.append(
            f"{row['index']:<24} {row['computed']:<12} "
            f"predicted={row['predicted']}{conj}{mark}"
        )
    bad = report.disagreements()
    lines.append(
        f"{len(report.rows)} indices, {len(bad)} disagreement(s)"
    )
    return "\n".join(lines)


def search_unramified(
    family: str, depth_min: int, max_weight: int, jobs: int | None = None
) -> list[tuple[FamilyIndex, Certificate]]:
    """Scan a family for unramified indices of at least the given depth."""
    hits: list[tuple[FamilyIndex, Certificate]] = []
    indices: list[FamilyIndex] = []
    for d in range(depth_min, max_weight + 1):
        indices.extend(indices_for(family, d, max_weight))

    def probe(fi: FamilyIndex):
        return fi, descend(family_value(fi), fi.text())

    workers = jobs if jobs and jobs > 0 else current_settings().effective_jobs()
    if workers == 1 or len(indices) <= 1:
        results = [probe(fi) for fi in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(probe, indices))
    for fi, cert in results:
        if cert.unramified:
            hits.append((fi, cert))
    hits.sort(key=lambda pair: pair[0].sort_key())
    return hits
