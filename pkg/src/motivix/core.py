"""Exact building blocks: letters, iterated-integral words, index types,
and linear combinations with rational coefficients.

Letters live in {0, +1, -1} and are written '0', 'p', 'm' in text form.
A word is a start point, a letter sequence, and an end point; its text form
is "start;letters;end", e.g. "0;p0m0;p" for I(0; +1,0,-1,0; +1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Mapping, Union

from gmpy2 import mpq

from .errors import GradeError, InvalidWord

Rational = mpq

LETTER_TO_CHAR = {0: "0", 1: "p", -1: "m"}
CHAR_TO_LETTER = {"0": 0, "p": 1, "m": -1}

FAMILIES = ("z", "t", "T", "S", "tz")


def Q(num: int | str | mpq, den: int = 1) -> mpq:
    return mpq(num, den)


def _check_letter(x: int) -> int:
    if x not in (0, 1, -1):
        raise InvalidWord(f"letter must be 0, +1 or -1, got {x!r}")
    return x


@dataclass(frozen=True)
class IntegralWord:
    """An iterated-integral symbol I(start; letters; end)."""

    start: int
    letters: tuple[int, ...]
    end: int

    def __post_init__(self) -> None:
        _check_letter(self.start)
        _check_letter(self.end)
        for x in self.letters:
            _check_letter(x)

    @property
    def weight(self) -> int:
        return len(self.letters)

    @property
    def depth(self) -> int:
        return sum(1 for x in self.letters if x != 0)

    def is_convergent(self) -> bool:
        """No endpoint pole: first letter differs from start, last from end."""
        if not self.letters:
            return True
        return self.letters[0] != self.start and self.letters[-1] != self.end

    def reversed(self) -> "IntegralWord":
        return IntegralWord(self.end, tuple(reversed(self.letters)), self.start)

    def text(self) -> str:
        mid = "".join(LETTER_TO_CHAR[x] for x in self.letters)
        return f"{LETTER_TO_CHAR[self.start]};{mid};{LETTER_TO_CHAR[self.end]}"

    @classmethod
    def from_text(cls, s: str) -> "IntegralWord":
        parts = s.split(";")
        if len(parts) != 3 or len(parts[0]) != 1 or len(parts[2]) != 1:
            raise InvalidWord(f"bad word text {s!r}")
        try:
            start = CHAR_TO_LETTER[parts[0]]
            end = CHAR_TO_LETTER[parts[2]]
            letters = tuple(CHAR_TO_LETTER[c] for c in parts[1])
        except KeyError as exc:
            raise InvalidWord(f"bad letter {exc.args[0]!r} in {s!r}") from None
        return cls(start, letters, end)

    def sort_key(self) -> tuple:
        return ("w", self.start, self.letters, self.end)

    def __repr__(self) -> str:
        return f"IntegralWord({self.text()!r})"


@dataclass(frozen=True)
class EulerIndex:
    """A level-two Euler index: prefix count of zeros, parts, and signs.

    Encodes the word I(0; 0^prefix, e_1, 0^{k_1-1}, ..., e_d, 0^{k_d-1}; 1)
    where the nonzero letters e_j are recovered from the signs by
    e_j = signs_j * signs_{j+1} * ... * signs_d.
    The empty index (prefix 0, no parts) is the unit of weight 0.
    """

    prefix: int
    parts: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.prefix < 0:
            raise InvalidWord("prefix must be nonnegative")
        if len(self.parts) != len(self.signs):
            raise InvalidWord("parts and signs differ in length")
        if not self.parts and self.prefix:
            raise InvalidWord("prefix without parts is not an index")
        for k in self.parts:
            if k < 1:
                raise InvalidWord(f"part must be >= 1, got {k}")
        for s in self.signs:
            if s not in (1, -1):
                raise InvalidWord(f"sign must be +1 or -1, got {s}")

    @property
    def weight(self) -> int:
        return self.prefix + sum(self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    @property
    def is_unit(self) -> bool:
        return not self.parts

    def is_convergent(self) -> bool:
        """Admissible: the trailing (part, sign) pair is not (1, +1)."""
        if self.is_unit:
            return True
        return (self.parts[-1], self.signs[-1]) != (1, 1)

    def text(self) -> str:
        sub = f"_{self.prefix}" if self.prefix else ""
        body = ",".join(
            str(k if s == 1 else -k) for k, s in zip(self.parts, self.signs)
        )
        return f"z{sub}({body})"

    def sort_key(self) -> tuple:
        return ("e", self.weight, self.prefix, self.parts, self.signs)

    def __repr__(self) -> str:
        return f"EulerIndex({self.text()!r})"


UNIT_INDEX = EulerIndex(0, (), ())


def word_from_euler_index(idx: EulerIndex) -> IntegralWord:
    """Canonical word of an Euler index."""
    letters: list[int] = [0] * idx.prefix
    d = idx.depth
    for j in range(d):
        eta = 1
        for s in idx.signs[j:]:
            eta *= s
        letters.append(eta)
        letters.extend([0] * (idx.parts[j] - 1))
    return IntegralWord(0, tuple(letters), 1)


def euler_index_from_word(word: IntegralWord) -> EulerIndex:
    """Decode the canonical word shape back into an Euler index."""
    if word.start != 0 or word.end != 1:
        raise InvalidWord(f"not a canonical word: {word.text()!r}")
    ls = word.letters
    i = 0
    while i < len(ls) and ls[i] == 0:
        i += 1
    if i == len(ls):
        if i:
            raise InvalidWord(f"all-zero word is not an index: {word.text()!r}")
        return UNIT_INDEX
    prefix = i
    etas: list[int] = []
    parts: list[int] = []
    while i < len(ls):
        etas.append(ls[i])
        i += 1
        run = 0
        while i < len(ls) and ls[i] == 0:
            run += 1
            i += 1
        parts.append(run + 1)
    d = len(parts)
    signs = [0] * d
    signs[d - 1] = etas[d - 1]
    for j in range(d - 2, -1, -1):
        signs[j] = etas[j] * etas[j + 1]
    return EulerIndex(prefix, tuple(parts), tuple(signs))


@dataclass(frozen=True)
class FamilyIndex:
    """An index into one of the value families z, t, T, S, tz.

    Signs are carried only by the z family; a negative entry in text form
    (e.g. "z(2,-3)") folds the sign into the part.
    """

    family: str
    prefix: int
    parts: tuple[int, ...]
    signs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise InvalidWord(f"unknown family {self.family!r}")
        if self.prefix < 0:
            raise InvalidWord("prefix must be nonnegative")
        if not self.parts:
            raise InvalidWord("family index needs at least one part")
        for k in self.parts:
            if k < 1:
                raise InvalidWord(f"part must be >= 1, got {k}")
        if self.family == "z":
            if len(self.signs) != len(self.parts):
                raise InvalidWord("z index needs one sign per part")
            for s in self.signs:
                if s not in (1, -1):
                    raise InvalidWord(f"sign must be +1 or -1, got {s}")
        elif self.signs:
            raise InvalidWord(f"family {self.family} carries no signs")

    @property
    def weight(self) -> int:
        return self.prefix + sum(self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    def is_convergent(self) -> bool:
        """Whether the defining series converges (no regularization needed)."""
        if self.family == "z":
            return (self.parts[-1], self.signs[-1]) != (1, 1)
        return self.parts[-1] != 1

    def to_euler(self) -> EulerIndex:
        if self.family != "z":
            raise InvalidWord("only z indices convert directly")
        return EulerIndex(self.prefix, self.parts, self.signs)

    def text(self) -> str:
        sub = f"_{self.prefix}" if self.prefix else ""
        if self.family == "z":
            body = ",".join(
                str(k if s == 1 else -k) for k, s in zip(self.parts, self.signs)
            )
        else:
            body = ",".join(str(k) for k in self.parts)
        return f"{self.family}{sub}({body})"

    def sort_key(self) -> tuple:
        return ("f", self.family, self.weight, self.prefix, self.parts, self.signs)

    def __repr__(self) -> str:
        return f"FamilyIndex({self.text()!r})"


def term_sort_key(term: Any) -> tuple:
    if hasattr(term, "sort_key"):
        return term.sort_key()
    if isinstance(term, tuple):
        return tuple(term_sort_key(t) for t in term)
    return ("?", repr(term))


def term_weight(term: Any) -> int:
    if hasattr(term, "weight"):
        return term.weight
    if isinstance(term, tuple):
        return sum(term_weight(t) for t in term)
    raise GradeError(f"term {term!r} has no weight")


class LinComb:
    """Finite linear combination of hashable terms over the rationals.

    Zero coefficients are never stored; iteration is in sorted term order,
    so equal combinations print identically.
    """

    __slots__ = ("_c",)

    def __init__(self, items: Union[Mapping, Iterable[tuple]] = ()) -> None:
        c: dict = {}
        pairs = items.items() if hasattr(items, "items") else items
        for term, coeff in pairs:
            coeff = mpq(coeff)
            if coeff:
                acc = c.get(term, 0) + coeff
                if acc:
                    c[term] = acc
                else:
                    c.pop(term, None)
        self._c = c

    @classmethod
    def zero(cls) -> "LinComb":
        return cls()

    @classmethod
    def single(cls, term: Any, coeff: int | mpq = 1) -> "LinComb":
        coeff = mpq(coeff)
        return _wrap({term: coeff} if coeff else {})

    def is_zero(self) -> bool:
        return not self._c

    def coeff(self, term: Any) -> mpq:
        return self._c.get(term, mpq(0))

    def terms(self) -> list:
        return sorted(self._c, key=term_sort_key)

    def items(self) -> Iterator[tuple[Any, mpq]]:
        """Unsorted view; use sorted_items for reproducible output."""
        return iter(self._c.items())

    def sorted_items(self) -> Iterator[tuple[Any, mpq]]:
        for term in self.terms():
            yield term, self._c[term]

    def __len__(self) -> int:
        return len(self._c)

    def __add__(self, other: "LinComb") -> "LinComb":
        out = dict(self._c)
        for term, coeff in other._c.items():
            acc = out.get(term, 0) + coeff
            if acc:
                out[term] = acc
            else:
                out.pop(term, None)
        return _wrap(out)

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + other.scale(-1)

    def __neg__(self) -> "LinComb":
        return self.scale(-1)

    def scale(self, coeff: int | mpq) -> "LinComb":
        coeff = mpq(coeff)
        if not coeff:
            return LinComb()
        return _wrap({t: c * coeff for t, c in self._c.items()})

    def map_terms(self, fn: Callable[[Any], "LinComb"]) -> "LinComb":
        """Linear extension of a map sending each term to a combination."""
        acc: dict = {}
        for term, coeff in self._c.items():
            for t, c in fn(term)._c.items():
                tot = acc.get(t, 0) + c * coeff
                if tot:
                    acc[t] = tot
                else:
                    acc.pop(t, None)
        return _wrap(acc)

    def common_weight(self) -> int:
        """Weight of a homogeneous combination; GradeError if mixed."""
        weights = {term_weight(t) for t in self._c}
        if len(weights) > 1:
            raise GradeError(f"mixed weights {sorted(weights)}")
        return weights.pop() if weights else 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinComb) and self._c == other._c

    def __hash__(self):
        raise TypeError("LinComb is not hashable")

    def __repr__(self) -> str:
        if not self._c:
            return "LinComb(0)"
        bits = [f"{self._c[t]}*{t!r}" for t in self.terms()]
        return "LinComb(" + " + ".join(bits) + ")"


def _wrap(c: dict) -> LinComb:
    out = LinComb.__new__(LinComb)
    out._c = c
    return out
