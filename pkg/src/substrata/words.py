"""Finite words, factor sets and eventually periodic biinfinite words.

Letters are plain string tokens and words are tuples of tokens.  The empty
tuple is the empty word.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, gcd
from typing import Iterable, Optional, Sequence

Letter = str
Word = tuple

EMPTY: Word = ()
POWER_JOIN = "·"


def word(text: "str | Iterable[str]") -> Word:
    """Build a word from a string or an iterable of tokens.

    A string containing whitespace is split into tokens; otherwise every
    character is its own letter, so ``word("0121")`` gives four letters.
    """
    if isinstance(text, str):
        if any(ch.isspace() for ch in text):
            return tuple(text.split())
        return tuple(text)
    return tuple(text)


def render(w: Sequence[str], sep: str = "") -> str:
    """Join the tokens of a word; ``sep=" "`` gives the round-trippable form."""
    return sep.join(w)


def factors(w: Sequence[str], max_len: int) -> set:
    """All factors of a finite word of length at most ``max_len`` (including the empty word)."""
    w = tuple(w)
    out = {EMPTY}
    for length in range(1, min(max_len, len(w)) + 1):
        for i in range(len(w) - length + 1):
            out.add(w[i:i + length])
    return out


@dataclass(frozen=True)
class FactorSet:
    """A factor-closed set of words, all of length at most ``max_len``."""

    max_len: int
    words: frozenset

    def __contains__(self, item) -> bool:
        return tuple(item) in self.words

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(sorted_words(self.words))

    def restrict(self, n: int) -> "FactorSet":
        return FactorSet(min(n, self.max_len), frozenset(x for x in self.words if len(x) <= n))

    def of_length(self, n: int) -> list:
        return sorted_words(x for x in self.words if len(x) == n)


def sorted_words(words: Iterable[Word]) -> list:
    """Sort by length, then lexicographically by token."""
    return sorted(words, key=lambda x: (len(x), x))


@dataclass(frozen=True)
class BiWordTriple:
    """The biinfinite word ...vvv u www... ; an empty ``v`` or ``w`` leaves that side empty."""

    v: Word = EMPTY
    u: Word = EMPTY
    w: Word = EMPTY

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(self.v))
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "w", tuple(self.w))

    def expand(self, n: int) -> Word:
        """A finite window containing every factor of length at most ``n``."""
        p = ceil((n + 1) / max(1, len(self.v))) + ceil((n + 1) / max(1, len(self.w)))
        return self.v * p + self.u + self.w * p

    def text(self) -> str:
        return f"^w({' '.join(self.v)}){' '.join(self.u)}({' '.join(self.w)})^w"

    def __str__(self) -> str:
        return self.text()

    @classmethod
    def parse(cls, text: str) -> "BiWordTriple":
        """Inverse of :meth:`text`."""
        s = text.strip()
        if not (s.startswith("^w(") and s.endswith(")^w")):
            raise ValueError(f"not a biword triple: {text!r}")
        body = s[3:-3]
        close = body.find(")")
        open_ = body.rfind("(")
        if close < 0 or open_ < 0 or open_ < close:
            raise ValueError(f"not a biword triple: {text!r}")
        return cls(tuple(body[:close].split()), tuple(body[close + 1:open_].split()),
                   tuple(body[open_ + 1:].split()))


def biword_factors(t: BiWordTriple, n: int) -> FactorSet:
    if n < 0:
        raise ValueError("factor length bound must be non-negative")
    return FactorSet(n, frozenset(factors(t.expand(n), n)))


def is_primitive_word(u: Sequence[str]) -> bool:
    """True iff ``u`` is not a proper power of a shorter word."""
    u = tuple(u)
    if not u:
        raise ValueError("primitivity is undefined for the empty word")
    doubled = u + u
    size = len(u)
    return not any(doubled[i:i + size] == u for i in range(1, size))


def primitive_root(u: Sequence[str]) -> Word:
    u = tuple(u)
    for d in range(1, len(u) + 1):
        if len(u) % d == 0 and u[:d] * (len(u) // d) == u:
            return u[:d]
    return u


def is_rotation(a: Sequence[str], b: Sequence[str]) -> bool:
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = a + a
    return any(doubled[i:i + len(b)] == b for i in range(len(a)))


def least_rotation(u: Sequence[str], order: Optional[dict] = None) -> Word:
    """Lexicographically least cyclic shift; ``order`` ranks tokens (default: string order)."""
    u = tuple(u)
    if not u:
        return u
    key = (lambda r: tuple(order[x] for x in r)) if order else (lambda r: r)
    return min((u[i:] + u[:i] for i in range(len(u))), key=key)


@dataclass(frozen=True)
class MergeResult:
    shift_equivalent: bool
    period_length: int


def fine_wilf_merge(u, u2, v, n: int, m: int) -> Optional[MergeResult]:
    """Detect when a long run of ``u2`` at the end of ``u^n v`` forces ``u2`` to be a rotation of ``u``.

    Returns a result only after checking ``u^n v u2 == u^(n+1) v`` directly.
    """
    u, u2, v = tuple(u), tuple(u2), tuple(v)
    if not is_primitive_word(u) or not is_primitive_word(u2):
        raise ValueError("fine_wilf_merge needs primitive words")
    if n < 0 or m < 0:
        raise ValueError("exponents must be non-negative")
    left = u * n + v
    tail = u2 * m
    if len(tail) > len(left) or left[len(left) - len(tail):] != tail:
        return None
    if m * len(u2) < len(v) + len(u) + len(u2) - gcd(len(u), len(u2)):
        return None
    if len(u) != len(u2) or not is_rotation(u, u2):
        return None
    if left + u2 != u * (n + 1) + v:
        return None
    return MergeResult(True, len(u))


def show(w: Sequence[str]) -> str:
    """Compact display: concatenated when every token is one character, else space-separated."""
    w = tuple(w)
    if not w:
        return "ε"
    if all(len(a) == 1 for a in w):
        return "".join(w)
    return " ".join(w)
