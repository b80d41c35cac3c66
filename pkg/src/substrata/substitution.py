"""Substitutions over token alphabets and their letter-level structure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .words import Word


class NotGrowingError(ValueError):
    """Raised when an operation needs every letter's image length to diverge."""


class Substitution:
    """A nonerasing substitution: one nonempty image word per letter."""

    __slots__ = ("alphabet", "rules", "_index")

    def __init__(self, alphabet: Sequence[str], rules: Mapping[str, Sequence[str]]):
        alphabet = tuple(alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet letters must be distinct")
        known = set(alphabet)
        frozen = {}
        for a in alphabet:
            if a not in rules:
                raise ValueError(f"no rule for letter {a!r}")
            img = tuple(rules[a])
            if not img:
                raise ValueError(f"empty image for letter {a!r}")
            bad = [b for b in img if b not in known]
            if bad:
                raise ValueError(f"image of {a!r} uses undeclared letter {bad[0]!r}")
            frozen[a] = img
        extra = set(rules) - known
        if extra:
            raise ValueError(f"rule for undeclared letter {sorted(extra)[0]!r}")
        self.alphabet = alphabet
        self.rules = frozen
        self._index = {a: i for i, a in enumerate(alphabet)}

    @classmethod
    def from_strings(cls, rules: Mapping[str, str], alphabet: Optional[Sequence[str]] = None):
        """Shorthand for single-character letters: ``{"0": "01", "1": "10"}``."""
        alphabet = tuple(alphabet) if alphabet is not None else tuple(rules)
        return cls(alphabet, {a: tuple(img) for a, img in rules.items()})

    def __call__(self, w: Iterable[str]) -> Word:
        rules = self.rules
        out: List[str] = []
        for a in w:
            out.extend(rules[a])
        return tuple(out)

    def iterate(self, w: Iterable[str], n: int) -> Word:
        w = tuple(w)
        for _ in range(n):
            w = self(w)
        return w

    def order(self, a: str) -> int:
        return self._index[a]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Substitution) and self.alphabet == other.alphabet
                and self.rules == other.rules)

    def __hash__(self) -> int:
        return hash((self.alphabet, tuple(self.rules[a] for a in self.alphabet)))

    def __repr__(self) -> str:
        body = ", ".join(f"{a}->{' '.join(self.rules[a])}" for a in self.alphabet)
        return f"Substitution({body})"

    def restrict(self, letters: Iterable[str]) -> "Substitution":
        keep = set(letters)
        alphabet = [a for a in self.alphabet if a in keep]
        return Substitution(alphabet, {a: self.rules[a] for a in alphabet})

    def constant_length(self) -> Optional[int]:
        lengths = {len(img) for img in self.rules.values()}
        return lengths.pop() if len(lengths) == 1 else None

    def first(self, a: str) -> str:
        return self.rules[a][0]

    def last(self, a: str) -> str:
        return self.rules[a][-1]


def power(phi: Substitution, n: int) -> Substitution:
    if n < 1:
        raise ValueError("substitution power must be at least 1")
    rules = {a: (a,) for a in phi.alphabet}
    for _ in range(n):
        rules = {a: phi(img) for a, img in rules.items()}
    return Substitution(phi.alphabet, rules)


def compose(outer: Substitution, inner: Substitution) -> Substitution:
    """The substitution ``a -> outer(inner(a))``."""
    return Substitution(inner.alphabet, {a: outer(inner.rules[a]) for a in inner.alphabet})


def _length_table(phi: Substitution, steps: int) -> List[Dict[str, int]]:
    table = [{a: 1 for a in phi.alphabet}]
    for _ in range(steps):
        prev = table[-1]
        table.append({a: sum(prev[b] for b in phi.rules[a]) for a in phi.alphabet})
    return table


def bounded_letters(phi: Substitution) -> set:
    """Letters whose iterated image length stays bounded."""
    size = len(phi.alphabet)
    table = _length_table(phi, 2 * size)
    return {a for a in phi.alphabet if table[size][a] == table[2 * size][a]}


def is_growing(phi: Substitution) -> bool:
    return not bounded_letters(phi)


def require_growing(phi: Substitution) -> None:
    bounded = bounded_letters(phi)
    if bounded:
        names = " ".join(a for a in phi.alphabet if a in bounded)
        raise NotGrowingError(f"substitution is not growing (bounded letters: {names})")


def reach_sets(phi: Substitution) -> Dict[str, frozenset]:
    """For each letter b, every letter occurring in some iterate image of b (b included)."""
    out = {}
    for b in phi.alphabet:
        seen = {b}
        stack = [b]
        while stack:
            for c in phi.rules[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        out[b] = frozenset(seen)
    return out


@dataclass(frozen=True)
class LetterClassification:
    reach_sets: Dict[str, frozenset]
    equiv_classes: Tuple[frozenset, ...]
    minimal_letters: frozenset
    prolongable: frozenset
    backwards_prolongable: frozenset
    ample: frozenset
    very_ample: frozenset
    lambda_map: Dict[str, str]
    alpha_map: Dict[str, str]
    class_of: Dict[str, frozenset] = field(repr=False, default_factory=dict)

    def dominates(self, b: str, a: str) -> bool:
        """``b`` reaches ``a`` under iteration."""
        return a in self.reach_sets[b]

    def equivalent(self, a: str, b: str) -> bool:
        return b in self.class_of[a]

    def strictly_below(self, a: str, b: str) -> bool:
        """``b`` reaches ``a`` but ``a`` does not reach ``b``."""
        return a in self.reach_sets[b] and b not in self.reach_sets[a]


def _classify(phi: Substitution) -> LetterClassification:
    reach = reach_sets(phi)
    class_of: Dict[str, frozenset] = {}
    classes: List[frozenset] = []
    for a in phi.alphabet:
        if a in class_of:
            continue
        cls = frozenset(b for b in reach[a] if a in reach[b])
        classes.append(cls)
        for b in cls:
            class_of[b] = cls
    minimal = frozenset(b for b in phi.alphabet if all(b in reach[a] for a in reach[b]))
    prolongable = frozenset(a for a in phi.alphabet if phi.first(a) == a)
    backwards = frozenset(a for a in phi.alphabet if phi.last(a) == a)
    ample = frozenset(a for a in phi.alphabet
                      if any(a in reach[c] for c in phi.rules[a]))
    very = set()
    for cls in classes:
        if not cls <= ample:
            continue
        # the class is a plain cycle exactly when each member has one in-class successor
        inside = sum(1 for b in cls for c in phi.rules[b] if c in cls)
        if inside > len(cls):
            very |= cls
    lam = {}
    for a in ample:
        lam[a] = next(c for c in reversed(phi.rules[a]) if c in class_of[a])
    alpha = {a: phi.first(a) for a in phi.alphabet}
    return LetterClassification(reach, tuple(classes), minimal, prolongable, backwards,
                                ample, frozenset(very), lam, alpha, class_of)


def classify_letters(phi: Substitution) -> LetterClassification:
    require_growing(phi)
    return _classify(phi)


def _count_matrix(phi: Substitution, cap: int) -> Tuple[Tuple[int, ...], ...]:
    idx = phi._index
    rows = []
    for a in phi.alphabet:
        row = [0] * len(phi.alphabet)
        for c in phi.rules[a]:
            row[idx[c]] = min(cap, row[idx[c]] + 1)
        rows.append(tuple(row))
    return tuple(rows)


def _mat_mul(x, y, cap: int):
    size = len(x)
    return tuple(
        tuple(min(cap, sum(x[i][k] * y[k][j] for k in range(size) if x[i][k])) for j in range(size))
        for i in range(size)
    )


def _first_change(base, cap: int, threshold: int):
    """Iterate saturated powers of ``base`` and report the first power whose
    ``>= threshold`` pattern differs from that of the first power, per row.

    Returns {row index: exponent} for failing rows.  Iteration stops once a
    power repeats, which covers all exponents.
    """
    pattern = lambda m: tuple(tuple(v >= threshold for v in row) for row in m)
    ref = pattern(base)
    seen = {base}
    failures: Dict[int, int] = {}
    cur, n = base, 1
    while True:
        cur = _mat_mul(cur, base, cap)
        n += 1
        pat = pattern(cur)
        for i, row in enumerate(pat):
            if row != ref[i] and i not in failures:
                failures[i] = n
        if cur in seen:
            return failures
        seen.add(cur)


@dataclass(frozen=True)
class IdempotencyReport:
    property1: bool
    property2: bool
    property3: bool
    property4: bool
    witness_failures: Tuple[Tuple[int, str, int], ...]

    @property
    def idempotent(self) -> bool:
        return self.property1 and self.property2 and self.property3 and self.property4

    def __bool__(self) -> bool:
        return self.idempotent


def is_idempotent(phi: Substitution) -> IdempotencyReport:
    """Check the four structural properties that make ``phi`` an idempotent substitution.

    1. each letter's image has the same letter set as all of its iterated images;
    2. likewise for the set of letters occurring at least twice;
    3. the first letter of every image is prolongable;
    4. the last-equivalent-letter map is idempotent on ample letters.

    Witnesses are ``(property, letter, n)`` where ``n`` is the first exponent
    (or 1 for the map properties) at which the letter breaks the property.
    """
    require_growing(phi)
    cls = _classify(phi)
    witnesses: List[Tuple[int, str, int]] = []
    once = _first_change(_count_matrix(phi, 1), 1, 1)
    twice = _first_change(_count_matrix(phi, 2), 2, 2)
    for prop, fails in ((1, once), (2, twice)):
        for i in sorted(fails):
            witnesses.append((prop, phi.alphabet[i], fails[i]))
    p3 = True
    for a in phi.alphabet:
        if cls.alpha_map[a] not in cls.prolongable:
            p3 = False
            witnesses.append((3, a, 1))
    p4 = True
    for a in phi.alphabet:
        if a in cls.lambda_map and cls.lambda_map[cls.lambda_map[a]] != cls.lambda_map[a]:
            p4 = False
            witnesses.append((4, a, 1))
    return IdempotencyReport(not once, not twice, p3, p4, tuple(witnesses))


def _map_power(f: Mapping[str, str], n: int) -> Dict[str, str]:
    out = {}
    for a in f:
        b = a
        for _ in range(n):
            b = f[b]
        out[a] = b
    return out


def _mat_power(m, n: int, cap: int):
    result = m
    for _ in range(n - 1):
        result = _mat_mul(result, m, cap)
    return result


def idempotent_exponent(phi: Substitution, limit: Optional[int] = None) -> int:
    """Smallest ``m >= 1`` such that ``power(phi, m)`` is idempotent.

    The search works on the saturated count matrix and the first-letter and
    last-equivalent-letter maps, which determine idempotency of every power
    without expanding the images.
    """
    require_growing(phi)
    cls = _classify(phi)
    base = _count_matrix(phi, 2)
    alpha, lam = cls.alpha_map, cls.lambda_map
    cur = base
    m = 1
    while True:
        if _mat_mul(cur, cur, 2) == cur:
            am = _map_power(alpha, m)
            lm = _map_power(lam, m)
            if all(am[am[a]] == am[a] for a in am) and all(lm[lm[a]] == lm[a] for a in lm):
                return m
        m += 1
        if limit is not None and m > limit:
            raise RuntimeError(f"no idempotent power found up to {limit}")
        cur = _mat_mul(cur, base, 2)


def idempotent_power(phi: Substitution) -> Tuple[Substitution, int]:
    m = idempotent_exponent(phi)
    return power(phi, m), m
