"""Infinite sequences generated by substitutions: prefixes, factor sets, kernels."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from . import budget
from .substitution import Substitution, require_growing
from .words import EMPTY, FactorSet, Word, factors

MARKER = "♠"


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class SubstitutiveSpec:
    """The coded fixed point ``coding(phi^omega(seed))``.

    When ``marker`` is set it names the seed letter, which occurs only at
    position 0; that position is dropped from every output.
    """

    phi: Substitution
    seed: str
    coding: Optional[Dict[str, str]] = None
    marker: Optional[str] = None

    def __post_init__(self):
        phi = self.phi
        if self.seed not in phi.rules:
            raise SpecError(f"seed {self.seed!r} is not in the alphabet")
        if phi.first(self.seed) != self.seed:
            raise SpecError(f"seed {self.seed!r} is not prolongable")
        require_growing(phi)
        if self.coding is not None:
            missing = [a for a in phi.alphabet if a not in self.coding]
            if missing:
                raise SpecError(f"coding undefined on {missing[0]!r}")
            object.__setattr__(self, "coding", dict(self.coding))
        if self.marker is not None:
            if self.marker != self.seed:
                raise SpecError("the marker must be the seed letter")
            if phi.rules[self.seed].count(self.seed) != 1 or any(
                    self.seed in phi.rules[a] for a in phi.alphabet if a != self.seed):
                raise SpecError("the marker letter must occur only at position 0")

    @property
    def base(self) -> Optional[int]:
        k = self.phi.constant_length()
        return k if k is not None and k >= 2 else None

    def code(self, w: Iterable[str]) -> Word:
        if self.coding is None:
            return tuple(w)
        c = self.coding
        return tuple(c[a] for a in w)

    def underlying_prefix(self, n: int) -> Word:
        """First ``n`` letters of the uncoded fixed point (marker position included)."""
        budget.check(n, "prefix generation")
        w: Word = (self.seed,)
        while len(w) < n:
            nxt = self.phi(w)
            if len(nxt) == len(w):
                raise SpecError("fixed point does not grow")
            # only the first n letters matter; trim before the next expansion
            w = nxt[:n] if len(nxt) > n else nxt
        return w[:n]

    def prefix(self, n: int) -> Word:
        drop = 1 if self.marker is not None else 0
        return self.code(self.underlying_prefix(n + drop)[drop:])


class AutomaticSpec(SubstitutiveSpec):
    """A substitutive spec whose substitution has constant length at least 2."""

    def __post_init__(self):
        super().__post_init__()
        if self.base is None:
            raise SpecError("automatic sequences need a constant-length substitution of length >= 2")


def make_spec(phi: Substitution, seed: str, coding=None) -> SubstitutiveSpec:
    """Return an :class:`AutomaticSpec` when ``phi`` has constant length, else a plain spec."""
    k = phi.constant_length()
    cls = AutomaticSpec if k is not None and k >= 2 else SubstitutiveSpec
    return cls(phi, seed, coding)


def fixpoint_prefix(spec: SubstitutiveSpec, n: int) -> Word:
    if n < 0:
        raise ValueError("prefix length must be non-negative")
    return spec.prefix(n)


def fresh_letter(taken, stem: str) -> str:
    name = stem
    while name in taken:
        name += "'"
    return name


def spec_from_tail_words(phi: Substitution, w, coding: Optional[Dict[str, str]] = None,
                         head: Optional[str] = None) -> SubstitutiveSpec:
    """Spec for ``w phi(w) phi^2(w) ...`` via a fresh marker letter ``m -> m w``.

    By default the marker codes to the reserved token ``♠`` and its single
    position is dropped.  With ``head`` the marker codes to that token and is
    kept, giving ``head w phi(w) ...``.
    """
    w = tuple(w)
    if not w:
        raise SpecError("tail word must be nonempty")
    marker = fresh_letter(phi.rules, MARKER)
    rules = dict(phi.rules)
    rules[marker] = (marker,) + w
    ext = Substitution(phi.alphabet + (marker,), rules)
    base = dict(coding) if coding else {a: a for a in phi.alphabet}
    if head is None:
        base[marker] = MARKER
        return SubstitutiveSpec(ext, marker, base, marker=marker)
    base[marker] = head
    return SubstitutiveSpec(ext, marker, base)


@dataclass(frozen=True)
class KernelDescription:
    base: int
    alphabet: Tuple[str, ...]
    generators: Tuple[Tuple[str, ...], ...]
    maps: FrozenSet[Tuple[str, ...]]

    def apply(self, g: Tuple[str, ...], a: str) -> str:
        return g[self.alphabet.index(a)]

    def compose(self, outer: Tuple[str, ...], inner: Tuple[str, ...]) -> Tuple[str, ...]:
        idx = {a: i for i, a in enumerate(self.alphabet)}
        return tuple(outer[idx[b]] for b in inner)

    def map_for(self, digits: Iterable[int]) -> Tuple[str, ...]:
        """Map for the subsequence indexed by ``k^t n + r``, with ``r`` given by its base-k digits (most significant first)."""
        g = self.alphabet
        for d in digits:
            g = self.compose(self.generators[d], g)
        return g

    @property
    def identity(self) -> Tuple[str, ...]:
        return self.alphabet

    def is_closed(self) -> bool:
        return all(self.compose(f, g) in self.maps for f in self.generators for g in self.maps)


def kernel(spec: SubstitutiveSpec) -> KernelDescription:
    """The finite set of letter maps describing every kernel subsequence."""
    phi = spec.phi
    k = phi.constant_length()
    if k is None or k < 2:
        raise SpecError("kernel needs a constant-length substitution")
    alphabet = phi.alphabet
    gens = tuple(tuple(phi.rules[b][j] for b in alphabet) for j in range(k))
    idx = {a: i for i, a in enumerate(alphabet)}
    maps = {alphabet}
    frontier = [alphabet]
    while frontier:
        g = frontier.pop()
        for f in gens:
            h = tuple(f[idx[b]] for b in g)
            if h not in maps:
                maps.add(h)
                frontier.append(h)
    return KernelDescription(k, alphabet, gens, frozenset(maps))


def verify_kernel(spec: SubstitutiveSpec, count: int) -> bool:
    """Check ``x[k n + j] == coding(f_j(u[n]))`` for all ``k n + j < count``."""
    desc = kernel(spec)
    k = desc.base
    under = spec.underlying_prefix(count)
    idx = {a: i for i, a in enumerate(desc.alphabet)}
    coded = spec.code(under)
    for pos in range(count):
        n, j = divmod(pos, k)
        if coded[pos] != spec.code((desc.generators[j][idx[under[n]]],))[0]:
            return False
    return desc.is_closed()


def two_factor_closure(phi: Substitution, start: Iterable[Word]) -> FrozenSet[Word]:
    """Least set containing ``start`` and closed under taking 2-factors of ``phi(bc)``."""
    found = set(start)
    frontier = list(found)
    while frontier:
        img = phi(frontier.pop())
        for i in range(len(img) - 1):
            pair = img[i:i + 2]
            if pair not in found:
                found.add(pair)
                frontier.append(pair)
    return frozenset(found)


def min_power_for_length(phi: Substitution, letters: Iterable[str], n: int) -> int:
    """Smallest m with every ``phi^m(a)`` (a in letters) of length at least ``n``."""
    letters = set(letters)
    lengths = {a: 1 for a in phi.alphabet}
    m = 0
    while min((lengths[a] for a in letters), default=n) < n:
        lengths = {a: sum(lengths[b] for b in phi.rules[a]) for a in phi.alphabet}
        m += 1
        if m > 10 * len(phi.alphabet) + 64:
            raise SpecError("some letter does not grow")
    return m


def factors_from_pairs(phi: Substitution, pairs: Iterable[Word], letters: Iterable[str], n: int) -> set:
    """Length-<=n factors of ``phi^m(bc)`` over the given 2-letter words, plus the given letters."""
    pairs = list(pairs)
    out = {EMPTY}
    if n >= 1:
        out |= {(a,) for a in letters}
    if n < 2 or not pairs:
        return out
    support = {a for p in pairs for a in p}
    m = min_power_for_length(phi, support, n)
    cache: Dict[str, Word] = {}
    for a in support:
        cache[a] = phi.iterate((a,), m)
    budget.check(sum(len(cache[a]) for a in support) * len(pairs), "factor enumeration")
    for b, c in pairs:
        out |= factors(cache[b] + cache[c], n)
    return out


def underlying_factor_set(spec: SubstitutiveSpec, n: int) -> set:
    """Factors (over the substitution's alphabet) of the uncoded fixed point."""
    head = spec.underlying_prefix(2)
    pairs = two_factor_closure(spec.phi, [head])
    letters = {a for p in pairs for a in p}
    words = factors_from_pairs(spec.phi, pairs, letters, n)
    if spec.marker is not None:
        words = {w for w in words if spec.marker not in w}
    return words


def factor_set(spec: SubstitutiveSpec, n: int) -> FactorSet:
    if n < 0:
        raise ValueError("factor length bound must be non-negative")
    words = underlying_factor_set(spec, n)
    return FactorSet(n, frozenset(spec.code(w) for w in words))


def complexity(spec: SubstitutiveSpec, n: int) -> List[int]:
    """``p(0..n)``: the number of distinct factors of each length."""
    fs = factor_set(spec, n)
    counts = [0] * (n + 1)
    for w in fs.words:
        counts[len(w)] += 1
    return counts


@dataclass(frozen=True)
class Certified:
    """Proven eventually periodic: ``prefix`` then ``period`` forever."""

    preperiod: int
    period: Word
    prefix: Word = EMPTY

    def __str__(self) -> str:
        return f"Certified(preperiod={self.preperiod}, period={' '.join(self.period)})"


@dataclass(frozen=True)
class PresumedAperiodic:
    """No low complexity seen up to ``n``; ``complexity`` is p(n)."""

    n: int
    complexity: int

    def __str__(self) -> str:
        return f"PresumedAperiodic(p({self.n})={self.complexity})"


PeriodicityResult = Union[Certified, PresumedAperiodic]


def find_eventual_period(seq: Word, max_period: int, max_preperiod: int) -> Optional[Tuple[int, int]]:
    """Smallest period (then smallest preperiod) consistent with the whole finite word."""
    size = len(seq)
    for p in range(1, max_period + 1):
        if p >= size:
            break
        last_bad = -1
        for i in range(size - p - 1, -1, -1):
            if seq[i] != seq[i + p]:
                last_bad = i
                break
        pre = last_bad + 1
        if pre <= max_preperiod:
            return pre, p
    return None


def periodicity_bounded(spec: SubstitutiveSpec, bound: int) -> PeriodicityResult:
    """Morse-Hedlund test: some ``p(n) <= n`` with ``n <= bound`` proves eventual periodicity."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    counts = complexity(spec, bound)
    hit = next((n for n in range(1, bound + 1) if counts[n] <= n), None)
    if hit is None:
        return PresumedAperiodic(bound, counts[bound])
    # preperiod and period are both at most p(hit) <= bound
    seq = spec.prefix(4 * bound * bound + 2 * bound)
    found = find_eventual_period(seq, bound, bound)
    if found is None:
        raise AssertionError("low complexity without a visible period")
    pre, p = found
    return Certified(pre, seq[pre:pre + p], seq[:pre])
