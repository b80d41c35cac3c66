"""Minimal and transitive subsystems of the subshift generated by a substitution.

The subshift of ``phi`` holds the one-sided sequences all of whose factors
occur in some iterate image ``phi^n(a)``.  Its language is computed exactly:
the two-letter words are the largest set E of two-letter iterate factors
such that each member of E occurs in ``phi(de)`` for some ``de`` in E with the
occurrence starting inside ``phi(d)``; longer words are the factors of
``phi^j(bc)`` for ``bc`` in E once every image has length at least ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from .sequences import (Certified, PeriodicityResult, PresumedAperiodic, SubstitutiveSpec,
                        factor_set, factors_from_pairs, fresh_letter, periodicity_bounded,
                        spec_from_tail_words, two_factor_closure)
from .substitution import (Substitution, _classify, classify_letters, idempotent_exponent,
                           power, require_growing)
from .words import EMPTY, FactorSet, Word, least_rotation, primitive_root, show

DEFAULT_BOUND = 24
DEFAULT_DEPTH = 8


def iterate_pairs(phi: Substitution) -> FrozenSet[Word]:
    """Two-letter factors of ``phi^n(a)`` over all letters a and n >= 1."""
    start = set()
    for a in phi.alphabet:
        img = phi.rules[a]
        start |= {img[i:i + 2] for i in range(len(img) - 1)}
    return two_factor_closure(phi, start)


def pair_language(phi: Substitution) -> FrozenSet[Word]:
    """Two-letter words occurring in some point of the subshift."""
    require_growing(phi)
    current = set(iterate_pairs(phi))
    while True:
        supported = set()
        for d, e in current:
            img_d = phi.rules[d]
            img = img_d + phi.rules[e]
            for i in range(len(img_d)):
                supported.add(img[i:i + 2])
        nxt = current & supported
        if nxt == current:
            return frozenset(current)
        current = nxt


def subshift_language(phi: Substitution, n: int, letter: Optional[str] = None) -> FactorSet:
    """Words of length at most ``n`` in the subshift (restricted to letters reachable from ``letter``)."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    if letter is not None:
        phi = restrict_to(phi, letter)
    pairs = pair_language(phi)
    letters = {a for p in pairs for a in p}
    return FactorSet(n, frozenset(factors_from_pairs(phi, pairs, letters, n)))


def restrict_to(phi: Substitution, letter: str) -> Substitution:
    reach = classify_letters(phi).reach_sets[letter]
    return phi.restrict(reach)


@dataclass(frozen=True)
class MinimalSubsystem:
    representative: str
    letters: FrozenSet[str]
    periodicity: PeriodicityResult
    sample: FactorSet
    spec: SubstitutiveSpec

    @property
    def periodic(self) -> bool:
        return isinstance(self.periodicity, Certified)


def minimal_subsystems(phi: Substitution, bound: int = DEFAULT_BOUND, depth: int = DEFAULT_DEPTH,
                       coding: Optional[Dict[str, str]] = None) -> List[MinimalSubsystem]:
    """One entry per equivalence class of minimal letters of the idempotent power."""
    require_growing(phi)
    m = idempotent_exponent(phi)
    psi = power(phi, m)
    cls = _classify(psi)
    out = []
    done = set()
    for b in psi.alphabet:
        if b not in cls.minimal_letters or b in done:
            continue
        members = cls.class_of[b]
        done |= members
        restricted = psi.restrict(members)
        seed = cls.alpha_map[b]
        sub_coding = {a: coding[a] for a in members} if coding else None
        spec = SubstitutiveSpec(restricted, seed, sub_coding)
        out.append(MinimalSubsystem(b, frozenset(members), periodicity_bounded(spec, bound),
                                    factor_set(spec, depth), spec))
    return out


@dataclass(frozen=True)
class CertifiedTransitive:
    witness: str
    exponent: int

    def __str__(self) -> str:
        return f"CertifiedTransitive(witness={self.witness}, tau=phi^{self.exponent})"


@dataclass(frozen=True)
class CertifiedNotTransitive:
    def __str__(self) -> str:
        return "CertifiedNotTransitive"


@dataclass(frozen=True)
class Unknown:
    depth_checked: int

    def __str__(self) -> str:
        return f"Unknown(depth_checked={self.depth_checked})"


TransitivityVerdict = Union[CertifiedTransitive, CertifiedNotTransitive, Unknown]


def transitivity_candidates(phi: Substitution) -> Tuple[int, Substitution, List[str]]:
    m = idempotent_exponent(phi)
    psi = power(phi, m)
    cls = _classify(psi)
    cands = [b for b in psi.alphabet if b in cls.prolongable or b in cls.very_ample]
    return m, psi, cands


def is_transitive(phi: Substitution) -> TransitivityVerdict:
    """Decide transitivity by comparing two-letter languages.

    The subshift is transitive iff it equals the subsystem of the idempotent
    power generated by a letter that is prolongable under that power or very
    ample.  Two such subshifts coincide iff their two-letter languages do,
    since every longer word is a factor of an iterate image of a two-letter
    word, so each candidate is settled exactly.
    """
    require_growing(phi)
    m, psi, cands = transitivity_candidates(phi)
    if not cands:
        return CertifiedNotTransitive()
    target = pair_language(phi)
    for b in cands:
        if pair_language(restrict_to(psi, b)) == target:
            return CertifiedTransitive(b, m)
    return CertifiedNotTransitive()


@dataclass(frozen=True)
class LetterSystem:
    b: str

    def text(self) -> str:
        return f"X({self.b})"


@dataclass(frozen=True)
class GeneratorSequence:
    """A sequence of the form ``a w tau(w) tau^2(w) ...`` (``B1``) or ``a tau^omega(c)`` (``B2``).

    For ``B1``, ``tau(a) = v a w``; for ``B2``, ``pivot = (a, c)``.
    """

    kind: str
    tau_exponent: int
    pivot: Word
    left: Word = EMPTY
    right: Word = EMPTY

    def text(self) -> str:
        if self.kind == "B1":
            return (f"B1(a={self.pivot[0]}, v={show(self.left)}, w={show(self.right)}, "
                    f"tau=phi^{self.tau_exponent})")
        return f"B2(a={self.pivot[0]}, c={self.pivot[1]}, tau=phi^{self.tau_exponent})"


SubsystemDescriptor = Union[LetterSystem, GeneratorSequence]


def _divisors(m: int) -> List[int]:
    return [j for j in range(1, m + 1) if m % j == 0]


def _case_b1(tau: Substitution, a: str, below) -> Optional[Tuple[Word, Word]]:
    img = tau.rules[a]
    if a not in img:
        return None
    cut = len(img) - 1 - img[::-1].index(a)
    right = img[cut + 1:]
    if right and all(below(c, a) for c in right):
        return img[:cut], right
    return None


def transitive_generators(phi: Substitution) -> List[SubsystemDescriptor]:
    """Every letter subsystem plus every B1 and B2 generator candidate.

    Each generator is reported for the smallest power dividing the idempotent
    exponent at which its defining conditions already hold; the generated
    sequence is the same as for the idempotent power.
    """
    require_growing(phi)
    m = idempotent_exponent(phi)
    psi = power(phi, m)
    cls = _classify(psi)
    out: List[SubsystemDescriptor] = [LetterSystem(b) for b in phi.alphabet]
    powers = {j: power(phi, j) for j in _divisors(m)}
    for a in phi.alphabet:
        if _case_b1(psi, a, cls.strictly_below) is None:
            continue
        for j, tau in powers.items():
            split = _case_b1(tau, a, cls.strictly_below)
            if split is not None:
                out.append(GeneratorSequence("B1", j, (a,), split[0], split[1]))
                break
    pairs = pair_language(psi)
    for a in phi.alphabet:
        if a not in cls.backwards_prolongable:
            continue
        for c in phi.alphabet:
            if c not in cls.prolongable or (a, c) not in pairs:
                continue
            j = next(j for j, tau in powers.items() if tau.last(a) == a and tau.first(c) == c)
            out.append(GeneratorSequence("B2", j, (a, c)))
    return out


def generator_spec(d: SubsystemDescriptor, phi: Substitution) -> SubstitutiveSpec:
    """A substitutive presentation of the one-sided generator sequence."""
    if not isinstance(d, GeneratorSequence):
        raise TypeError("only B1/B2 generators have a generator sequence")
    tau = power(phi, d.tau_exponent)
    if d.kind == "B1":
        a = d.pivot[0]
        if tau.rules[a] != d.left + (a,) + d.right or not d.right:
            raise ValueError(f"descriptor does not match the substitution: {d.text()}")
        return spec_from_tail_words(tau, d.right, head=a)
    if d.kind == "B2":
        a, c = d.pivot
        if tau.last(a) != a or tau.first(c) != c:
            raise ValueError(f"descriptor does not match the substitution: {d.text()}")
        # a copy of c that expands to tau(c) minus its first letter
        copy = fresh_letter(tau.rules, c + "^")
        rules = dict(tau.rules)
        rules[copy] = tau.rules[c][1:]
        ext = Substitution(tau.alphabet + (copy,), rules)
        coding = {b: b for b in tau.alphabet}
        coding[copy] = c
        return spec_from_tail_words(ext, (copy,), coding=coding, head=a)
    raise ValueError(f"unknown generator kind {d.kind!r}")


def generator_prefix(d: SubsystemDescriptor, phi: Substitution, n: int) -> Word:
    if n < 0:
        raise ValueError("prefix length must be non-negative")
    return generator_spec(d, phi).prefix(n)


@dataclass(frozen=True)
class CyclicFactors:
    words: Tuple[Word, ...]
    certified: bool

    def __iter__(self):
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)


def primitive_cyclic_factors(spec: SubstitutiveSpec, bound: int = DEFAULT_BOUND) -> CyclicFactors:
    """Primitive words ``u`` with ``u^omega`` in the orbit closure, one per rotation class.

    ``certified`` is false when some minimal subsystem was only presumed aperiodic.
    """
    phi = spec.phi
    reach = classify_letters(phi).reach_sets[spec.seed]
    if spec.marker is not None:
        reach = reach - {spec.marker}
        sub = phi.restrict(reach)
    else:
        sub = phi.restrict(reach)
    coding = {a: spec.coding[a] for a in sub.alphabet} if spec.coding else None
    order = {}
    for a in (coding[b] if coding else b for b in phi.alphabet):
        order.setdefault(a, len(order))
    found = set()
    certified = True
    for entry in minimal_subsystems(sub, bound, 1, coding):
        res = entry.periodicity
        if isinstance(res, Certified):
            found.add(least_rotation(primitive_root(res.period), order))
        else:
            certified = False
    ordered = sorted(found, key=lambda w: (len(w), tuple(order.get(a, 0) for a in w)))
    return CyclicFactors(tuple(ordered), certified)
