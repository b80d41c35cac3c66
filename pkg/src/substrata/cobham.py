"""Common factors of automatic sequences in independent bases.

Four tools live here:

* exact multiplicative independence of two bases;
* bounded solving of ``a k^n + b l^m = c`` and the intersection of
  occurrence sets built on it;
* an analyzer that describes the common factors of a k-automatic and an
  l-automatic sequence as a finite union of languages of eventually periodic
  biinfinite words ``...vvv u www...``;
* a constructor going the other way: given such a union, build a
  k-automatic and an l-automatic sequence whose common factors are exactly
  that union.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from . import budget
from .budget import BudgetExceeded
from .occurrence import (ALL, AllNaturals, GeometricSet, OccurrenceSet, Structured, normalize,
                         occurrence_set)
from .sequences import (Certified, SpecError, SubstitutiveSpec, factor_set, make_spec,
                        periodicity_bounded, two_factor_closure)
from .subsystems import DEFAULT_BOUND, primitive_cyclic_factors
from .substitution import Substitution, power
from .words import (EMPTY, BiWordTriple, FactorSet, Word, biword_factors, least_rotation,
                    primitive_root, sorted_words)

CLUB = "♣"
SPADE = "♠"
DEFAULT_DIOPH_BOUND = 200


class PreconditionError(ValueError):
    """Inputs parse but violate a requirement (dependent bases, wrong shape)."""


# ----------------------------------------------------------- independence

def _prime_exponents(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def multiplicatively_independent(k: int, l: int) -> bool:
    """True iff no positive powers of ``k`` and ``l`` coincide."""
    if k < 2 or l < 2:
        raise ValueError("bases must be at least 2")
    ek, el = _prime_exponents(k), _prime_exponents(l)
    if set(ek) != set(el):
        return True
    p0 = next(iter(ek))
    ratio = Fraction(ek[p0], el[p0])
    return any(Fraction(ek[p], el[p]) != ratio for p in ek)


def _require_independent(k: int, l: int) -> None:
    if not multiplicatively_independent(k, l):
        raise PreconditionError(f"bases {k} and {l} are powers of a common integer")


# ---------------------------------------------------- exponential equations

@dataclass(frozen=True)
class DiophantineSolutions:
    """Solutions ``(n, m)`` in ``[0, bound]^2``.

    ``complete`` is true when a side argument rules out solutions beyond the
    bound; otherwise the list is exhaustive only inside the box.
    """

    solutions: Tuple[Tuple[int, int], ...]
    bound: int
    complete: bool

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)


def _log_exact(value: Fraction, base: int, cap: int) -> Optional[int]:
    """``m <= cap`` with ``base**m == value``, else None."""
    if value.denominator != 1 or value < 1:
        return None
    target = value.numerator
    m, acc = 0, 1
    while acc < target and m < cap:
        acc *= base
        m += 1
    return m if acc == target else None


def _homogeneous(a: Fraction, b: Fraction, k: int, l: int) -> Optional[Tuple[int, int]]:
    """The unique ``(n, m)`` with ``a k^n = -b l^m`` (if any), via prime valuations."""
    if (a > 0) == (-b > 0):
        ratio = -b / a
    else:
        return None
    # k^n / l^m = ratio: match exponents prime by prime
    ek, el = _prime_exponents(k), _prime_exponents(l)
    primes = sorted(set(ek) | set(el) | set(_prime_exponents(ratio.numerator))
                    | set(_prime_exponents(ratio.denominator)))
    def val(x: int, p: int) -> int:
        count = 0
        while x and x % p == 0:
            x //= p
            count += 1
        return count
    rows = [(ek.get(p, 0), -el.get(p, 0), val(ratio.numerator, p) - val(ratio.denominator, p))
            for p in primes]
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            (a1, b1, c1), (a2, b2, c2) = rows[i], rows[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            n = Fraction(c1 * b2 - c2 * b1, det)
            m = Fraction(a1 * c2 - a2 * c1, det)
            if n.denominator != 1 or m.denominator != 1 or n < 0 or m < 0:
                return None
            n, m = int(n), int(m)
            if all(r[0] * n + r[1] * m == r[2] for r in rows):
                return n, m
            return None
    return None


def exp_dioph_solutions(a, b, c, k: int, l: int, bound: int = DEFAULT_DIOPH_BOUND) -> DiophantineSolutions:
    """All ``(n, m)`` in ``[0, bound]^2`` with ``a k^n + b l^m = c``, in exact rationals."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a == 0 and b == 0:
        if c == 0:
            raise ValueError("all coefficients are zero")
        return DiophantineSolutions((), bound, True)
    if a == 0 or b == 0:
        raise ValueError("one exponential term vanishes; intersect with a constant set instead")
    if bound < 1:
        raise ValueError("bound must be at least 1")
    _require_independent(k, l)
    if c == 0:
        hit = _homogeneous(a, b, k, l)
        sols = () if hit is None or max(hit) > bound else (hit,)
        return DiophantineSolutions(sols, bound, True)
    same_sign = (a > 0) == (b > 0)
    found = []
    kn = 1
    for n in range(bound + 1):
        left = a * kn
        if same_sign and abs(left) > abs(c):
            break
        m = _log_exact((c - left) / b, l, bound)
        if m is not None:
            found.append((n, m))
        kn *= k
    complete = False
    if same_sign:
        # both terms share a sign, so each is at most |c| in size
        n_top = _log_floor(abs(c) / abs(a), k)
        m_top = _log_floor(abs(c) / abs(b), l)
        complete = n_top <= bound and m_top <= bound
    return DiophantineSolutions(tuple(found), bound, complete)


def _log_floor(value: Fraction, base: int) -> int:
    """Largest ``e`` with ``base**e <= value`` (-1 when ``value < 1``)."""
    e, acc = -1, 1
    while acc <= value:
        acc *= base
        e += 1
    return e


# ------------------------------------------------- occurrence intersection

@dataclass(frozen=True)
class Intersection:
    value: OccurrenceSet
    complete: bool


def intersect_occurrence_sets(sx: OccurrenceSet, kx: int, sy: OccurrenceSet, ly: int,
                              bound: int = DEFAULT_DIOPH_BOUND) -> Intersection:
    """Intersect an occurrence set in base ``kx`` with one in base ``ly``."""
    if sx is ALL or isinstance(sx, AllNaturals):
        return Intersection(sy, True)
    if sy is ALL or isinstance(sy, AllNaturals):
        return Intersection(sx, True)
    values = set(sx.finite_part) & set(sy.finite_part)
    values |= {v for v in sx.finite_part if any(g.contains(v) for g in sy.progressions)}
    values |= {v for v in sy.finite_part if any(g.contains(v) for g in sx.progressions)}
    complete = True
    if sx.progressions and sy.progressions:
        _require_independent(kx, ly)
    for g in sx.progressions:
        for h in sy.progressions:
            sols = exp_dioph_solutions(g.a, -h.a, h.b - g.b, g.ratio, h.ratio, bound)
            complete = complete and sols.complete
            values |= {g.term(n) for n, _ in sols}
    return Intersection(normalize(values, ()), complete)


# ------------------------------------------------------------ common factors

def common_factors_upto(x: SubstitutiveSpec, y: SubstitutiveSpec, n: int) -> FactorSet:
    if n < 0:
        raise ValueError("factor length bound must be non-negative")
    return FactorSet(n, factor_set(x, n).words & factor_set(y, n).words)


def _tails(t: BiWordTriple) -> int:
    return bool(t.v) + bool(t.w)


def canonical_triple(t: BiWordTriple) -> BiWordTriple:
    """A representative with primitive tails and the shortest middle.

    A middle letter that continues a tail's period is moved into the tail;
    periodic words become ``(ε, ε, least rotation)``.
    """
    v = primitive_root(t.v) if t.v else EMPTY
    w = primitive_root(t.w) if t.w else EMPTY
    u = t.u
    while u and v and u[0] == v[0]:
        v, u = v[1:] + v[:1], u[1:]
    while u and w and u[-1] == w[-1]:
        w, u = w[-1:] + w[:-1], u[:-1]
    if not u and (not v or not w or v == w):
        tail = v or w
        if tail:
            return BiWordTriple(EMPTY, EMPTY, least_rotation(tail))
    return BiWordTriple(v, u, w)


def _windows(t: BiWordTriple, n: int) -> set:
    """Length-``n`` factors of the triple's word (the whole word when shorter)."""
    body = t.expand(n)
    if len(body) <= n:
        return {body}
    return {body[i:i + n] for i in range(len(body) - n + 1)}


def _inside(t: BiWordTriple, words: FrozenSet[Word], n: int) -> bool:
    """``L(t)`` up to length ``n`` inside the factor-closed set ``words``."""
    return all(x in words for x in _windows(t, n))


def _size(t: BiWordTriple) -> int:
    return len(t.v) + len(t.u) + len(t.w)


def triple_contained(a: BiWordTriple, b: BiWordTriple) -> bool:
    """``L(a) ⊆ L(b)``, compared on factors long enough to span both words' irregular parts."""
    depth = 2 * (_size(a) + _size(b)) + 2
    if not a.v and not a.w:
        depth = max(len(a.u), 1)
    body = b.expand(depth)
    return all(x in _factors_of(body, len(x)) for x in _windows(a, depth))


def _factors_of(body: Word, n: int) -> set:
    return {body[i:i + n] for i in range(len(body) - n + 1)}


def _longest_tail_prefix(t: Word, p: Word) -> int:
    """Length of the longest prefix of ``t`` that is a suffix of some ``p^N``."""
    if not p:
        return 0
    for size in range(len(t), 0, -1):
        reps = -(-size // len(p))
        if t[:size] == (p * reps)[len(p) * reps - size:]:
            return size
    return 0


def _longest_head_suffix(t: Word, q: Word) -> int:
    """Length of the longest suffix of ``t`` that is a prefix of ``q^N``."""
    if not q:
        return 0
    for size in range(len(t), 0, -1):
        reps = -(-size // len(q))
        if t[len(t) - size:] == (q * reps)[:size]:
            return size
    return 0


def _split(t: Word, p: Word, q: Word, left_first: bool) -> BiWordTriple:
    if left_first:
        s = _longest_tail_prefix(t, p)
        rest = t[s:]
        r = _longest_head_suffix(rest, q)
        return BiWordTriple(p, rest[:len(rest) - r], q)
    r = _longest_head_suffix(t, q)
    rest = t[:len(t) - r]
    s = _longest_tail_prefix(rest, p)
    return BiWordTriple(p, rest[s:], q)


def _maximal_words(words: FrozenSet[Word], depth: int, letters: Iterable[str]) -> List[Word]:
    """Words of length ``depth`` plus shorter words with no one-letter extension in ``words``."""
    letters = sorted(set(letters))
    out = []
    for t in words:
        if len(t) == depth:
            out.append(t)
        elif not any(t + (a,) in words or (a,) + t in words for a in letters):
            out.append(t)
    return sorted_words(out)


# ----------------------------------------------------- special-point tails

def special_points(spec: SubstitutiveSpec, bound: int = DEFAULT_BOUND,
                   max_image: int = 4096) -> List[BiWordTriple]:
    """Eventually periodic two-sided limit points ``ψ^ω(c) . ψ^ω(d)`` of the fixed point.

    ``(c, d)`` runs over 2-factors that return to themselves under
    ``(c, d) -> (last of φ(c), first of φ(d))`` and ψ is the matching power.
    Both halves are proven eventually periodic or the point is skipped.
    """
    phi = spec.phi
    head = spec.underlying_prefix(2)
    if len(head) < 2:
        return []
    pairs = two_factor_closure(phi, [head])
    if spec.marker is not None:
        pairs = frozenset(p for p in pairs if spec.marker not in p)

    def step(cd):
        return phi.last(cd[0]), phi.first(cd[1])

    cycles: Dict[Tuple[str, str], int] = {}
    for cd in pairs:
        seen = []
        cur = cd
        while cur not in seen:
            seen.append(cur)
            cur = step(cur)
        cycle = seen[seen.index(cur):]
        for member in cycle:
            cycles[member] = len(cycle)
    out = set()
    for (c, d), j in sorted(cycles.items()):
        longest = max(len(img) for img in phi.rules.values())
        if longest ** j > max_image:
            continue
        psi = power(phi, j)
        rev = Substitution(psi.alphabet, {a: tuple(reversed(psi.rules[a])) for a in psi.alphabet})
        try:
            left = periodicity_bounded(SubstitutiveSpec(rev, c, spec.coding), bound)
            right = periodicity_bounded(SubstitutiveSpec(psi, d, spec.coding), bound)
        except (SpecError, AssertionError, BudgetExceeded):
            continue
        if not isinstance(left, Certified) or not isinstance(right, Certified):
            continue
        middle = tuple(reversed(left.prefix)) + right.prefix
        out.add(canonical_triple(BiWordTriple(tuple(reversed(left.period)), middle, right.period)))
    return sorted(out, key=lambda t: (t.v, t.u, t.w))


def _occurrence_certificate(spec: SubstitutiveSpec, t: BiWordTriple) -> bool:
    """One-tail triple whose pumped words all occur, decided by an exact occurrence set."""
    try:
        if t.v and not t.w:
            return occurrence_set(spec, EMPTY, t.v, t.u) is ALL
        if t.w and not t.v:
            return occurrence_set(spec, t.u, t.w, EMPTY) is ALL
    except (SpecError, BudgetExceeded, ValueError):
        return False
    return False


# ---------------------------------------------------------------- analyzer

@dataclass(frozen=True)
class CoverCertified:
    depth: int

    def __str__(self) -> str:
        return f"Certified{{depth={self.depth}}}"


@dataclass(frozen=True)
class CoverConjectured:
    depth: int
    verified_to: int

    def __str__(self) -> str:
        return f"Conjectured{{depth={self.depth}, verified_to={self.verified_to}}}"


@dataclass(frozen=True)
class UnionOfTriples:
    triples: Tuple[BiWordTriple, ...]
    certification: Union[CoverCertified, CoverConjectured]

    @property
    def certified(self) -> bool:
        return isinstance(self.certification, CoverCertified)

    def language(self, n: int) -> FrozenSet[Word]:
        out = set()
        for t in self.triples:
            out |= biword_factors(t, n).words
        return frozenset(out)


@dataclass(frozen=True)
class Infinite:
    triple: BiWordTriple


@dataclass(frozen=True)
class Finite:
    words: Tuple[Word, ...]


@dataclass(frozen=True)
class Undecided:
    triple: BiWordTriple


@dataclass(frozen=True)
class SpecialSet:
    """Words ``v' u^n v w^m v''``; here ``v'`` and ``v''`` are always empty
    because the tails are stored already aligned."""

    v_left: Word
    u: Word
    v: Word
    w: Word
    v_right: Word
    resolution: Union[Infinite, Finite, Undecided]
    certificate: Optional[str]


@dataclass(frozen=True)
class AnalysisReport:
    cyclic_common: Tuple[Word, ...]
    ell: int
    special_sets: Tuple[SpecialSet, ...]
    result: UnionOfTriples
    longest_middle: int
    notes: Tuple[str, ...] = ()


def _require_automatic(spec: SubstitutiveSpec, name: str) -> int:
    k = spec.phi.constant_length()
    if k is None or k < 2:
        raise PreconditionError(f"{name} is not generated by a constant-length substitution")
    if spec.marker is not None:
        raise PreconditionError(f"{name} carries a marker letter")
    return k


def _preference(t: BiWordTriple):
    # fewer tails first, a right tail before a left one, then shorter, then by letters
    return (_tails(t), bool(t.v), _size(t), t.v, t.u, t.w)


def _display_order(t: BiWordTriple):
    return (-_tails(t), t.v, t.u, t.w)


def analyze_common_factors(x: SubstitutiveSpec, y: SubstitutiveSpec, depth: int,
                           bound: int = DEFAULT_BOUND) -> AnalysisReport:
    """Describe the common factors of ``x`` and ``y`` as a union of biinfinite-word languages."""
    kx = _require_automatic(x, "x")
    ly = _require_automatic(y, "y")
    _require_independent(kx, ly)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    notes: List[str] = []

    cx, cy = primitive_cyclic_factors(x, bound), primitive_cyclic_factors(y, bound)
    cyclic = sorted({least_rotation(u) for u in cx} & {least_rotation(u) for u in cy},
                    key=lambda u: (len(u), u))
    cyclic_certified = cx.certified and cy.certified
    if not cyclic_certified:
        notes.append("some minimal subsystem was only presumed aperiodic")
    ell = max((len(u) for u in cyclic), default=0)

    near = common_factors_upto(x, y, depth)
    far = common_factors_upto(x, y, 2 * depth)
    letters = {a for t in near.words for a in t}

    # candidate triples from the longest common factors
    options = [EMPTY] + list(cyclic)
    candidates = set()
    for t in _maximal_words(near.words, depth, letters):
        for p in options:
            for q in options:
                for left_first in (True, False):
                    candidates.add(canonical_triple(_split(t, p, q, left_first)))
    infinite = sorted((t for t in candidates if _tails(t) and _inside(t, far.words, 2 * depth)),
                      key=_preference)

    kept: List[BiWordTriple] = []
    for i, a in enumerate(infinite):
        redundant = False
        for j, b in enumerate(infinite):
            if i == j or not triple_contained(a, b):
                continue
            # drop a when b is strictly larger, or equal and preferred
            if not triple_contained(b, a) or j < i:
                redundant = True
                break
        if not redundant:
            kept.append(a)

    covered = set()
    for t in kept:
        covered |= biword_factors(t, depth).words
    uncovered = frozenset(near.words - covered)
    finite = [BiWordTriple(EMPTY, t, EMPTY) for t in _maximal_words(uncovered, depth + 1, letters)]
    triples = sorted(kept + finite, key=_display_order)

    xs_points = special_points(x, bound)
    ys_points = special_points(y, bound)
    specials: List[SpecialSet] = []
    all_certified = True
    for t in triples:
        if not _tails(t):
            cert: Optional[str] = "membership"
            resolution: Union[Infinite, Finite, Undecided] = Finite((t.u,))
        else:
            cert = _tail_certificate(x, xs_points, t)
            cert_y = _tail_certificate(y, ys_points, t)
            cert = cert if cert and cert_y else None
            resolution = Infinite(t) if cert else Undecided(t)
        all_certified = all_certified and cert is not None
        specials.append(SpecialSet(EMPTY, t.v, t.u, t.w, EMPTY, resolution, cert))

    union_near = set()
    union_far = set()
    for t in triples:
        union_near |= biword_factors(t, depth).words
        union_far |= biword_factors(t, 2 * depth).words
    near_ok = union_near == set(near.words)
    far_ok = union_far == set(far.words)
    if not near_ok:
        notes.append(f"cover differs from the common factors at length {depth}")
    if not far_ok:
        notes.append(f"cover differs from the common factors at length {2 * depth}")
    if all_certified and cyclic_certified and near_ok and far_ok:
        certification: Union[CoverCertified, CoverConjectured] = CoverCertified(depth)
    else:
        verified = 2 * depth if far_ok else (depth if near_ok else 0)
        certification = CoverConjectured(depth, verified)
    result = UnionOfTriples(tuple(triples), certification)
    longest_middle = max((len(t.u) for t in triples), default=0)
    return AnalysisReport(tuple(cyclic), ell, tuple(specials), result, longest_middle, tuple(notes))


def _tail_certificate(spec: SubstitutiveSpec, points: Sequence[BiWordTriple], t: BiWordTriple) -> Optional[str]:
    if any(triple_contained(t, s) for s in points):
        return "special-point"
    if _tails(t) == 1 and _occurrence_certificate(spec, t):
        return "occurrence"
    return None


# ------------------------------------------------------------ witnesses

@dataclass
class Dfao:
    """Deterministic automaton with output reading base-``k`` digits, most significant first."""

    k: int
    start: object
    delta: Dict[Tuple[object, int], object]
    output: Dict[object, str]

    def states(self) -> List[object]:
        order = [self.start]
        seen = {self.start}
        i = 0
        while i < len(order):
            q = order[i]
            i += 1
            for e in range(self.k):
                r = self.delta[(q, e)]
                if r not in seen:
                    seen.add(r)
                    order.append(r)
        return order

    def run(self, n: int) -> str:
        digits = []
        while n:
            n, e = divmod(n, self.k)
            digits.append(e)
        q = self.start
        for e in reversed(digits):
            q = self.delta[(q, e)]
        return self.output[q]

    def minimized(self) -> "Dfao":
        """Moore partition refinement on the reachable part."""
        states = self.states()
        block = {q: self.output[q] for q in states}
        while True:
            sig = {q: (block[q],) + tuple(block[self.delta[(q, e)]] for e in range(self.k)) for q in states}
            ids: Dict[tuple, int] = {}
            new = {q: ids.setdefault(sig[q], len(ids)) for q in states}
            if len(ids) == len(set(block.values())):
                block = new
                break
            block = new
        delta = {(block[q], e): block[self.delta[(q, e)]] for q in states for e in range(self.k)}
        output = {block[q]: self.output[q] for q in states}
        return Dfao(self.k, block[self.start], delta, output)

    def to_spec(self) -> SubstitutiveSpec:
        """The uniform substitution ``q -> δ(q,0)...δ(q,k-1)`` with the output coding."""
        if self.delta[(self.start, 0)] != self.start:
            raise ValueError("the start state must be fixed by the digit 0")
        order = self.states()
        name = {q: f"q{i}" for i, q in enumerate(order)}
        rules = {name[q]: tuple(name[self.delta[(q, e)]] for e in range(self.k)) for q in order}
        coding = {name[q]: self.output[q] for q in order}
        phi = Substitution(tuple(name[q] for q in order), rules)
        return make_spec(phi, name[self.start], coding)


def _raise_base(k: int, least: int) -> int:
    power_ = k
    while power_ < least:
        power_ *= k
    return power_


@dataclass(frozen=True)
class _Layout:
    """The triples arranged for the position formula."""

    k: int
    filler: str
    left: Tuple[Word, ...]    # v_i, index 0 unused
    middle: Tuple[Word, ...]  # u_i
    right: Tuple[Word, ...]   # w_i
    modulus: int
    middle_cap: int

    @property
    def count(self) -> int:
        return len(self.left) - 1

    def head(self, i: int, r: int) -> str:
        """Letter ``r >= 0`` of ``u_i w_i w_i ...`` (filler after ``u_i`` when ``w_i`` is empty)."""
        u, w = self.middle[i], self.right[i]
        if r < len(u):
            return u[r]
        return w[(r - len(u)) % len(w)] if w else self.filler

    def tail(self, i: int, s: int) -> str:
        """Letter ``s >= 1`` places left of the middle: ``... v_i v_i`` (filler when empty)."""
        v = self.left[i]
        return v[-s % len(v)] if v else self.filler


def _layout(triples: Sequence[BiWordTriple], k: int, filler: str) -> _Layout:
    tails = [len(t.v) for t in triples if t.v] + [len(t.w) for t in triples if t.w]
    modulus = lcm(*tails) if tails else 1
    return _Layout(k, filler, (EMPTY,) + tuple(t.v for t in triples),
                   (EMPTY,) + tuple(t.u for t in triples), (EMPTY,) + tuple(t.w for t in triples),
                   modulus, max(len(t.u) for t in triples))


def witness_letter(layout: _Layout, n: int) -> str:
    """Direct position formula: around ``i k^t`` sit ``k^(t-1)`` letters of each side of triple i."""
    k, p = layout.k, layout.count
    if n < k:
        return layout.filler
    t = 0
    while k ** (t + 1) <= n:
        t += 1
    kt, kt1 = k ** t, k ** (t - 1)
    if n >= k * kt - kt:
        return layout.tail(1, k * kt - n)
    for i in range(1, p + 1):
        if i * kt <= n < i * kt + kt1:
            return layout.head(i, n - i * kt)
        if i >= 2 and i * kt - kt1 <= n < i * kt:
            return layout.tail(i, i * kt - n)
    return layout.filler


def _witness_automaton(layout: _Layout) -> Dfao:
    k, p = layout.k, layout.count
    mod, cap = layout.modulus, layout.middle_cap
    start = ("start",)
    delta: Dict[Tuple[object, int], object] = {}
    output: Dict[object, str] = {}
    todo = [start]
    seen = {start}

    def letter(q) -> str:
        if q[0] != "two":
            return layout.filler
        _, d1, d2, rmod, rcap, kp = q
        if d2 == 0 and 1 <= d1 <= p:
            if rcap < len(layout.middle[d1]):
                return layout.middle[d1][rcap]
            w = layout.right[d1]
            return w[(rmod - len(layout.middle[d1])) % len(w)] if w else layout.filler
        if d2 == k - 1 and 1 <= d1 and d1 + 1 <= p:
            return layout.tail(d1 + 1, (kp - rmod) % mod or mod)
        if d1 == k - 1:
            return layout.tail(1, (kp * k - d2 * kp - rmod) % mod or mod)
        return layout.filler

    def move(q, e):
        if q[0] == "start":
            return start if e == 0 else ("one", e)
        if q[0] == "one":
            return ("two", q[1], e, 0, 0, 1 % mod)
        _, d1, d2, rmod, rcap, kp = q
        return ("two", d1, d2, (rmod * k + e) % mod, min(rcap * k + e, cap), kp * k % mod)

    while todo:
        q = todo.pop()
        output[q] = letter(q)
        for e in range(k):
            r = move(q, e)
            delta[(q, e)] = r
            if r not in seen:
                seen.add(r)
                todo.append(r)
        budget.check(len(seen), "witness automaton")
    return Dfao(k, start, delta, output)


@dataclass(frozen=True)
class WitnessPair:
    x_spec: SubstitutiveSpec
    y_spec: SubstitutiveSpec
    k: int
    l: int
    params: Dict[str, int]
    triples: Tuple[BiWordTriple, ...]
    x_layout: _Layout = field(repr=False)
    y_layout: _Layout = field(repr=False)


def _build_side(triples, base: int, filler: str, check_len: int):
    layout = _layout(triples, base, filler)
    auto = _witness_automaton(layout).minimized()
    spec = auto.to_spec()
    head = spec.prefix(check_len)
    for n, a in enumerate(head):
        if a != witness_letter(layout, n):
            raise AssertionError(f"automaton and position formula disagree at {n}")
    return layout, spec


def construct_witnesses(triples: Sequence[BiWordTriple], k: int, l: int,
                        check_len: Optional[int] = None) -> WitnessPair:
    """Build x (base k, filler ♣) and y (base l, filler ♠) whose common factors are the union.

    Bases below ``len(triples) + 2`` are replaced by their least power at or above it.
    """
    triples = tuple(triples)
    if not triples:
        raise PreconditionError("need at least one triple")
    for t in triples:
        if CLUB in t.v + t.u + t.w or SPADE in t.v + t.u + t.w:
            raise PreconditionError("triples may not use the filler letters")
    if k < 2 or l < 2:
        raise PreconditionError("bases must be at least 2")
    _require_independent(k, l)
    need = len(triples) + 2
    k2, l2 = _raise_base(k, need), _raise_base(l, need)
    x_layout, x_spec = _build_side(triples, k2, CLUB, check_len or min(k2 ** 6, 200_000))
    y_layout, y_spec = _build_side(triples, l2, SPADE, check_len or min(l2 ** 6, 200_000))
    left = [len(t.v) for t in triples if t.v]
    params = {
        "modulus": x_layout.modulus,
        "left_modulus": lcm(*left) if left else 1,
        "lead_digits": 2,
        "middle_cap": x_layout.middle_cap,
    }
    return WitnessPair(x_spec, y_spec, k2, l2, params, triples, x_layout, y_layout)


@dataclass(frozen=True)
class StratumCheck:
    length: int
    match: bool
    missing: Tuple[Word, ...] = ()
    extra: Tuple[Word, ...] = ()

    def status(self) -> str:
        return "MATCH" if self.match else "MISMATCH"


def verify_witness(x: SubstitutiveSpec, y: SubstitutiveSpec, triples: Sequence[BiWordTriple],
                   depth: int) -> List[StratumCheck]:
    """Compare common factors with the union of triple languages, one length at a time."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    actual = common_factors_upto(x, y, depth).words
    expected = set()
    for t in triples:
        expected |= biword_factors(t, depth).words
    out = []
    for n in range(depth + 1):
        have = {w for w in actual if len(w) == n}
        want = {w for w in expected if len(w) == n}
        out.append(StratumCheck(n, have == want, tuple(sorted_words(want - have)),
                                tuple(sorted_words(have - want))))
    return out
