"""Closed forms for ``S = {n >= 0 : v u^n w is a factor of x}`` with x automatic.

Pipeline:

1. split ``n`` by a residue mod ``j`` so that the padded end words fit in one
   block of length ``L = j |u|``;
2. for each block alignment, read the sequence in blocks of length L; this
   block sequence is generated by a constant-length substitution on windows
   of the underlying fixed point;
3. with ``T`` the window letters whose block is ``u^j`` (and ``C``, ``D`` those
   whose block ends with the left word / starts with the right word), count
   the T-runs between a C letter and a D letter;
4. run lengths obey ``S(c, d, T) = U (K S(c', d', T') + q(c', d')) U E`` for a
   suitable power ``K = k^P`` of the base, and once ``T`` is stable under
   preimages every element is ``r K^t + q (K^t - 1)/(K - 1)`` for a small
   residue ``r < K^2 - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from . import budget
from .sequences import SpecError, SubstitutiveSpec, min_power_for_length, two_factor_closure
from .substitution import Substitution
from .words import Word


# ---------------------------------------------------------------- set types

def _frac_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GeometricSet:
    """``{a * base^(m n) + b : n >= 0}`` with exact rationals."""

    a: Fraction
    b: Fraction
    base: int
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.base < 2 or self.m < 1:
            raise ValueError("progression needs base >= 2 and m >= 1")
        if self.a < 0:
            raise ValueError("progression coefficient must be non-negative")
        if (self.a + self.b).denominator != 1 or ((self.ratio - 1) * self.a).denominator != 1:
            raise ValueError(f"non-integral progression {self.text()}")
        if self.a + self.b < 0:
            raise ValueError(f"progression starts below zero: {self.text()}")

    @property
    def ratio(self) -> int:
        return self.base ** self.m

    def term(self, n: int) -> int:
        value = self.a * self.ratio ** n + self.b
        return int(value)

    def elements(self, n_max: int) -> List[int]:
        out = []
        n = 0
        while True:
            t = self.term(n)
            if t > n_max:
                return out
            out.append(t)
            if self.a == 0:
                return out
            n += 1

    def contains(self, value: int) -> bool:
        if self.a == 0:
            return value == self.b
        x = (value - self.b) / self.a
        if x < 1:
            return False
        while x > 1 and x.denominator == 1 and x % self.ratio == 0:
            x //= self.ratio
        return x == 1

    def scaled(self, factor: int, shift) -> "GeometricSet":
        """``{factor * s + shift : s in self}``."""
        return GeometricSet(self.a * factor, self.b * factor + shift, self.base, self.m)

    def subset_of(self, other: "GeometricSet") -> bool:
        if self.base != other.base or self.b != other.b or self.m % other.m:
            return False
        if other.a == 0:
            return self.a == 0
        return other.contains(int(self.a + self.b)) and other.contains(self.term(1))

    def text(self) -> str:
        sign = "-" if self.b < 0 else "+"
        return f"{_frac_text(self.a)}*{self.base}^({self.m}*n){sign}{_frac_text(abs(self.b))}"


class AllNaturals:
    """Every ``n >= 0``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "AllNaturals()"

    def text(self) -> str:
        return "ALL"

    def __contains__(self, n: int) -> bool:
        return n >= 0


ALL = AllNaturals()


@dataclass(frozen=True)
class Structured:
    finite_part: FrozenSet[int] = frozenset()
    progressions: Tuple[GeometricSet, ...] = ()

    def __contains__(self, n: int) -> bool:
        return n in self.finite_part or any(p.contains(n) for p in self.progressions)

    @property
    def is_finite(self) -> bool:
        return not self.progressions

    def text(self) -> str:
        parts = []
        if self.finite_part or not self.progressions:
            parts.append("{" + ",".join(str(n) for n in sorted(self.finite_part)) + "}")
        parts += ["{" + p.text() + " : n>=0}" for p in self.progressions]
        return " U ".join(parts)


OccurrenceSet = Union[AllNaturals, Structured]
EMPTY_SET = Structured()


def normalize(finite: Iterable[int], progressions: Iterable[GeometricSet]) -> Structured:
    """Fold constant progressions into the finite part and drop redundant pieces."""
    fin = set(finite)
    progs = []
    for p in progressions:
        if p.a == 0:
            fin.add(int(p.b))
        elif p not in progs:
            progs.append(p)
    # pull a finite element in front of a progression when it is the previous term
    changed = True
    while changed:
        changed = False
        for i, p in enumerate(progs):
            prev = p.a / p.ratio + p.b
            if prev.denominator == 1 and int(prev) in fin:
                try:
                    q = GeometricSet(p.a / p.ratio, p.b, p.base, p.m)
                except ValueError:
                    continue
                progs[i] = q
                changed = True
    keep = [p for i, p in enumerate(progs)
            if not any(j != i and p.subset_of(o) and not (o.subset_of(p) and j > i)
                       for j, o in enumerate(progs))]
    fin = {n for n in fin if not any(p.contains(n) for p in keep)}
    keep.sort(key=lambda p: (p.ratio, p.a + p.b, p.a, p.b))
    return Structured(frozenset(fin), tuple(keep))


def union(*sets: OccurrenceSet) -> OccurrenceSet:
    if any(s is ALL for s in sets):
        return ALL
    return normalize((n for s in sets for n in s.finite_part),
                     (p for s in sets for p in s.progressions))


def affine(s: OccurrenceSet, factor: int, shift: int) -> OccurrenceSet:
    """``{factor * n + shift : n in s}`` (ALL stays ALL only for the identity map)."""
    if s is ALL:
        if (factor, shift) == (1, 0):
            return ALL
        raise ValueError("cannot rescale ALL into a structured set")
    return normalize((factor * n + shift for n in s.finite_part),
                     (p.scaled(factor, shift) for p in s.progressions))


def evaluate(s: OccurrenceSet, n_max: int) -> Set[int]:
    """Elements of ``s`` in ``[0, n_max]``."""
    if n_max < 0:
        return set()
    if s is ALL:
        return set(range(n_max + 1))
    out = {n for n in s.finite_part if n <= n_max}
    for p in s.progressions:
        out.update(p.elements(n_max))
    return out


def parse_occurrence_set(text: str) -> OccurrenceSet:
    """Inverse of ``.text()`` for both variants."""
    import re
    s = text.strip()
    if s == "ALL":
        return ALL
    prog = re.compile(r"^\{\s*([0-9/]+)\*(\d+)\^\((\d+)\*n\)\s*([+-])\s*([0-9/]+)\s*:\s*n>=0\s*\}$")
    finite: Set[int] = set()
    progs = []
    for piece in s.split(" U "):
        piece = piece.strip()
        m = prog.match(piece)
        if m:
            b = Fraction(m.group(5)) * (-1 if m.group(4) == "-" else 1)
            progs.append(GeometricSet(Fraction(m.group(1)), b, int(m.group(2)), int(m.group(3))))
            continue
        if not (piece.startswith("{") and piece.endswith("}")):
            raise ValueError(f"bad occurrence set component: {piece!r}")
        body = piece[1:-1].strip()
        if body:
            finite |= {int(t) for t in body.split(",")}
    return normalize(finite, progs)


# ------------------------------------------------------------ pure systems

class PureSystem:
    """Constant-length substitution on integer letters with fixed point from letter 0."""

    def __init__(self, images: Sequence[Tuple[int, ...]], k: int, labels: Sequence):
        self.images = [tuple(img) for img in images]
        self.k = k
        self.labels = list(labels)
        self.size = len(self.images)
        self._powers: Dict[int, List[Tuple[int, ...]]] = {1: self.images}
        if any(len(img) != k for img in self.images):
            raise ValueError("pure system needs constant length")
        if self.images[0][0] != 0:
            raise ValueError("letter 0 must be prolongable")

    @classmethod
    def from_substitution(cls, phi: Substitution, seed: str) -> "PureSystem":
        k = phi.constant_length()
        if k is None or k < 2:
            raise SpecError("constant-length substitution required")
        order = [seed] + [a for a in phi.alphabet if a != seed]
        idx = {a: i for i, a in enumerate(order)}
        return cls([tuple(idx[b] for b in phi.rules[a]) for a in order], k, order)

    @classmethod
    def windows(cls, spec: SubstitutiveSpec, block: int) -> "PureSystem":
        """Letters are the windows ``y[block n : block n + 2 block]`` of the underlying fixed point."""
        phi = spec.phi
        k = phi.constant_length()
        width = 2 * block
        first = spec.underlying_prefix(width)
        labels = [first]
        idx = {first: 0}
        images = []
        i = 0
        while i < len(labels):
            big = phi(labels[i])
            img = []
            for r in range(k):
                win = big[block * r: block * r + width]
                if win not in idx:
                    idx[win] = len(labels)
                    labels.append(win)
                img.append(idx[win])
            images.append(tuple(img))
            i += 1
            budget.check(len(labels) * k, "window alphabet")
        return cls(images, k, labels)

    def power(self, p: int) -> List[Tuple[int, ...]]:
        if p not in self._powers:
            budget.check(self.size * self.k ** p, "substitution power")
            prev = self.power(p - 1)
            base = self.images
            self._powers[p] = [tuple(c for b in prev[a] for c in base[b]) for a in range(self.size)]
        return self._powers[p]

    def preimage(self, taboo: FrozenSet[int], p: int = 1) -> FrozenSet[int]:
        imgs = self.power(p)
        return frozenset(a for a in range(self.size) if all(b in taboo for b in imgs[a]))

    def preimage_orbit(self, taboo: FrozenSet[int]) -> Tuple[List[FrozenSet[int]], int]:
        """Iterates ``F^n(T)`` of the preimage map until a repeat: (sequence, first index of the cycle)."""
        seq = [taboo]
        seen = {taboo: 0}
        while True:
            nxt = self.preimage(seq[-1])
            if nxt in seen:
                return seq, seen[nxt]
            seen[nxt] = len(seq)
            seq.append(nxt)

    def pairs(self) -> FrozenSet[Tuple[int, int]]:
        """Two-letter factors of the fixed point."""
        found = {(0, self.images[0][1])}
        frontier = list(found)
        while frontier:
            b, c = frontier.pop()
            img = self.images[b] + self.images[c]
            for i in range(len(img) - 1):
                pair = (img[i], img[i + 1])
                if pair not in found:
                    found.add(pair)
                    frontier.append(pair)
        return frozenset(found)

    def letters_in_use(self) -> FrozenSet[int]:
        return frozenset(a for p in self.pairs() for a in p)

    def prefix(self, n: int) -> Tuple[int, ...]:
        w = (0,)
        while len(w) < n:
            w = tuple(c for b in w for c in self.images[b])
        return w[:n]

    def run_scan(self, taboo: FrozenSet[int], bound: int) -> Dict[Tuple[int, int], Set[int]]:
        """Maximal taboo runs ``c T^R d`` with ``R < bound`` between non-taboo letters."""
        out: Dict[Tuple[int, int], Set[int]] = {}
        if bound <= 0:
            return out
        m = 0
        while self.k ** m < bound + 2:
            m += 1
        imgs = self.power(m) if m else [(a,) for a in range(self.size)]
        pairs = self.pairs()
        support = {a for p in pairs for a in p}
        info = {}
        for a in support:
            img = imgs[a]
            marks = [i for i, b in enumerate(img) if b not in taboo]
            for x, y in zip(marks, marks[1:]):
                run = y - x - 1
                if run < bound:
                    out.setdefault((img[x], img[y]), set()).add(run)
            info[a] = (marks[0], img[marks[0]], marks[-1], img[marks[-1]]) if marks else None
        length = self.k ** m
        for b, c in pairs:
            left, right = info[b], info[c]
            if left is None or right is None:
                continue
            run = (length - 1 - left[2]) + right[0]
            if run < bound:
                out.setdefault((left[3], right[1]), set()).add(run)
        return out

    def first_run(self, taboo: FrozenSet[int]) -> Tuple[Optional[int], Optional[int]]:
        """Length of the taboo run at position 0 and the letter ending it; (None, None) if infinite."""
        seq, start = self.preimage_orbit(taboo)
        forever = frozenset.intersection(*seq)
        if 0 in forever:
            return None, None
        n = next(i for i, s in enumerate(seq) if 0 not in s) if any(0 not in s for s in seq) else None
        if n is None:
            n = len(seq)
        img = self.power(n)[0] if n else (0,)
        for i, b in enumerate(img):
            if b not in taboo:
                return i, b
        raise AssertionError("taboo run did not end where expected")

    def taboo_tail(self, taboo: FrozenSet[int]) -> Tuple[bool, Optional[int]]:
        """Whether the fixed point ends in an infinite taboo run, and the last letter before it."""
        seq, start = self.preimage_orbit(taboo)
        cycle = frozenset.intersection(*seq[start:])
        tail = self.images[0][1:]
        if not all(b in cycle for b in tail):
            return False, None
        head = self.power(start)[0] if start else (0,)
        marks = [b for b in head if b not in taboo]
        return True, (marks[-1] if marks else None)


# --------------------------------------------------------- recurrence frames

@dataclass(frozen=True)
class RecurrenceFrame:
    """Data for the stable-taboo recurrence of one (c, d) pair.

    ``images`` is the powered substitution (length ``base**exponent``) when
    it was written out, else None;
    ``taboo`` is closed under preimages; ``residues`` are the run lengths
    below ``K^2 - 1`` between ``c`` and ``d``.
    """

    images: Optional[Tuple[Tuple[int, ...], ...]]
    base: int
    exponent: int
    taboo: FrozenSet[int]
    c: int
    d: int
    q: Dict[Tuple[int, int], int]
    alpha: Dict[int, int]
    omega: Dict[int, int]
    residues: FrozenSet[int]

    @property
    def ratio(self) -> int:
        return self.base ** self.exponent

    def check(self) -> None:
        K = self.ratio
        taboo = self.taboo
        if self.images is not None:
            pre = frozenset(a for a, img in enumerate(self.images) if all(b in taboo for b in img))
            if pre != taboo:
                raise ValueError("taboo set is not closed under preimages")
        if any(self.alpha[self.alpha[a]] != self.alpha[a] for a in self.alpha):
            raise ValueError("first-letter map is not idempotent")
        if any(self.omega[self.omega[a]] != self.omega[a] for a in self.omega):
            raise ValueError("last-letter map is not idempotent")
        if any(not 0 <= v <= 2 * K - 2 for v in self.q.values()):
            raise ValueError("offset out of range")
        if self.c in taboo or self.d in taboo:
            raise ValueError("boundary letters must avoid the taboo set")
        if any(r >= K * K - 1 for r in self.residues):
            raise ValueError("residue out of range")


def solve_scdt(frame: RecurrenceFrame, checked: bool = False) -> Structured:
    """Closed form of the run-length set for a stable taboo set.

    ``checked`` skips validation when the shared maps were already vetted.
    """
    if not checked:
        frame.check()
    K = frame.ratio
    c, d = frame.c, frame.d
    if frame.omega.get(c) != c or frame.alpha.get(d) != d:
        return normalize(frame.residues, ())
    q = frame.q[(c, d)]
    shift = Fraction(q, K - 1)
    return normalize((), (GeometricSet(r + shift, -shift, frame.base, frame.exponent)
                          for r in frame.residues))


def _edge_maps(images, taboo: FrozenSet[int], letters: Iterable[int]):
    alpha, omega, lead, trail = {}, {}, {}, {}
    for a in letters:
        img = images[a]
        marks = [i for i, b in enumerate(img) if b not in taboo]
        if not marks:
            continue
        alpha[a], omega[a] = img[marks[0]], img[marks[-1]]
        lead[a], trail[a] = marks[0], len(img) - 1 - marks[-1]
    return alpha, omega, lead, trail


class TabooChain:
    """The taboo sets ``T_j = F^j(T)`` under the preimage map, indexed without bound."""

    def __init__(self, system: PureSystem, taboo: FrozenSet[int]):
        self.seq, self.start = system.preimage_orbit(taboo)
        self.period = len(self.seq) - self.start

    def __getitem__(self, j: int) -> FrozenSet[int]:
        if j < len(self.seq):
            return self.seq[j]
        return self.seq[self.start + (j - self.start) % self.period]

    def stable_index(self) -> int:
        """Smallest ``p >= 1`` with ``T_p = T_2p``."""
        p = max(self.start, 1)
        while p % self.period:
            p += 1
        return p


def _power_edges(system: PureSystem, chain: TabooChain, level: int, power: int):
    """First/last letter of ``Phi^power(a)`` outside ``T_level`` and the taboo counts before/after.

    Composed one step at a time so the image is never written out.
    """
    k = system.k
    size = system.size
    first = {a: a for a in range(size) if a not in chain[level]}
    last = dict(first)
    lead = {a: 0 for a in first}
    trail = {a: 0 for a in first}
    for s in range(1, power + 1):
        below = chain[level + s - 1]
        nf, nl, nlead, ntrail = {}, {}, {}, {}
        block = k ** (s - 1)
        for a in range(size):
            img = system.images[a]
            free = [i for i, b in enumerate(img) if b not in below]
            if not free:
                continue
            i, j = free[0], free[-1]
            nf[a], nlead[a] = first[img[i]], i * block + lead[img[i]]
            nl[a], ntrail[a] = last[img[j]], (k - 1 - j) * block + trail[img[j]]
        first, last, lead, trail = nf, nl, nlead, ntrail
    return first, last, lead, trail


class RunTable:
    """Exact run-length sets ``S(c, d, T)`` for all non-taboo ``c, d``."""

    def __init__(self, system: PureSystem, taboo: FrozenSet[int]):
        self.system = system
        self.taboo = taboo
        k = system.k
        chain = TabooChain(system, taboo)
        self.chain = chain
        p0 = chain.stable_index()
        stable = chain[p0]
        a1, o1, _, _ = _power_edges(system, chain, p0, p0)
        n = 1
        an, on = dict(a1), dict(o1)
        while not (all(an[an[a]] == an[a] for a in an) and all(on[on[a]] == on[a] for a in on)):
            an = {a: a1[an[a]] for a in an}
            on = {a: o1[on[a]] for a in on}
            n += 1
        self.exponent = P = p0 * n
        K = k ** P
        self.ratio = K
        self.stable = stable
        self.alpha0, self.omega0, lead0, trail0 = _power_edges(system, chain, 0, P)
        self.alpha1, self.omega1, lead1, trail1 = _power_edges(system, chain, p0, P)
        self.q0 = {(x, y): trail0[x] + lead0[y] for x in trail0 for y in lead0}
        self.q1 = {(x, y): trail1[x] + lead1[y] for x in trail1 for y in lead1}
        self._steps: Dict[FrozenSet[int], tuple] = {}
        self._bounded: Dict[Tuple[int, int], Dict[Tuple[int, int], Set[int]]] = {}
        self.small = self.bounded(0, K - 1)
        self.residues = self.bounded(p0, K * K - 1)
        self.omega_inv: Dict[int, List[int]] = {}
        self.alpha_inv: Dict[int, List[int]] = {}
        for x in range(system.size):
            if x in stable:
                continue
            if x in self.omega0:
                self.omega_inv.setdefault(self.omega0[x], []).append(x)
            if x in self.alpha0:
                self.alpha_inv.setdefault(self.alpha0[x], []).append(x)
        self._closed: Dict[Tuple[int, int], Structured] = {}
        self._sets: Dict[Tuple[int, int], Structured] = {}
        self._vetted = False

    def frame(self, x: int, y: int) -> RecurrenceFrame:
        return RecurrenceFrame(None, self.system.k, self.exponent, self.stable, x, y, self.q1,
                               self.alpha1, self.omega1, frozenset(self.residues.get((x, y), ())))

    def closed(self, x: int, y: int) -> Structured:
        """Closed form of ``S(x, y, T_stable)``."""
        key = (x, y)
        if key not in self._closed:
            self._closed[key] = solve_scdt(self.frame(x, y), checked=self._vetted)
            self._vetted = True
        return self._closed[key]

    def _step(self, level: int):
        """One-step recurrence data at ``T_level``: edge maps, offsets, short runs."""
        taboo = self.chain[level]
        if taboo not in self._steps:
            system = self.system
            alpha, omega, lead, trail = _edge_maps(system.images, taboo, range(system.size))
            pairs = {}
            for x in omega:
                for y in alpha:
                    pairs.setdefault((omega[x], alpha[y]), []).append((x, y, trail[x] + lead[y]))
            self._steps[taboo] = (pairs, system.run_scan(taboo, system.k - 1))
        return self._steps[taboo]

    def bounded(self, level: int, bound: int) -> Dict[Tuple[int, int], Set[int]]:
        """``S(c, d, T_level)`` below ``bound`` for every pair, by the one-step recurrence."""
        key = (level, bound)
        if key in self._bounded:
            return self._bounded[key]
        k = self.system.k
        pairs, short = self._step(level)
        out: Dict[Tuple[int, int], Set[int]] = {cd: {n for n in ns if n < bound} for cd, ns in short.items()}
        if bound > k - 1:
            deeper = self.bounded(level + 1, -(-bound // k))
            for cd, sources in pairs.items():
                bucket = out.setdefault(cd, set())
                for x, y, q in sources:
                    for n in deeper.get((x, y), ()):
                        value = k * n + q
                        if value < bound:
                            bucket.add(value)
        self._bounded[key] = out
        return out

    def get(self, c: int, d: int) -> Structured:
        """Exact ``S(c, d, T)``; empty when either letter is taboo."""
        if c in self.taboo or d in self.taboo:
            return EMPTY_SET
        key = (c, d)
        if key not in self._sets:
            parts = [normalize(self.small.get(key, ()), ())]
            for x in self.omega_inv.get(c, ()):
                for y in self.alpha_inv.get(d, ()):
                    parts.append(affine(self.closed(x, y), self.ratio, self.q0[(x, y)]))
            self._sets[key] = union(*parts)
        return self._sets[key]


def _sup(sets: Iterable[Structured], extra: Iterable[Optional[int]] = ()) -> Optional[float]:
    """Largest element (``inf`` when unbounded, None when everything is empty)."""
    best: Optional[float] = None
    for s in sets:
        if s.progressions:
            return float("inf")
        if s.finite_part:
            top = max(s.finite_part)
            best = top if best is None else max(best, top)
    for e in extra:
        if e is None:
            continue
        best = e if best is None else max(best, e)
    return best


def _interval(top: Optional[float]) -> OccurrenceSet:
    if top is None or top < 0:
        return EMPTY_SET
    if top == float("inf"):
        return ALL
    return normalize(range(int(top) + 1), ())


def letter_occurrences(system: PureSystem, left: FrozenSet[int], right: FrozenSet[int],
                       taboo: FrozenSet[int], tables: Optional[Dict] = None) -> OccurrenceSet:
    """``{m : c t d factor, c in left, t in taboo^m, d in right}``; ``left``/``right``
    must either contain the taboo set or avoid it."""
    tables = {} if tables is None else tables
    if taboo not in tables:
        tables[taboo] = RunTable(system, taboo)
    table = tables[taboo]
    inf = float("inf")
    used = system.letters_in_use()
    free = [a for a in range(system.size) if a not in taboo and a in used]
    left0 = [a for a in free if a in left]
    right0 = [a for a in free if a in right]
    left_all = bool(taboo & left)
    right_all = bool(taboo & right)
    exact = union(*(table.get(c, d) for c in left0 for d in right0))
    if not left_all and not right_all:
        return exact
    tail, last = system.taboo_tail(taboo)
    r0, after = system.first_run(taboo)
    tops: List[Optional[float]] = []
    if right_all:
        # c is the left boundary, d lies inside the run: m in [0, R - 1]
        top = _sup([table.get(c, d) for c in left0 for d in free],
                   [inf if tail and last in left0 else None])
        tops.append(None if top is None else top - 1)
    if left_all:
        top = _sup([table.get(c, d) for c in free for d in right0],
                   [r0 if r0 is not None and after in right0 else None])
        tops.append(None if top is None else top - 1)
    if left_all and right_all:
        top = _sup([table.get(c, d) for c in free for d in free],
                   [inf if tail else None, inf if r0 is None else r0])
        tops.append(None if top is None else top - 2)
    top = max((t for t in tops if t is not None), default=None)
    return union(exact, _interval(top))


def _start_occurrences(system: PureSystem, right: FrozenSet[int], taboo: FrozenSet[int]) -> OccurrenceSet:
    """Values of m with the block sequence starting ``t^m d`` (t in taboo, d in right)."""
    r0, after = system.first_run(taboo)
    right_all = bool(taboo & right)
    if r0 is None:
        return ALL if right_all else EMPTY_SET
    found = set(range(r0)) if right_all else set()
    if after in right:
        found.add(r0)
    return normalize(found, ())


# ------------------------------------------------------------ entry points

def _as_word(w) -> Word:
    return tuple(w) if not isinstance(w, str) else tuple(w)


def step_one_period(len_v: int, len_u: int, len_w: int) -> int:
    """Smallest j with every padded end word at most ``j * len_u`` long."""
    j = 1
    while True:
        if all(len_v + ((i + 1) // 2) * len_u <= j * len_u and len_w + (i // 2) * len_u <= j * len_u
               for i in range(j)):
            return j
        j += 1


def _check_spec(spec: SubstitutiveSpec) -> int:
    k = spec.phi.constant_length()
    if k is None or k < 2 or spec.marker is not None:
        raise SpecError("occurrence sets need an automatic (constant-length) spec")
    return k


def block_occurrences(spec: SubstitutiveSpec, v: Word, u: Word, w: Word,
                      system: Optional[PureSystem] = None) -> OccurrenceSet:
    """``{m : v u^m w factor}`` assuming ``|v|, |w| <= |u|``."""
    block = len(u)
    if len(v) > block or len(w) > block:
        raise ValueError("end words must fit in one block")
    system = system or PureSystem.windows(spec, block)
    head = spec.prefix(block)
    tables: Dict = {}
    parts = []
    for shift in range(block):
        codes = [spec.code(win[shift:shift + block]) for win in system.labels]
        taboo = frozenset(i for i, c in enumerate(codes) if c == u)
        left = frozenset(i for i, c in enumerate(codes) if c[block - len(v):] == v)
        right = frozenset(i for i, c in enumerate(codes) if c[:len(w)] == w)
        parts.append(letter_occurrences(system, left, right, taboo, tables))
        if shift >= len(v) and head[shift - len(v):shift] == v:
            parts.append(_start_occurrences(system, right, taboo))
        if parts[-1] is ALL:
            return ALL
    return union(*parts)


def occurrence_set(spec: SubstitutiveSpec, v, u, w) -> OccurrenceSet:
    """Exact ``{n >= 0 : v u^n w is a factor}`` as ALL or finite part plus progressions."""
    v, u, w = _as_word(v), _as_word(u), _as_word(w)
    if not u:
        raise ValueError("the repeated word u must be nonempty")
    _check_spec(spec)
    j = step_one_period(len(v), len(u), len(w))
    big = u * j
    system = PureSystem.windows(spec, len(big))
    parts = []
    for i in range(j):
        part = block_occurrences(spec, v + u * ((i + 1) // 2), big, u * (i // 2) + w, system)
        if part is ALL:
            return ALL
        parts.append(affine(part, j, i))
    return union(*parts)


# ---------------------------------------------------------------- oracles

class LanguageIndex:
    """Membership test for factors of length at most ``max_len`` of a coded fixed point."""

    def __init__(self, spec: SubstitutiveSpec, max_len: int):
        self.spec = spec
        self.max_len = max_len
        phi = spec.phi
        pairs = two_factor_closure(phi, [spec.underlying_prefix(2)])
        support = {a for p in pairs for a in p}
        m = min_power_for_length(phi, support, max(max_len, 2))
        budget.check(len(pairs) * 2 * max(len(phi.iterate((a,), 0)) for a in support)
                     * (max(len(img) for img in phi.rules.values()) ** m), "language index")
        images = {a: phi.iterate((a,), m) for a in support}
        self._chars: Dict[str, str] = {}
        chunks = []
        for b, c in sorted(pairs):
            word = spec.code(images[b] + images[c])
            if spec.marker is not None and (b == spec.marker or c == spec.marker):
                raw = images[b] + images[c]
                # split around the marker so no factor spans it
                pieces, cur = [], []
                for a, coded in zip(raw, word):
                    if a == spec.marker:
                        if cur:
                            pieces.append(cur)
                        cur = []
                    else:
                        cur.append(coded)
                if cur:
                    pieces.append(cur)
                chunks.extend(self._encode(p) for p in pieces)
            else:
                chunks.append(self._encode(word))
        self._text = "\n".join(chunks)

    def _encode(self, word) -> str:
        out = []
        for a in word:
            ch = self._chars.get(a)
            if ch is None:
                ch = chr(0x4E00 + len(self._chars))
                self._chars[a] = ch
            out.append(ch)
        return "".join(out)

    def __contains__(self, word) -> bool:
        word = tuple(word)
        if len(word) > self.max_len:
            raise ValueError(f"word longer than the index depth {self.max_len}")
        if not word:
            return True
        if any(a not in self._chars for a in word):
            return False
        return "".join(self._chars[a] for a in word) in self._text


def certified_prefix_length(spec: SubstitutiveSpec, n: int) -> int:
    """A prefix length containing every factor of length at most ``n``."""
    phi = spec.phi
    start = spec.underlying_prefix(2)
    depth = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for pair in frontier:
            img = phi(pair)
            for i in range(len(img) - 1):
                p = img[i:i + 2]
                if p not in depth:
                    depth[p] = depth[pair] + 1
                    nxt.append(p)
        frontier = nxt
    support = {a for p in depth for a in p}
    m = min_power_for_length(phi, support, max(n, 2))
    # the first pair sits in phi^j(seed); each pair at depth d sits in phi^d of it
    j = min_power_for_length(phi, [spec.seed], 2)
    iterations = max(depth.values()) + m + j
    counts = {spec.seed: 1}
    for _ in range(iterations):
        nxt: Dict[str, int] = {}
        for a, c in counts.items():
            for b in phi.rules[a]:
                nxt[b] = nxt.get(b, 0) + c
        counts = nxt
    return sum(counts.values())


def occurrence_brute(spec: SubstitutiveSpec, v, u, w, n_max: int, prefix_len: Optional[int] = None) -> Set[int]:
    """``{n <= n_max : v u^n w is a factor}`` by direct membership."""
    v, u, w = _as_word(v), _as_word(u), _as_word(w)
    longest = len(v) + n_max * len(u) + len(w)
    if prefix_len is None:
        index = LanguageIndex(spec, max(longest, 1))
        return {n for n in range(n_max + 1) if v + u * n + w in index}
    need = certified_prefix_length(spec, longest)
    if prefix_len < need:
        raise ValueError(f"prefix of length {prefix_len} is not certified; need {need}")
    index = _PrefixIndex(spec.prefix(prefix_len))
    return {n for n in range(n_max + 1) if v + u * n + w in index}


class _PrefixIndex:
    def __init__(self, word: Word):
        self._chars: Dict[str, str] = {}
        for a in word:
            self._chars.setdefault(a, chr(0x4E00 + len(self._chars)))
        self._text = "".join(self._chars[a] for a in word)

    def __contains__(self, word) -> bool:
        if any(a not in self._chars for a in word):
            return not word
        return "".join(self._chars[a] for a in word) in self._text
