"""Reader and writer for the line-oriented ``.sub`` substitution format.

Example::

    # Thue-Morse
    alphabet: 0 1
    rule 0 -> 0 1
    rule 1 -> 1 0
    seed: 0
    base: 2
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional

from .substitution import Substitution


class SubParseError(ValueError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class SubDocument:
    substitution: Substitution
    coding: Optional[Dict[str, str]] = None
    seed: Optional[str] = None
    base: Optional[int] = None


_RULE = re.compile(r"^(rule|coding)\s+(\S+)\s*->(.*)$")
_KEY = re.compile(r"^(alphabet|seed|base)\s*:(.*)$")


def parse_document(text: str) -> SubDocument:
    alphabet = None
    rules: Dict[str, tuple] = {}
    coding: Dict[str, str] = {}
    seed = base = None
    seed_line = base_line = 0
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last_line = lineno
        m = _KEY.match(line)
        if m:
            key, value = m.group(1), m.group(2).split()
            if key == "alphabet":
                if alphabet is not None:
                    raise SubParseError("alphabet declared twice", lineno)
                if not value:
                    raise SubParseError("empty alphabet", lineno)
                if len(set(value)) != len(value):
                    raise SubParseError("repeated letter in alphabet", lineno)
                alphabet = tuple(value)
                continue
            if alphabet is None:
                raise SubParseError("alphabet must be declared first", lineno)
            if len(value) != 1:
                raise SubParseError(f"{key} takes exactly one value", lineno)
            if key == "seed":
                if seed is not None:
                    raise SubParseError("seed declared twice", lineno)
                if value[0] not in alphabet:
                    raise SubParseError(f"undeclared letter {value[0]!r}", lineno)
                seed, seed_line = value[0], lineno
            else:
                if base is not None:
                    raise SubParseError("base declared twice", lineno)
                try:
                    base = int(value[0])
                except ValueError:
                    raise SubParseError(f"base must be an integer, got {value[0]!r}", lineno)
                if base < 2:
                    raise SubParseError("base must be at least 2", lineno)
                base_line = lineno
            continue
        m = _RULE.match(line)
        if not m:
            raise SubParseError(f"malformed line: {line!r}", lineno)
        if alphabet is None:
            raise SubParseError("alphabet must be declared first", lineno)
        kind, letter, image = m.group(1), m.group(2), m.group(3).split()
        if letter not in alphabet:
            raise SubParseError(f"undeclared letter {letter!r}", lineno)
        if kind == "rule":
            if letter in rules:
                raise SubParseError(f"duplicate rule for {letter!r}", lineno)
            if not image:
                raise SubParseError(f"empty rule image for {letter!r}", lineno)
            for b in image:
                if b not in alphabet:
                    raise SubParseError(f"undeclared letter {b!r}", lineno)
            rules[letter] = tuple(image)
        else:
            if letter in coding:
                raise SubParseError(f"duplicate coding for {letter!r}", lineno)
            if len(image) != 1:
                raise SubParseError("coding maps a letter to exactly one token", lineno)
            coding[letter] = image[0]
    if alphabet is None:
        raise SubParseError("missing alphabet declaration", last_line)
    missing = [a for a in alphabet if a not in rules]
    if missing:
        raise SubParseError(f"no rule for letter {missing[0]!r}", last_line)
    phi = Substitution(alphabet, rules)
    if base is not None and phi.constant_length() != base:
        raise SubParseError(f"rules are not all of length {base}", base_line)
    if coding:
        coding = {a: coding.get(a, a) for a in alphabet}
    return SubDocument(phi, coding or None, seed, base)


def parse_substitution(text: str) -> Substitution:
    return parse_document(text).substitution


def load_document(path) -> SubDocument:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def format_document(doc: SubDocument) -> str:
    phi = doc.substitution
    lines = ["alphabet: " + " ".join(phi.alphabet)]
    lines += [f"rule {a} -> {' '.join(phi.rules[a])}" for a in phi.alphabet]
    if doc.coding:
        lines += [f"coding {a} -> {doc.coding[a]}" for a in phi.alphabet]
    if doc.seed is not None:
        lines.append(f"seed: {doc.seed}")
    if doc.base is not None:
        lines.append(f"base: {doc.base}")
    return "\n".join(lines) + "\n"


def parse_triples(text: str) -> list:
    """Lines ``v | u | w`` with space-separated tokens; any part may be empty."""
    from .words import BiWordTriple

    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("|")
        if len(parts) != 3:
            raise SubParseError("expected three parts separated by '|'", lineno)
        v, u, w = (tuple(p.split()) for p in parts)
        if not (v or u or w):
            raise SubParseError("a triple needs at least one nonempty part", lineno)
        out.append(BiWordTriple(v, u, w))
    if not out:
        raise SubParseError("no triples given")
    return out


def format_triples(triples) -> str:
    return "".join(f"{' '.join(t.v)} | {' '.join(t.u)} | {' '.join(t.w)}\n" for t in triples)
