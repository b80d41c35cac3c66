"""The ``substrata`` command line.

Every subcommand builds a JSON-ready payload; the plain-text report is
rendered from the same payload, so ``--json`` carries identical content.

Exit codes: 0 success, 1 unreadable or malformed input, 2 a precondition
failed (dependent bases, non-growing substitution, ...), 3 an uncertified
result under ``--strict``, 4 a verification check reported MISMATCH.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import cobham, occurrence, sequences, subsystems
from .budget import BudgetExceeded
from .subfile import SubDocument, SubParseError, format_document, parse_document, parse_triples
from .substitution import (NotGrowingError, classify_letters, idempotent_exponent, is_growing,
                           is_idempotent)
from .words import show, word

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_UNCERTIFIED, EXIT_MISMATCH = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class Outcome:
    """Payload plus its rendering and the exit code it implies."""

    def __init__(self, payload: dict, lines: List[str], checks: Optional[List[dict]] = None,
                 code: int = EXIT_OK):
        self.payload = payload
        self.lines = lines
        self.checks = checks or []
        self.code = code
        if any(c["status"] != "MATCH" for c in self.checks) and code == EXIT_OK:
            self.code = EXIT_MISMATCH


# ------------------------------------------------------------------ inputs

def _read(path: str) -> Tuple[str, str]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    try:
        return data.decode("utf-8"), hashlib.sha256(data).hexdigest()
    except UnicodeDecodeError:
        raise InputError(f"{path} is not UTF-8 text")


def _document(path: str, digests: Dict[str, str]) -> SubDocument:
    text, digest = _read(path)
    digests[path] = digest
    return parse_document(text)


def _spec(doc: SubDocument) -> sequences.SubstitutiveSpec:
    seed = doc.seed if doc.seed is not None else doc.substitution.alphabet[0]
    return sequences.make_spec(doc.substitution, seed, doc.coding)


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _letters(xs) -> List[str]:
    return sorted(xs)


# --------------------------------------------------------------- commands

def cmd_analyze(args, digests) -> Outcome:
    doc = _document(args.file, digests)
    phi = doc.substitution
    k = phi.constant_length()
    payload: dict = {"alphabet": list(phi.alphabet), "growing": is_growing(phi),
                     "constant_length": k}
    if not payload["growing"]:
        lines = ["growing: false", f"constant_length: {k if k is not None else 'none'}"]
        return Outcome(payload, lines, code=EXIT_PRECONDITION)
    report = is_idempotent(phi)
    cls = classify_letters(phi)
    payload.update({
        "idempotent": report.idempotent,
        "idempotent_exponent": idempotent_exponent(phi),
        "idempotency_failures": [list(w) for w in report.witness_failures],
        "classes": [_letters(c) for c in cls.equiv_classes],
        "minimal_letters": _letters(cls.minimal_letters),
        "prolongable": _letters(cls.prolongable),
        "backwards_prolongable": _letters(cls.backwards_prolongable),
        "ample": _letters(cls.ample),
        "very_ample": _letters(cls.very_ample),
    })
    lines = [
        "growing: true",
        f"constant_length: {k if k is not None else 'none'}",
        f"idempotent: {str(report.idempotent).lower()}",
        f"idempotent_exponent: {payload['idempotent_exponent']}",
        "classes: " + " ".join("{" + ",".join(c) + "}" for c in payload["classes"]),
    ]
    for key in ("minimal_letters", "prolongable", "backwards_prolongable", "ample", "very_ample"):
        lines.append(f"{key}: " + (" ".join(payload[key]) or "-"))
    for prop, letter, n in report.witness_failures:
        lines.append(f"property {prop} fails for {letter} at exponent {n}")
    return Outcome(payload, lines)


def cmd_fixpoint(args, digests) -> Outcome:
    spec = _spec(_document(args.file, digests))
    if args.length < 0:
        raise ValueError("--length must be non-negative")
    prefix = spec.prefix(args.length)
    return Outcome({"seed": spec.seed, "length": args.length, "prefix": list(prefix)},
                   [" ".join(prefix) if any(len(a) > 1 for a in prefix) else "".join(prefix)])


def cmd_factors(args, digests) -> Outcome:
    spec = _spec(_document(args.file, digests))
    fs = sequences.factor_set(spec, args.maxlen)
    words = list(fs)
    return Outcome({"maxlen": args.maxlen, "count": len(words), "factors": [list(w) for w in words]},
                   [show(w) for w in words])


def cmd_subsystems(args, digests) -> Outcome:
    doc = _document(args.file, digests)
    phi = doc.substitution
    mins = subsystems.minimal_subsystems(phi, depth=args.depth, coding=doc.coding)
    verdict = subsystems.is_transitive(phi)
    gens = [g.text() for g in subsystems.transitive_generators(phi)
            if isinstance(g, subsystems.GeneratorSequence)]
    entries = [{"letters": _letters(m.letters), "periodicity": str(m.periodicity),
                "periodic": m.periodic} for m in mins]
    lines = [f"minimal subsystems: {len(mins)}"]
    lines += [f"  {{{','.join(e['letters'])}}}: {e['periodicity']}" for e in entries]
    lines.append(f"transitivity: {verdict}")
    lines += [f"generator: {g}" for g in gens]
    return Outcome({"minimal": entries, "transitivity": str(verdict), "generators": gens}, lines)


def _set_payload(s: occurrence.OccurrenceSet) -> dict:
    if s is occurrence.ALL:
        return {"all": True, "text": "ALL"}
    return {"all": False, "text": s.text(), "finite": sorted(s.finite_part),
            "progressions": [{"a": _frac(g.a), "b": _frac(g.b), "base": g.base, "m": g.m}
                             for g in s.progressions]}


def cmd_occurrences(args, digests) -> Outcome:
    spec = _spec(_document(args.file, digests))
    v, u, w = word(args.v), word(args.u), word(args.w)
    s = occurrence.occurrence_set(spec, v, u, w)
    payload = {"v": list(v), "u": list(u), "w": list(w), "set": _set_payload(s)}
    lines = [s.text()]
    checks = []
    if args.verify is not None:
        brute = occurrence.occurrence_brute(spec, v, u, w, args.verify)
        got = occurrence.evaluate(s, args.verify)
        status = "MATCH" if brute == got else "MISMATCH"
        checks.append({"check": f"brute force to {args.verify}", "status": status,
                       "missing": sorted(brute - got), "extra": sorted(got - brute)})
        lines.append(f"verify to {args.verify}: {status}")
    if args.against:
        other = _spec(_document(args.against, digests))
        t = occurrence.occurrence_set(other, v, u, w)
        both = cobham.intersect_occurrence_sets(s, spec.phi.constant_length(), t,
                                                other.phi.constant_length(), args.bound)
        payload["against"] = _set_payload(t)
        payload["intersection"] = dict(_set_payload(both.value), complete=both.complete)
        lines.append(f"other: {t.text()}")
        lines.append(f"intersection: {both.value.text()}"
                     + ("" if both.complete else f" (exhaustive up to exponent {args.bound})"))
    return Outcome(payload, lines, checks)


def cmd_common_factors(args, digests) -> Outcome:
    x = _spec(_document(args.x, digests))
    y = _spec(_document(args.y, digests))
    report = cobham.analyze_common_factors(x, y, args.depth)
    result = report.result
    specials = []
    for s in report.special_sets:
        specials.append({"v_left": list(s.v_left), "u": list(s.u), "v": list(s.v), "w": list(s.w),
                         "v_right": list(s.v_right), "resolution": type(s.resolution).__name__,
                         "certificate": s.certificate})
    payload = {
        "depth": args.depth,
        "triples": [t.text() for t in result.triples],
        "certification": str(result.certification),
        "certified": result.certified,
        "cyclic_common": [list(u) for u in report.cyclic_common],
        "ell": report.ell,
        "longest_middle": report.longest_middle,
        "special_sets": specials,
        "notes": list(report.notes),
    }
    lines = [t.text() for t in result.triples]
    lines.append(f"certification: {result.certification}")
    for note in report.notes:
        lines.append(f"note: {note}")
    code = EXIT_UNCERTIFIED if args.strict and not result.certified else EXIT_OK
    return Outcome(payload, lines, code=code)


def cmd_construct(args, digests) -> Outcome:
    text, digests[args.triples] = _read(args.triples)
    triples = parse_triples(text)
    pair = cobham.construct_witnesses(triples, args.k, args.l)
    out = Path(args.o)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, spec, base in (("x.sub", pair.x_spec, pair.k), ("y.sub", pair.y_spec, pair.l)):
            doc = SubDocument(spec.phi, spec.coding, spec.seed, base)
            (out / name).write_text(format_document(doc), encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write to {out}: {exc.strerror}")
    payload = {"k": pair.k, "l": pair.l, "params": pair.params,
               "x_states": len(pair.x_spec.phi.alphabet), "y_states": len(pair.y_spec.phi.alphabet),
               "files": [str(out / "x.sub"), str(out / "y.sub")]}
    lines = [f"k: {pair.k}", f"l: {pair.l}",
             "params: " + " ".join(f"{a}={b}" for a, b in pair.params.items()),
             f"wrote {payload['files'][0]} ({payload['x_states']} states)",
             f"wrote {payload['files'][1]} ({payload['y_states']} states)"]
    return Outcome(payload, lines)


def cmd_verify_witness(args, digests) -> Outcome:
    x = _spec(_document(args.x, digests))
    y = _spec(_document(args.y, digests))
    text, digests[args.triples] = _read(args.triples)
    triples = parse_triples(text)
    strata = cobham.verify_witness(x, y, triples, args.depth)
    checks = [{"check": f"length {s.length}", "status": s.status(),
               "missing": [list(w) for w in s.missing], "extra": [list(w) for w in s.extra]}
              for s in strata]
    lines = []
    for s in strata:
        line = f"length {s.length}: {s.status()}"
        if not s.match:
            line += f" missing={[show(w) for w in s.missing]} extra={[show(w) for w in s.extra]}"
        lines.append(line)
    return Outcome({"depth": args.depth}, lines, checks)


# ------------------------------------------------------------------ wiring

def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="substrata",
                                  description="Substitutions, automatic sequences and their common factors.")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.set_defaults(handler=handler)
        p.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                       help="also write a JSON report (to PATH, or standard output)")
        return p

    p = add("analyze", cmd_analyze, "structural report on a substitution")
    p.add_argument("file")
    p = add("fixpoint", cmd_fixpoint, "prefix of the coded fixed point")
    p.add_argument("file")
    p.add_argument("--length", type=int, required=True)
    p = add("factors", cmd_factors, "all factors up to a length")
    p.add_argument("file")
    p.add_argument("--maxlen", type=int, required=True)
    p = add("subsystems", cmd_subsystems, "minimal subsystems, transitivity and generators")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=subsystems.DEFAULT_DEPTH)
    p = add("occurrences", cmd_occurrences, "exact set of n with v u^n w a factor")
    p.add_argument("file")
    p.add_argument("-v", default="", help="left word (may be empty)")
    p.add_argument("-u", required=True, help="repeated word")
    p.add_argument("-w", default="", help="right word (may be empty)")
    p.add_argument("--verify", type=int, metavar="N")
    p.add_argument("--against", metavar="OTHER.sub", help="intersect with the set in another base")
    p.add_argument("--bound", type=int, default=cobham.DEFAULT_DIOPH_BOUND)
    p = add("common-factors", cmd_common_factors, "describe the common factors of two sequences")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--strict", action="store_true")
    p = add("construct", cmd_construct, "build sequences with prescribed common factors")
    p.add_argument("triples")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-l", type=int, required=True)
    p.add_argument("-o", required=True, metavar="DIR")
    p = add("verify-witness", cmd_verify_witness, "check constructed sequences against their triples")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("triples")
    p.add_argument("--depth", type=int, required=True)
    return top


def run(argv: Sequence[str], out=None, err=None) -> Tuple[Optional[dict], int]:
    """Execute one command; returns the JSON report (None on error) and the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    args = _parser().parse_args(list(argv))
    digests: Dict[str, str] = {}
    started = time.perf_counter()
    try:
        outcome = args.handler(args, digests)
    except (InputError, SubParseError) as exc:
        print(f"error: {exc}", file=err)
        return None, EXIT_INPUT
    except (cobham.PreconditionError, sequences.SpecError, NotGrowingError, BudgetExceeded,
            ValueError) as exc:
        print(f"error: {exc}", file=err)
        return None, EXIT_PRECONDITION
    report = {
        "command": args.command,
        "inputs": digests,
        "outputs": outcome.payload,
        "verification": outcome.checks,
        "elapsed_ms": round((time.perf_counter() - started) * 1000),
        "exit_code": outcome.code,
    }
    for line in outcome.lines:
        print(line, file=out)
    if args.json == "-":
        print(json.dumps(report, indent=2, ensure_ascii=False), file=out)
    elif args.json:
        Path(args.json).write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return report, outcome.code


def main(argv: Optional[Sequence[str]] = None) -> int:
    _, code = run(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
