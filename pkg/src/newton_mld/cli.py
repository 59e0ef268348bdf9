"""Command line front end: polynomial or support file in, report out."""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .discrepancy import MldReport, format_rational, full_report
from .errors import InputError, ParseError
from .newton import SupportSet, validate_support
from .oracle import DEFAULT_MAX_ENUMERATION, brute_force_min

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNCERTIFIED = 3
EXIT_DISAGREEMENT = 4

TOOL = "newton-mld"
ASSUMPTIONS = (
    "f is assumed non-degenerate with respect to its Newton polyhedron (not checked)",
    "with delta = 1 the value equals a(0;X) only if X is normal (not checked)",
)

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>x(?P<idx>\d+))|(?P<op>[\^*+])|(?P<bad>\S))")
_RATIONAL = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(m.lastgroup)
        if m.group("bad") is not None:
            ch = m.group("bad")
            if ch == "-":
                msg = "only '+' may join terms (coefficient signs do not affect the support)"
            else:
                msg = f"unexpected character {ch!r}"
            raise ParseError(msg, *_position(text, start))
        if m.group("int") is not None:
            yield "int", int(m.group("int")), start
        elif m.group("var") is not None:
            yield "var", int(m.group("idx")), start
        else:
            yield m.group("op"), None, start
        pos = m.end()
    yield "end", None, len(text)


def parse_polynomial(text: str, dimension: Optional[int] = None) -> SupportSet:
    """Support of a polynomial written in x0..xn.

    Grammar: terms joined by '+'; a term is an optional integer coefficient
    followed by '*'-separated powers ``xi`` or ``xi^k``.  Repeated monomials
    merge; an explicit zero coefficient is rejected.
    """
    toks = list(_tokens(text))
    i = 0

    def peek():
        return toks[i]

    def fail(msg, tok):
        raise ParseError(msg, *_position(text, tok[2]))

    monomials: list[dict[int, int]] = []
    while True:
        powers: dict[int, int] = {}
        tok = peek()
        if tok[0] == "int":
            if tok[1] == 0:
                fail("zero coefficient: the monomial would not be in the support", tok)
            i += 1
            if peek()[0] != "*":
                monomials.append(powers)
                tok = peek()
                if tok[0] == "end":
                    break
                if tok[0] != "+":
                    fail("expected '+' or '*' after coefficient", tok)
                i += 1
                continue
            i += 1
        while True:
            tok = peek()
            if tok[0] != "var":
                fail("expected a variable x<i>", tok)
            i += 1
            idx, exp = tok[1], 1
            if peek()[0] == "^":
                i += 1
                etok = peek()
                if etok[0] != "int":
                    fail("expected an integer exponent after '^'", etok)
                exp = etok[1]
                i += 1
            powers[idx] = powers.get(idx, 0) + exp
            if peek()[0] != "*":
                break
            i += 1
        monomials.append(powers)
        tok = peek()
        if tok[0] == "end":
            break
        if tok[0] != "+":
            fail("expected '+' between terms", tok)
        i += 1

    used = max((k for mono in monomials for k in mono), default=-1) + 1
    if dimension is None:
        dimension = max(used, 1)
    elif used > dimension:
        raise InputError(
            f"inconsistent variable count: x{used - 1} appears but dimension is {dimension}"
        )
    pts = [tuple(mono.get(k, 0) for k in range(dimension)) for mono in monomials]
    return SupportSet(dimension, tuple(pts))


def parse_rational(text) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    m = _RATIONAL.match(str(text))
    if m is None or (m.group(2) is not None and int(m.group(2)) == 0):
        raise InputError(f"not a rational of the form p or p/q: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def parse_delta(text: str) -> list[Fraction]:
    return [parse_rational(part) for part in text.split(",")]


def load_support_file(path: str) -> tuple[SupportSet, Optional[list[Fraction]]]:
    """Read ``{dimension, support, delta?}``; extra keys (a previous report) are ignored."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read support file {path}: {exc}") from exc
    if not isinstance(doc, dict) or "support" not in doc:
        raise InputError("support file must be an object with a 'support' list")
    support = doc["support"]
    if not isinstance(support, list) or not all(isinstance(m, list) for m in support):
        raise InputError("'support' must be a list of integer vectors")
    for m in support:
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in m):
            raise InputError(f"exponent {m} must contain integers")
    dimension = doc.get("dimension", len(support[0]) if support else 0)
    if not isinstance(dimension, int) or isinstance(dimension, bool):
        raise InputError("'dimension' must be an integer")
    s = SupportSet(dimension, tuple(tuple(m) for m in support)) if support else None
    if s is None:
        raise InputError("no monomials")
    delta = doc.get("delta")
    if delta is not None:
        if not isinstance(delta, list):
            raise InputError("'delta' must be a list of rationals")
        delta = [parse_rational(v) for v in delta]
    return s, delta


def report_to_dict(r: MldReport) -> dict:
    q = format_rational
    doc = {
        "tool": TOOL,
        "version": __version__,
        "dimension": r.dimension,
        "support": [list(m) for m in r.support],
        "delta": [q(v) for v in r.delta],
        "log_canonical": r.log_canonical,
        "mld": str(r.mld),
        "witness": list(r.witness) if r.witness else None,
        "witness_trace": (
            {"members": [list(m) for m in r.witness_trace.members], "value": q(r.witness_trace.value)}
            if r.witness_trace
            else None
        ),
        "witness_in_proper_cone": r.witness_in_proper_cone,
        "witness_meets_strict_transform": r.witness_meets_strict_transform,
        "multiplicity": r.multiplicity,
        "ordinary_blowup_discrepancy": q(r.ordinary_blowup_discrepancy),
        "smooth": r.smooth,
        "certified": r.certified,
        "assumptions": list(ASSUMPTIONS),
    }
    if r.lct is not None:
        doc["lct"] = {"raw": q(r.lct.raw), "capped": q(r.lct.capped)}
    return doc


def _yn(flag) -> str:
    return "n/a" if flag is None else ("yes" if flag else "no")


def render_text(r: MldReport) -> str:
    q = format_rational
    vec = lambda v: "(" + ",".join(str(x) for x in v) + ")"
    lines = [
        f"{TOOL} {__version__}",
        *(f"note: {a}" for a in ASSUMPTIONS),
        f"dimension: {r.dimension}",
        "support: " + " ".join(vec(m) for m in r.support),
        "delta: " + " ".join(q(v) for v in r.delta),
        f"log canonical: {_yn(r.log_canonical)}",
        f"mld: {r.mld}",
    ]
    if r.witness:
        lines.append(f"witness: {vec(r.witness)}")
        lines.append(
            "witness trace: "
            + " ".join(vec(m) for m in r.witness_trace.members)
            + f" at level {q(r.witness_trace.value)}"
        )
    lines += [
        f"witness in proper cone: {_yn(r.witness_in_proper_cone)}",
        f"witness meets strict transform: {_yn(r.witness_meets_strict_transform)}",
        f"multiplicity: {r.multiplicity}",
        f"ordinary blow-up discrepancy: {q(r.ordinary_blowup_discrepancy)}",
        f"smooth: {_yn(r.smooth)}",
        f"certified: {_yn(r.certified)}",
    ]
    if r.lct is not None:
        lines.append(f"lct: {q(r.lct.capped)} (raw {q(r.lct.raw)})")
    return "\n".join(lines)


def cross_check(r: MldReport, oracle) -> list[str]:
    """Contradictions between the report and a box search; empty means consistent."""
    problems = []
    if r.log_canonical:
        if oracle.min_value < 0:
            problems.append(f"oracle found phi = {format_rational(oracle.min_value)} < 0")
        elif oracle.min_value < r.mld.value and r.certified:
            problems.append(
                f"oracle minimum {format_rational(oracle.min_value)} below certified mld {r.mld}"
            )
        elif r.certified and oracle.interior and oracle.min_value != r.mld.value:
            problems.append(
                f"oracle minimum {format_rational(oracle.min_value)} differs from mld {r.mld}"
            )
    return problems


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog=TOOL,
        description="Minimal log discrepancy of a non-degenerate hypersurface pair from its Newton polyhedron.",
    )
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("polynomial", nargs="?", help="polynomial in x0..xn, e.g. 'x0^2 + x1^3'")
    src.add_argument("-f", "--file", help="JSON support file {dimension, support, delta?}")
    ap.add_argument("--dimension", type=int, help="number of variables n+1 (default: inferred)")
    ap.add_argument("--delta", help="boundary coefficients p/q,... (default all 1)")
    ap.add_argument("--json", action="store_true", help="structured output")
    ap.add_argument("--verify", type=int, metavar="BOX", help="cross-check with brute force over [1,BOX]^{n+1}")
    ap.add_argument("--box", type=int, help="initial integer-program search box (default 32)")
    ap.add_argument("--lct", action="store_true", help="include the log canonical threshold")
    ap.add_argument(
        "--max-enumeration", type=int, default=DEFAULT_MAX_ENUMERATION, help="oracle point ceiling"
    )
    return ap


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.file:
            raw, delta = load_support_file(args.file)
        else:
            raw, delta = parse_polynomial(args.polynomial, args.dimension), None
        if args.delta is not None:
            delta = parse_delta(args.delta)
        s = validate_support(raw.points, raw.dimension)
        oracle = None
        if args.verify is not None:
            oracle = brute_force_min(s, delta, args.verify, args.max_enumeration)
        report = full_report(
            s,
            delta,
            box=args.box,
            oracle_minimizers=oracle.minimizers if oracle and oracle.min_value >= 0 else None,
            with_lct=args.lct,
        )
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT

    problems = cross_check(report, oracle) if oracle else []
    if args.json:
        doc = report_to_dict(report)
        if oracle is not None:
            doc["verification"] = {
                "box": oracle.box_bound,
                "min": format_rational(oracle.min_value),
                "interior": oracle.interior,
                "agrees": not problems,
            }
        print(json.dumps(doc, indent=2), file=out)
    else:
        print(render_text(report), file=out)
        if oracle is not None:
            print(
                f"oracle (box {oracle.box_bound}): min {format_rational(oracle.min_value)}, "
                f"interior {_yn(oracle.interior)}, agrees {_yn(not problems)}",
                file=out,
            )
    for p in problems:
        print(f"disagreement: {p}", file=err)
    if problems:
        return EXIT_DISAGREEMENT
    if not report.certified:
        print("warning: optimality not certified within the box growth limit", file=err)
        return EXIT_UNCERTIFIED
    return EXIT_OK


def main() -> None:
    sys.exit(run())
