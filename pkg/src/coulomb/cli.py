"""Command-line front end.

Every subcommand prints its result on stdout.  Exit status is 0 on success,
1 on usage or validation errors and 2 when a series diverges (the witness
coweight is printed).  JSON output uses strings for every number.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .abelian import (
    GradingSpec,
    Inhomogeneous,
    MixedCharge,
    TorusTheory,
    commutator,
    degree,
    generic_fiber_witness,
    multiply,
    poisson_bracket,
    topological_charge,
)
from .errors import CoulombError, DivergenceError
from .higgs import HiggsInput, duality_check, higgs_hilbert_series
from .lattice import as_matrix
from .monopole import NonabelianTheory, QuiverData, monopole_hilbert_series, quiver_to_theory
from .presentation import find_relations, reduce_presentation, verify_presentation
from .series import format_rational, parse_half

class UsageError(Exception):
    pass


class SpecError(ValueError):
    """A theory description failed validation; the message names the field."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# theory descriptions

def _load(text: str, what: str):
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise SpecError(f"{what}: cannot read {text[1:]}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{what}: invalid JSON ({exc.msg} at position {exc.pos})") from None


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _int_field(obj, key, *, minimum=0):
    if key not in obj:
        raise SpecError(f"field '{key}' is missing")
    x = obj[key]
    if isinstance(x, str):
        try:
            x = int(x)
        except ValueError:
            raise SpecError(f"field '{key}' must be an integer, got {obj[key]!r}") from None
    if not _is_int(x) or x < minimum:
        raise SpecError(f"field '{key}' must be an integer >= {minimum}, got {obj[key]!r}")
    return x


def _int_rows(obj, key, width=None, default=None):
    if key not in obj:
        if default is not None:
            return default
        raise SpecError(f"field '{key}' is missing")
    rows = obj[key]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SpecError(f"field '{key}' must be a list of integer rows")
    out = []
    for i, r in enumerate(rows):
        try:
            row = tuple(int(x) if isinstance(x, str) else x for x in r)
        except ValueError:
            raise SpecError(f"field '{key}[{i}]' has a non-integer entry") from None
        if not all(_is_int(x) for x in row):
            raise SpecError(f"field '{key}[{i}]' has a non-integer entry")
        if width is None:
            width = len(row)
        if len(row) != width:
            raise SpecError(f"field '{key}[{i}]' has length {len(row)}, expected {width}")
        out.append(row)
    return out


def _int_list(obj, key, length):
    row = obj.get(key)
    if not isinstance(row, list) or len(row) != length or not all(_is_int(x) and x >= 0 for x in row):
        raise SpecError(f"field '{key}' must be a list of {length} nonnegative integers (one per vertex)")
    return row


def parse_theory(obj):
    """TorusTheory or NonabelianTheory from a decoded theory description."""
    if not isinstance(obj, dict):
        raise SpecError("theory must be a JSON object")
    kind = obj.get("kind")
    if kind == "torus":
        n = _int_field(obj, "rank")
        matter = _int_rows(obj, "matter", width=n)
        flavor = None
        if "flavor" in obj:
            flavor = _int_rows(obj, "flavor")
            if len(flavor) != len(matter):
                raise SpecError(f"field 'flavor' has {len(flavor)} rows, expected {len(matter)}")
        return TorusTheory(n, matter, flavor)
    if kind == "quiver":
        vertices = obj.get("vertices")
        if not isinstance(vertices, list):
            raise SpecError("field 'vertices' must be a list")
        edges = obj.get("edges", [])
        if not isinstance(edges, list) or not all(isinstance(e, list) and len(e) == 2 for e in edges):
            raise SpecError("field 'edges' must be a list of [out, in] pairs")
        dims = _int_list(obj, "v", len(vertices))
        framing = _int_list(obj, "w", len(vertices))
        try:
            quiver = QuiverData(tuple(vertices), tuple(tuple(e) for e in edges), dims, framing)
        except ValueError as exc:
            raise SpecError(f"quiver: {exc}") from None
        return quiver_to_theory(quiver)
    raise SpecError(f"field 'kind' must be 'torus' or 'quiver', got {kind!r}")


def _torus(theory) -> TorusTheory:
    if isinstance(theory, TorusTheory):
        return theory
    try:
        return theory.as_torus()
    except ValueError:
        raise SpecError("this subcommand needs an abelian theory (all GL factors of size <= 1)") from None


def _rationals(text: str, what: str) -> tuple[Fraction, ...]:
    text = text.strip()
    if text.startswith("["):
        items = _load(text, what)
        if not isinstance(items, list):
            raise SpecError(f"{what}: expected a list")
    else:
        items = [s for s in text.split(",") if s.strip()]
    out = []
    for x in items:
        if isinstance(x, float) or isinstance(x, bool):
            raise SpecError(f"{what}: write rationals as strings like \"1/2\", got {x!r}")
        try:
            out.append(Fraction(str(x).strip()))
        except (ValueError, ZeroDivisionError):
            raise SpecError(f"{what}: {x!r} is not a rational number") from None
    return tuple(out)


def _integers(text: str, what: str) -> tuple[int, ...]:
    vals = _rationals(text, what)
    if any(v.denominator != 1 for v in vals):
        raise SpecError(f"{what}: entries must be integers")
    return tuple(int(v) for v in vals)


def _order(text: str) -> int:
    try:
        return parse_half(text)
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"--order/--degree: {text!r} is not an integer or half-integer") from None


# rendering helpers

def element_json(e) -> list:
    names = e.theory.variable_names()
    return [[[str(x) for x in lam], p.render(names)] for lam, p in e.terms.items()]


def _degree_str(d) -> str:
    if d is None:
        return "none"
    if isinstance(d, Inhomogeneous):
        return "inhomogeneous(" + ", ".join(format_rational(x) for x in d.degrees) + ")"
    return format_rational(d)


def _charge_str(c) -> str:
    if isinstance(c, MixedCharge):
        return "mixed(" + "; ".join(",".join(str(x) for x in s) for s in c.sectors) + ")"
    return ",".join(str(x) for x in c)


def _grading(args, theory: TorusTheory) -> GradingSpec:
    if args.shift is None:
        return GradingSpec()
    shift = _rationals(args.shift, "--shift")
    if len(shift) != theory.rank:
        raise SpecError(f"--shift has length {len(shift)}, expected {theory.rank}")
    return GradingSpec("shifted", shift)


def _sector(args, name, theory, rng):
    text = getattr(args, name)
    if text is None:
        return tuple(rng.randint(-2, 2) for _ in range(theory.rank))
    lam = _integers(text, f"--{name}")
    if len(lam) != theory.rank:
        raise SpecError(f"--{name} has length {len(lam)}, expected {theory.rank}")
    return lam


# subcommands

def cmd_mono_hs(args, out):
    theory = parse_theory(_load(args.theory, "--theory"))
    if isinstance(theory, TorusTheory):
        theory = NonabelianTheory.from_torus(theory)
    order = _order(args.order)
    series = monopole_hilbert_series(theory, Fraction(order, 2), include_fugacities=args.fugacities == "on")
    if args.format == "json":
        out.write(dump_json({"command": "mono-hs", "series": series.to_json_obj()}) + "\n")
    else:
        out.write(series.render() + "\n")


def cmd_alg_mul(args, out):
    theory = _torus(parse_theory(_load(args.theory, "--theory")))
    rng = random.Random(args.seed)
    lam = _sector(args, "lam", theory, rng)
    mu = _sector(args, "mu", theory, rng)
    grading = _grading(args, theory)
    offset = Fraction(args.offset)
    prod = multiply(theory.X(lam), theory.X(mu), args.mode, offset)
    deg = degree(prod, grading)
    charge = topological_charge(prod)
    if args.format == "json":
        out.write(dump_json({
            "command": "alg-mul",
            "mode": args.mode,
            "lam": [str(x) for x in lam],
            "mu": [str(x) for x in mu],
            "product": element_json(prod),
            "degree": _degree_str(deg),
            "charge": _charge_str(charge),
        }) + "\n")
    else:
        out.write(f"X[{_charge_str(lam)}] * X[{_charge_str(mu)}] = {prod.render()}\n")
        out.write(f"degree: {_degree_str(deg)}\n")
        out.write(f"charge: {_charge_str(charge)}\n")


def cmd_present(args, out):
    theory = _torus(parse_theory(_load(args.theory, "--theory")))
    D = Fraction(_order(args.degree), 2)
    gens = None
    if args.gens is not None:
        raw = _load(args.gens, "--gens")
        gens = _int_rows({"gens": raw}, "gens", width=theory.rank)
    p = find_relations(theory, gens, D)
    if args.reduced:
        p = reduce_presentation(p)
    report = verify_presentation(p)
    if args.format == "json":
        obj = p.to_json_obj()
        obj.update({"command": "present", "ring": p.render(), "verified": report.passed})
        out.write(dump_json(obj) + "\n")
    else:
        out.write(p.render() + "\n")
        for g in p.generators:
            out.write(f"  {g.name}: degree {format_rational(g.degree)}\n")
        if not p.surjective:
            out.write(f"warning: generators miss {len(p.missed)} basis element(s) up to degree {format_rational(D)}\n")
        out.write(f"verification: {report.summary()}\n")
        out.write(p.machine_block() + "\n")


def cmd_quantize_comm(args, out):
    theory = _torus(parse_theory(_load(args.theory, "--theory")))
    rng = random.Random(args.seed)
    lam = _sector(args, "lam", theory, rng)
    mu = _sector(args, "mu", theory, rng)
    offset = Fraction(args.offset)
    a, b = theory.X(lam), theory.X(mu)
    ab = multiply(a, b, "quantized", offset)
    ba = multiply(b, a, "quantized", offset)
    comm = commutator(a, b, offset)
    bracket = poisson_bracket(a, b)
    if args.format == "json":
        out.write(dump_json({
            "command": "quantize-comm",
            "lam": [str(x) for x in lam],
            "mu": [str(x) for x in mu],
            "product": element_json(ab),
            "reversed": element_json(ba),
            "commutator": element_json(comm),
            "poisson": element_json(bracket),
        }) + "\n")
    else:
        L, M = _charge_str(lam), _charge_str(mu)
        out.write(f"X[{L}] * X[{M}] = {ab.render()}\n")
        out.write(f"X[{M}] * X[{L}] = {ba.render()}\n")
        out.write(f"[X[{L}], X[{M}]] = {comm.render()}\n")
        out.write(f"{{X[{L}], X[{M}]}} = {bracket.render()}\n")


def cmd_higgs_hs(args, out):
    theory = _torus(parse_theory(_load(args.theory, "--theory")))
    inp = HiggsInput(theory.rank, theory.matter)
    order = _order(args.order)
    series = higgs_hilbert_series(inp, Fraction(order, 2), moment_map=args.moment_map == "on")
    if args.format == "json":
        out.write(dump_json({"command": "higgs-hs", "series": series.to_json_obj()}) + "\n")
    else:
        out.write(series.render() + "\n")


def cmd_duality(args, out):
    raw = _load(args.B, "--B")
    rows = _int_rows({"B": raw}, "B")
    if not rows:
        raise SpecError("field 'B' must have at least one row")
    report = duality_check(as_matrix(rows), Fraction(_order(args.order), 2))
    out.write(dump_json(report) + "\n")


def cmd_fiber_check(args, out):
    theory = _torus(parse_theory(_load(args.theory, "--theory")))
    w0 = _rationals(args.w0, "--w0")
    m0 = _rationals(args.m0, "--m0") if args.m0 else ()
    wit = generic_fiber_witness(theory, w0, m0)
    if args.format == "json":
        out.write(dump_json({
            "command": "fiber-check",
            "point": [format_rational(x) for x in wit.point],
            "masses": [format_rational(x) for x in wit.masses],
            "scalars": [format_rational(x) for x in wit.scalars],
            "generic": wit.all_nonzero,
        }) + "\n")
    else:
        for j, s in enumerate(wit.scalars):
            out.write(f"X[e{j + 1}] X[-e{j + 1}] = {format_rational(s)}\n")
        out.write("fiber is the dual torus\n" if wit.all_nonzero else "some witness vanishes\n")


COMMANDS = {
    "mono-hs": cmd_mono_hs,
    "alg-mul": cmd_alg_mul,
    "present": cmd_present,
    "quantize-comm": cmd_quantize_comm,
    "higgs-hs": cmd_higgs_hs,
    "duality": cmd_duality,
    "fiber-check": cmd_fiber_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coulomb", description="Coulomb branches of abelian and quiver gauge theories.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, theory=True, order=False, fmt=True):
        if theory:
            p.add_argument("--theory", required=True, help="theory JSON, inline or @path")
        if order:
            p.add_argument("--order", default="5", help="truncation order in q, e.g. 10 or 7/2")
        if fmt:
            p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("mono-hs", help="monopole-formula Hilbert series")
    common(p, order=True)
    p.add_argument("--fugacities", choices=("on", "off"), default="off")

    for name, helptext in (("alg-mul", "product of two monopole operators"),
                           ("quantize-comm", "quantized products, commutator and Poisson bracket")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--lam", help="first sector, e.g. 1 or 1,-1")
        p.add_argument("--mu", help="second sector")
        p.add_argument("--offset", default="0", choices=("0", "1/2"), help="quantized factor offset")
        p.add_argument("--seed", type=int, default=0, help="seed for sectors left unspecified")
        if name == "alg-mul":
            p.add_argument("--mode", choices=("classical", "quantized"), default="classical")
            p.add_argument("--shift", help="rational shift covector for the grading")

    p = sub.add_parser("present", help="generators and relations")
    common(p)
    p.add_argument("--degree", default="5", help="degree bound")
    p.add_argument("--gens", help="JSON list of generator sectors")
    p.add_argument("--reduced", action="store_true", help="eliminate redundant w generators")

    p = sub.add_parser("higgs-hs", help="Higgs-branch Hilbert series of a torus theory")
    common(p, order=True)
    p.add_argument("--moment-map", choices=("on", "off"), default="on")

    p = sub.add_parser("duality", help="compare Coulomb and dual Higgs series")
    common(p, theory=False, order=True, fmt=False)
    p.add_argument("--B", required=True, help="inclusion matrix as JSON rows")

    p = sub.add_parser("fiber-check", help="generic fiber witness")
    common(p)
    p.add_argument("--w0", required=True, help="point, e.g. 1/2,3")
    p.add_argument("--m0", help="mass values")
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return 1
    except DivergenceError as exc:
        err.write(f"divergent: {exc}\n")
        out.write(f"witness: {','.join(str(x) for x in exc.witness)}\n")
        return 2
    except (SpecError, CoulombError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    return 0


def main(argv=None) -> int:
    sys.exit(run(argv))
