"""Command-line front end.

Sequences are passed as JSON (inline or a file path).  Rationals travel as
``"p/q"`` strings so exact inputs stay exact.  Exit codes: 0 success, 2 bad
input, 3 inconclusive verdict, 4 failed precondition.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path as FilePath
from typing import Any, Dict, List, Optional

from . import berlanga
from .arith import Number, as_exact, format_number, is_exact
from .sequences import (
    AltDiff,
    BaseFamily,
    Combo,
    FiniteSupport,
    GeometricBase,
    PowerFamilyBase,
    SeqSpec,
    Truncation,
    Variant,
)
from .tails import SummabilityVerdict, summability_decide
from .traces import Transform, partial_sum_trace, transformed_tail
from .warsaw import (
    Category,
    Family,
    HomologyClassVerdict,
    Interleave,
    InvalidInput,
    MVForward,
    MVInverse,
    NotInL1Error,
    PreconditionFailure,
    Subsequence,
    classify,
    combo_class,
    mv_forward,
    mv_invert,
    warsaw_point,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3
EXIT_PRECONDITION = 4


class SpecError(ValueError):
    """Malformed sequence JSON; ``field`` is a dotted path to the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


# -- numbers ------------------------------------------------------------------------


def _float_out(value: float) -> float:
    return float(format(value, ".15g"))


def encode_number(value: Number):
    """Exact values as ``"p/q"`` strings, floats as 15-digit JSON numbers."""
    if is_exact(value):
        return format_number(value)
    return _float_out(float(value))


def encode_parameter(value: Fraction):
    """A JSON number when the float literal is exact, else ``"p/q"``."""
    f = float(value)
    if math.isfinite(f) and as_exact(f) == value:
        return int(f) if value.denominator == 1 else f
    return format_number(value)


def _rational(raw, field: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise SpecError(field, f"expected a rational string 'p/q', got {raw!r}")
    try:
        return as_exact(raw)
    except (ValueError, ZeroDivisionError):
        raise SpecError(field, f"not a rational number: {raw!r}") from None


def _real(raw, field: str) -> Number:
    if isinstance(raw, bool) or not isinstance(raw, (str, int, float)):
        raise SpecError(field, f"expected a number or 'p/q', got {raw!r}")
    if isinstance(raw, float):
        if not math.isfinite(raw):
            raise SpecError(field, "must be finite")
        return raw
    return _rational(raw, field)


# -- sequence codec --------------------------------------------------------------------


def _require(obj: dict, key: str, field: str):
    if key not in obj:
        raise SpecError(f"{field}.{key}", "missing")
    return obj[key]


def decode_spec(obj: Any, field: str = "seq") -> SeqSpec:
    if not isinstance(obj, dict):
        raise SpecError(field, "expected a JSON object")
    kind = obj.get("kind")
    try:
        if kind == "finite":
            values = _require(obj, "values", field)
            if not isinstance(values, list):
                raise SpecError(f"{field}.values", "expected an array")
            return FiniteSupport(tuple(_rational(v, f"{field}.values[{i}]")
                                       for i, v in enumerate(values)))
        if kind == "power_tail_base":
            return PowerFamilyBase(as_exact(_real(_require(obj, "beta", field), f"{field}.beta")))
        if kind == "geometric_base":
            return GeometricBase(as_exact(_real(_require(obj, "ratio", field), f"{field}.ratio")))
        if kind == "alt_diff":
            base = decode_spec(_require(obj, "base", field), f"{field}.base")
            if not isinstance(base, BaseFamily):
                raise SpecError(f"{field}.base", "must be power_tail_base or geometric_base")
            return AltDiff(base)
        if kind == "truncation":
            of = decode_spec(_require(obj, "of", field), f"{field}.of")
            n = _require(obj, "n", field)
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                raise SpecError(f"{field}.n", "expected a non-negative integer")
            variant = obj.get("variant", "corrected")
            if variant not in ("printed", "corrected"):
                raise SpecError(f"{field}.variant", "expected 'printed' or 'corrected'")
            if not isinstance(of, AltDiff):
                raise SpecError(f"{field}.of", "truncations are defined for alt_diff sequences")
            return Truncation(of, n, Variant(variant))
        if kind == "combo":
            terms = _require(obj, "terms", field)
            if not isinstance(terms, list):
                raise SpecError(f"{field}.terms", "expected an array")
            pairs = []
            for i, t in enumerate(terms):
                sub = f"{field}.terms[{i}]"
                if not isinstance(t, dict):
                    raise SpecError(sub, "expected an object with coeff and spec")
                coeff = _real(_require(t, "coeff", sub), f"{sub}.coeff")
                pairs.append((coeff, decode_spec(_require(t, "spec", sub), f"{sub}.spec")))
            return Combo(tuple(pairs))
        if kind == "mv_forward":
            return MVForward(decode_spec(_require(obj, "m", field), f"{field}.m"))
        if kind == "mv_inverse":
            return MVInverse(decode_spec(_require(obj, "x", field), f"{field}.x"))
        if kind == "interleave":
            return Interleave(decode_spec(_require(obj, "u", field), f"{field}.u"),
                              decode_spec(_require(obj, "l", field), f"{field}.l"))
        if kind == "subsequence":
            offset = _require(obj, "offset", field)
            if offset not in (0, 1) or isinstance(offset, bool):
                raise SpecError(f"{field}.offset", "expected 0 or 1")
            return Subsequence(decode_spec(_require(obj, "x", field), f"{field}.x"), offset)
    except SpecError:
        raise
    except (TypeError, ValueError) as exc:
        raise SpecError(field, str(exc)) from None
    raise SpecError(f"{field}.kind", f"unknown kind {kind!r}")


def encode_spec(spec: SeqSpec) -> Dict[str, Any]:
    if isinstance(spec, FiniteSupport):
        return {"kind": "finite", "values": [format_number(v) for v in spec.values]}
    if isinstance(spec, PowerFamilyBase):
        return {"kind": "power_tail_base", "beta": encode_parameter(spec.beta)}
    if isinstance(spec, GeometricBase):
        return {"kind": "geometric_base", "ratio": encode_parameter(spec.ratio)}
    if isinstance(spec, AltDiff):
        return {"kind": "alt_diff", "base": encode_spec(spec.base)}
    if isinstance(spec, Truncation):
        return {"kind": "truncation", "of": encode_spec(spec.of), "n": spec.n,
                "variant": spec.variant.value}
    if isinstance(spec, Combo):
        # full repr for float coefficients so that decoding gives the same spec back
        return {"kind": "combo", "terms": [{"coeff": format_number(c) if is_exact(c) else float(c),
                                            "spec": encode_spec(s)} for c, s in spec.terms_]}
    if isinstance(spec, MVForward):
        return {"kind": "mv_forward", "m": encode_spec(spec.m)}
    if isinstance(spec, MVInverse):
        return {"kind": "mv_inverse", "x": encode_spec(spec.x)}
    if isinstance(spec, Interleave):
        return {"kind": "interleave", "u": encode_spec(spec.u), "l": encode_spec(spec.l)}
    if isinstance(spec, Subsequence):
        return {"kind": "subsequence", "x": encode_spec(spec.x), "offset": spec.offset}
    raise TypeError(f"no JSON encoding for {type(spec).__name__}")


def load_json_arg(raw: str, field: str) -> Any:
    """Inline JSON, or a path to a JSON file."""
    text = raw
    if not raw.lstrip().startswith(("{", "[")):
        try:
            text = FilePath(raw).read_text()
        except OSError as exc:
            raise SpecError(field, f"not inline JSON and not a readable file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(field, f"invalid JSON: {exc.msg} at position {exc.pos}") from None


def parse_base(raw: str) -> AltDiff:
    """``power:<beta>``, ``geometric:<ratio>``, or sequence JSON."""
    if ":" in raw and not raw.lstrip().startswith("{"):
        name, _, value = raw.partition(":")
        try:
            param = as_exact(value)
        except (ValueError, ZeroDivisionError):
            raise SpecError("base", f"bad parameter {value!r}") from None
        try:
            if name in ("power", "power_tail_base"):
                return AltDiff(PowerFamilyBase(param))
            if name in ("geometric", "geometric_base"):
                return AltDiff(GeometricBase(param))
        except ValueError as exc:
            raise SpecError("base", str(exc)) from None
        raise SpecError("base", f"unknown family {name!r}; use power or geometric")
    spec = decode_spec(load_json_arg(raw, "base"), "base")
    if isinstance(spec, BaseFamily):
        spec = AltDiff(spec)
    if not isinstance(spec, AltDiff):
        raise SpecError("base.kind", "expected alt_diff or a base family")
    return spec


# -- report pieces ------------------------------------------------------------------


def encode_summability(v: SummabilityVerdict) -> Dict[str, Any]:
    return {
        "status": v.status.value,
        "rule": v.rule,
        "parameter": None if v.parameter is None else encode_number(v.parameter),
        "detail": v.detail,
    }


def encode_verdict(v: HomologyClassVerdict) -> Dict[str, Any]:
    alpha = None
    if v.alpha is not None and v.category is Category.SINGULAR:
        alpha = encode_number(v.alpha)
    elif v.category is Category.BOUNDARY:
        alpha = "0"
    return {
        "category": v.category.value,
        "alpha": alpha,
        "alpha_error": _float_out(v.alpha_error),
        "witness": [encode_summability(e) for e in v.evidence],
    }


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _verdict_text(v: HomologyClassVerdict) -> List[str]:
    head = v.category.value
    if v.category is Category.SINGULAR:
        head += f"(alpha = {format_number(v.alpha)})"
        if v.alpha_error:
            head += f" +/- {v.alpha_error:.3g}"
    lines = [head]
    lines += [f"  {e.status.value:<12} {e.rule}: {e.detail}" for e in v.evidence]
    return lines


def _exit_for(v: HomologyClassVerdict) -> int:
    return EXIT_INCONCLUSIVE if v.category is Category.INCONCLUSIVE else EXIT_OK


def _csv_list(raw: str, field: str, convert) -> list:
    items = [s.strip() for s in raw.split(",") if s.strip()]
    if not items:
        raise SpecError(field, "empty list")
    out = []
    for item in items:
        try:
            out.append(convert(item))
        except (ValueError, ZeroDivisionError):
            raise SpecError(field, f"bad entry {item!r}") from None
    return out


# -- commands ------------------------------------------------------------------------


def cmd_classify(args) -> int:
    spec = decode_spec(load_json_arg(args.seq, "seq"))
    verdict = classify(spec)
    if args.format == "json":
        print(_dump({"command": "classify", "inputs": encode_spec(spec),
                     "verdict": encode_verdict(verdict)}))
    else:
        print("\n".join(_verdict_text(verdict)))
    return _exit_for(verdict)


def cmd_mv(args) -> int:
    spec = decode_spec(load_json_arg(args.seq, "seq"))
    result = mv_forward(spec) if args.direction == "forward" else mv_invert(spec)
    terms = [format_number(result.term(k)) for k in range(args.terms)]
    l1 = None
    tail = result.abs_tail()
    if tail is not None:
        l1 = summability_decide(tail)
    if args.format == "json":
        print(_dump({"command": f"mv {args.direction}", "inputs": encode_spec(spec),
                     "result": encode_spec(result), "terms": terms,
                     "l1": None if l1 is None else encode_summability(l1)}))
    else:
        print(f"{args.direction}: {result!r}")
        for k, t in enumerate(terms):
            print(f"  {k:>4}  {t}")
        if l1 is not None:
            print(f"  l1: {l1.status.value} ({l1.rule})")
    return EXIT_OK


def cmd_points(args) -> int:
    if args.count < 0:
        raise SpecError("count", "must be non-negative")
    rows = []
    for k in range(args.count):
        p = warsaw_point(args.family, k)
        x, y = p.coords
        rows.append({"index": k, "x": format(x, ".15g"), "x_symbolic": p.symbolic_x,
                     "y": format(y, ".15g")})
    if args.format == "json":
        print(_dump({"command": "points", "inputs": {"family": args.family, "count": args.count},
                     "points": rows}))
    else:
        for r in rows:
            print(f"{args.family}{r['index']:<4} x = {r['x']:<18} ({r['x_symbolic']})  y = {r['y']}")
    return EXIT_OK


def cmd_independence(args) -> int:
    betas = _csv_list(args.betas, "betas", as_exact)
    coeffs = _csv_list(args.coeffs, "coeffs", as_exact)
    verdict = combo_class(betas, coeffs)
    if args.format == "json":
        print(_dump({"command": "independence",
                     "inputs": {"betas": [encode_parameter(b) for b in betas],
                                "coeffs": [format_number(c) for c in coeffs]},
                     "nonzero_class": verdict.nonzero,
                     "verdict": encode_verdict(verdict)}))
    else:
        print("\n".join(_verdict_text(verdict)))
    return _exit_for(verdict)


def cmd_diagnostics(args) -> int:
    spec = decode_spec(load_json_arg(args.seq, "seq"))
    checkpoints = _csv_list(args.checkpoints, "checkpoints", int) if args.checkpoints else []
    if any(c < 1 or c > args.terms for c in checkpoints):
        raise SpecError("checkpoints", "must lie in [1, terms]")
    trace = partial_sum_trace(spec, args.transform, args.terms, checkpoints)
    tail = transformed_tail(spec, args.transform)
    verdict = summability_decide(tail) if tail is not None else None
    csv = trace.to_csv()
    if args.csv:
        FilePath(args.csv).write_text(csv)
    if args.format == "json":
        report = {"command": "diagnostics", "inputs": encode_spec(spec),
                  "transform": Transform(args.transform).value,
                  "summability": None if verdict is None else encode_summability(verdict),
                  "trace": args.csv,
                  "checkpoints": [{"N": c.n, "partial_sum": _float_out(c.partial_sum),
                                   "residual": _float_out(c.residual)}
                                  for c in trace.checkpoints],
                  "overflow": trace.overflow}
        if verdict is not None and verdict.divergent:
            report["lower_bound"] = _float_out(verdict.lower_bound(args.terms))
        print(_dump(report))
    elif not args.csv:
        sys.stdout.write(csv)
    return EXIT_OK


def _functions(raw: str):
    if raw == "default":
        return list(berlanga.DEFAULT_SUITE)
    names = _csv_list(raw, "functions", str)
    unknown = [n for n in names if n not in berlanga.NAMED_FUNCTIONS]
    if unknown:
        raise SpecError("functions", f"unknown function {unknown[0]!r}; "
                                     f"choose from {', '.join(sorted(berlanga.NAMED_FUNCTIONS))}")
    return [berlanga.NAMED_FUNCTIONS[n] for n in names]


def cmd_demo(args) -> int:
    base = parse_base(args.base)
    n_values = _csv_list(args.n_values, "n-values", int)
    cert = berlanga.non_hausdorff_demo(base, n_values, _functions(args.functions),
                                       printed_up_to=args.printed_up_to)
    report = cert.convergence
    if args.format == "json":
        print(_dump({
            "command": "demo",
            "inputs": {"base": encode_spec(base), "n_values": n_values,
                       "functions": list(report.functions)},
            "base_divergence": encode_summability(cert.base_divergence),
            "truncations": [{"n": n, "verdict": encode_verdict(v)} for n, v in cert.truncations],
            "printed_truncations": [{"n": n, "verdict": encode_verdict(v)}
                                    for n, v in cert.printed],
            "convergence": {
                "rows": [{"n": r.n,
                          "values": [_float_out(v) for v in r.values],
                          "bounds": [_float_out(v) for v in r.bounds],
                          "errors": [_float_out(v) for v in r.errors],
                          "within_bounds": r.within_bounds} for r in report.rows],
                "bounds_decreasing": report.bounds_decreasing,
            },
            "verdict": encode_verdict(cert.limit),
            "certified": cert.certified,
        }))
    else:
        print(f"base {base!r}: sum n_k diverges ({cert.base_divergence.rule})")
        for n, v in cert.truncations:
            print(f"  truncation n={n:<6} {v.category.value}")
        for n, v in cert.printed:
            print(f"  printed    n={n:<6} {_verdict_text(v)[0]}")
        print("  n       " + "  ".join(f"|L_{f}| / bound" for f in report.functions))
        for r in report.rows:
            cells = "  ".join(f"{v:.3e}/{b:.3e}" for v, b in zip(r.values, r.bounds))
            print(f"  {r.n:<7} {cells}")
        print(f"  limit: {cert.limit.category.value}")
        print("certified" if cert.certified else "NOT certified")
    return EXIT_OK if cert.certified else EXIT_INCONCLUSIVE


# -- entry point --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="warsaw-homology",
                     description="Measure homology computations for the Warsaw circle.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_format(p):
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("classify", help="class of a sequence in H_0(W)")
    p.add_argument("--seq", required=True, help="sequence JSON, inline or a file path")
    add_format(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("mv", help="Mayer-Vietoris map or its inverse")
    p.add_argument("direction", choices=("forward", "invert"))
    p.add_argument("--seq", required=True)
    p.add_argument("--terms", type=int, default=10, help="number of terms to tabulate")
    add_format(p)
    p.set_defaults(func=cmd_mv)

    p = sub.add_parser("points", help="coordinates of the distinguished points")
    p.add_argument("--family", choices=[f.value for f in Family], required=True)
    p.add_argument("--count", type=int, required=True)
    add_format(p)
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("independence", help="class of a combination of power families")
    p.add_argument("--betas", required=True, help="comma-separated exponents in (0, 1)")
    p.add_argument("--coeffs", required=True, help="comma-separated coefficients")
    add_format(p)
    p.set_defaults(func=cmd_independence)

    p = sub.add_parser("diagnostics", help="compensated partial-sum trace")
    p.add_argument("--seq", required=True)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--checkpoints", default="")
    p.add_argument("--transform", choices=[t.value for t in Transform],
                   default=Transform.IDENTITY.value)
    p.add_argument("--csv", help="write the trace to this CSV file")
    p.add_argument("--format", choices=("json", "text"), default="text",
                   help="text prints the CSV")
    p.set_defaults(func=cmd_diagnostics)

    p = sub.add_parser("demo", help="non-Hausdorff certificate for a divergent base")
    p.add_argument("--base", required=True, help="power:<beta>, geometric:<ratio> or JSON")
    p.add_argument("--n-values", default="10,100,1000,10000")
    p.add_argument("--functions", default="default",
                   help="'default' or a comma list of 1,x,y,xy,x2")
    p.add_argument("--printed-up-to", type=int, default=1000,
                   help="also classify printed-variant truncations up to this n")
    add_format(p)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except PreconditionFailure as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (SpecError, InvalidInput, NotInL1Error) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, TypeError, ZeroDivisionError, OverflowError, RecursionError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
