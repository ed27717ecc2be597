"""Command-line front end.

Subcommands: dims, tube, zeta, content, compare, validate.  Inputs are the
builtin names (cantor3, fibonacci2, euler:p) or a path to a system JSON file.
Output is deterministic byte for byte for a fixed configuration: floats are
rendered with repr (shortest round-trip), exact rationals as decimals with 15
significant digits (round-half-even) plus num/den strings in JSON.

Exit codes: 0 success, 1 invalid input, 2 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys as _sys
from concurrent.futures import ThreadPoolExecutor
from decimal import ROUND_HALF_EVEN, Context
from fractions import Fraction
from pathlib import Path

from .archimedean import comparison_report
from .dimensions import dimension_set_from_zeta
from .errors import InternalConsistencyError, PadicStringsError
from .minkowski import content_report
from .strings import (
    SelfSimilarSystem,
    cantor_string_3,
    enumerate_intervals,
    euler_string,
    fibonacci_string_2,
    spectrum_of,
    validate_system,
)
from .tubes import (
    euler_dimension_data,
    system_dimension_data,
    euler_tube_rows,
    grid_avoiding_jumps,
    system_tube_rows,
)
from .zeta import zeta_eval, zeta_partial_sum

_DECIMAL_CTX = Context(prec=15, rounding=ROUND_HALF_EVEN)


def rational_str(x: Fraction) -> str:
    """Decimal rendering at 15 significant digits, round-half-even."""
    return str(_DECIMAL_CTX.divide(x.numerator, x.denominator))


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("PADIC_STRINGS_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Order-preserving map, threaded when PADIC_STRINGS_THREADS > 1."""
    workers = _thread_count()
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def load_input(name: str):
    """Resolve a builtin name or JSON path to ('system', sys) or ('euler', p)."""
    if name == "cantor3":
        return "system", cantor_string_3()
    if name == "fibonacci2":
        return "system", fibonacci_string_2()
    if name.startswith("euler:"):
        return "euler", int(name.split(":", 1)[1])
    path = Path(name)
    if not path.exists():
        raise ValueError(f"unknown input {name!r}: not a builtin and not a file")
    return "system", SelfSimilarSystem.from_json(path.read_text())


def _parse_range(text: str) -> tuple[float, float]:
    if ".." not in text:
        raise ValueError(f"range must look like start..stop, got {text!r}")
    lo, hi = text.split("..", 1)
    return float(lo), float(hi)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        _sys.stdout.write(text)


def _csv(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(r) for r in rows)
    return "\n".join(lines) + "\n"


def cmd_dims(args) -> int:
    kind, obj = load_input(args.input)
    if kind == "euler":
        rz, ds = euler_dimension_data(obj)
    else:
        rz, ds = system_dimension_data(obj)
    payload = {"input": args.input, **ds.to_json_obj()}
    if args.format == "csv":
        rows = [
            [repr(l["re"]), repr(l["im"]), str(l["multiplicity"]),
             repr(l["residue_re"]), repr(l["residue_im"])]
            for l in payload["lines"]
        ]
        text = _csv(["re", "im", "multiplicity", "residue_re", "residue_im"], rows)
    else:
        text = json.dumps(payload, indent=2) + "\n"
    _emit(text, args.out)
    return 0


def cmd_tube(args) -> int:
    kind, obj = load_input(args.input)
    start, stop = _parse_range(args.eps)
    if kind == "euler":
        grid = grid_avoiding_jumps(start, stop, args.count, obj, 1)
        rows = parallel_map(lambda e: euler_tube_rows(obj, [e], args.n_max)[0], grid)
    else:
        grid = grid_avoiding_jumps(start, stop, args.count, obj.p, obj.d)
        rows = parallel_map(lambda e: system_tube_rows(obj, [e], args.n_max)[0], grid)
    if args.format == "json":
        payload = [
            {
                "eps": r["eps"],
                "V_direct": f"{r['V_direct'].numerator}/{r['V_direct'].denominator}",
                "V_direct_decimal": rational_str(r["V_direct"]),
                "V_series": r["V_series"],
                "abs_error": r["abs_error"],
                "n_max": r["n_max"],
            }
            for r in rows
        ]
        text = json.dumps({"input": args.input, "rows": payload}, indent=2) + "\n"
    else:
        table = [
            [repr(r["eps"]), rational_str(r["V_direct"]), repr(r["V_series"]),
             repr(r["abs_error"]), str(r["n_max"])]
            for r in rows
        ]
        text = _csv(["eps", "V_direct", "V_series", "abs_error", "n_max"], table)
    _emit(text, args.out)
    return 0


def cmd_zeta(args) -> int:
    kind, obj = load_input(args.input)
    if kind == "euler":
        rz, _ = euler_dimension_data(obj)
        ls = euler_string(obj)
    else:
        rz, _ = system_dimension_data(obj)
        ls = spectrum_of(obj)
    start, stop = _parse_range(args.eps)  # reused flag: the Re(s) range
    count = args.count
    svals = [start + (stop - start) * i / max(count - 1, 1) for i in range(count)]

    def row(s):
        closed = zeta_eval(rz, s)
        partial, tail = zeta_partial_sum(ls, s, 400)
        return {
            "s": s,
            "zeta_re": closed.real,
            "zeta_im": closed.imag,
            "partial_re": partial.real,
            "tail_bound": tail if math.isfinite(tail) else None,
        }

    rows = parallel_map(row, svals)
    if args.format == "json":
        text = json.dumps({"input": args.input, "rows": rows}, indent=2) + "\n"
    else:
        table = [
            [repr(r["s"]), repr(r["zeta_re"]), repr(r["zeta_im"]),
             repr(r["partial_re"]), repr(r["tail_bound"])]
            for r in rows
        ]
        text = _csv(["s", "zeta_re", "zeta_im", "partial_re", "tail_bound"], table)
    _emit(text, args.out)
    return 0


def _parse_T(text: str | None, sys_obj: SelfSimilarSystem) -> float | None:
    if text is None:
        return None
    if text.startswith("r^-"):
        return float(1 / sys_obj.r) ** int(text[3:])
    return float(text)


def cmd_content(args) -> int:
    kind, obj = load_input(args.input)
    if kind == "euler":
        raise ValueError("content requires a self-similar input (builtin or JSON)")
    report = content_report(obj, _parse_T(args.T, obj))
    payload = {"input": args.input, **report.to_json_obj()}
    if args.format == "csv":
        keys = ["D", "M_av_numeric", "M_av_closed", "relative_gap",
                "oscillation_ratio", "T"]
        text = _csv(keys, [[repr(payload[k]) for k in keys]])
    else:
        text = json.dumps(payload, indent=2) + "\n"
    _emit(text, args.out)
    return 0


def cmd_compare(args) -> int:
    start, stop = _parse_range(args.eps)
    grid = grid_avoiding_jumps(start, stop, args.count, 3, 1)
    report = comparison_report(grid, n_max=args.n_max)
    if args.format == "json":
        text = json.dumps(report.to_json_obj(), indent=2) + "\n"
    else:
        table = [
            [repr(r.eps), rational_str(r.v_cs_direct), repr(r.v_cs_series),
             rational_str(r.v_cs3_direct), repr(r.v_cs3_series),
             repr(r.g_cs), repr(r.g_cs3)]
            for r in report.rows
        ]
        text = _csv(
            ["eps", "V_CS_direct", "V_CS_series", "V_CS3_direct", "V_CS3_series",
             "G_CS", "G_CS3"],
            table,
        )
    _emit(text, args.out)
    return 0


def cmd_validate(args) -> int:
    kind, obj = load_input(args.input)
    if kind == "euler":
        _emit(json.dumps({"input": args.input, "valid": True, "violations": []}) + "\n",
              args.out)
        return 0
    report = validate_system(obj)
    violations = list(report.violations)
    if report.valid and args.depth > 0 and obj.maps is not None and obj.gap_balls is not None:
        # deeper certificate: enumerate intervals and require disjointness
        try:
            enumerate_intervals(obj, args.depth)
        except Exception as exc:  # overlap or precision failure
            violations.append(f"depth-{args.depth} enumeration failed: {exc}")
    payload = {
        "input": args.input,
        "valid": not violations,
        "violations": violations,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0 if not violations else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padic-strings",
        description="p-adic fractal strings: dimensions, zeta functions, tube formulas",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, eps_default="1e-6..0.2", count_default=50):
        p.add_argument("--input", default="cantor3",
                       help="builtin (cantor3, fibonacci2, euler:p) or system JSON path")
        p.add_argument("--eps", default=eps_default, help="range start..stop")
        p.add_argument("--count", type=int, default=count_default)
        p.add_argument("--n-max", type=int, default=2000, dest="n_max")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p_dims = sub.add_parser("dims", help="complex dimensions as JSON/CSV")
    common(p_dims)
    p_dims.set_defaults(fn=cmd_dims)

    p_tube = sub.add_parser("tube", help="oracle vs series tube volumes over a grid")
    common(p_tube)
    p_tube.set_defaults(fn=cmd_tube, format="csv")

    p_zeta = sub.add_parser("zeta", help="zeta values on a real s-grid (--eps = s range)")
    common(p_zeta, eps_default="0.8..2.0", count_default=13)
    p_zeta.set_defaults(fn=cmd_zeta)

    p_content = sub.add_parser("content", help="average Minkowski content report")
    common(p_content)
    p_content.add_argument("--T", default=None,
                           help="Cesaro horizon: a float or r^-N (default r^-40)")
    p_content.set_defaults(fn=cmd_content)

    p_cmp = sub.add_parser("compare", help="real vs 3-adic Cantor comparison table")
    common(p_cmp, eps_default="1e-5..0.15", count_default=20)
    p_cmp.set_defaults(fn=cmd_compare, format="csv")

    p_val = sub.add_parser("validate", help="check a system description")
    common(p_val)
    p_val.add_argument("--depth", type=int, default=0,
                       help="also enumerate intervals to this depth and check disjointness")
    p_val.set_defaults(fn=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=_sys.stderr)
        return 2
    except (ValueError, OSError, PadicStringsError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
