"""Command-line interface producing deterministic JSON analysis reports.

Subcommands:

    analyze <spec.toml> [--max-degree N] [--exp-rate lx,lh,lz]...
        Full report for an explicit metric: curvature summary, solved
        symmetry basis, algebra class, isotropy at the base point, orbit
        ranks at fixed sample offsets, and the degeneracy locus.

    family --C p/q --D p/q [--full]
        Geometry classification of one member of the built-in
        two-parameter family (--C multiplies the z^2 dh^2 term, --D the
        z dx dh term).  --full appends the complete analysis sections.

    sweep --grid min:max:step [--jobs N] --out dir
        Classification over the square parameter grid, one JSON file per
        cell plus a summary; the merge order is sorted, so output is
        byte-identical for any --jobs value.

    cartan-check
        Self-test of the frame-curvature representation layer: the
        generator table, equivariance on random exact group elements, the
        curvature/Ricci bridge at adapted frames, and the structure
        identity for symmetry pairs.

    solve-killing <spec.toml> --max-degree N
        Just the solved symmetry basis and its dimension.

Metric TOML schema: a [metric] table with the six component expressions
gxx, gxh, gxz, ghh, ghz, gzz (strings in variables x, h, z and the names
declared under [params]) and base_point, a list of three rationals; an
optional [params] table maps parameter names to rational strings "p/q".

Reports are a single JSON object with a fixed key order.  Rationals print
as "p/q" strings, polynomials in the canonical graded-lex form of the
expression layer, so every echoed component re-parses to the exact same
polynomial.  Exit codes: 0 success, 1 analysis error (an engine
cross-check failed), 2 input error (unreadable, malformed, or
inconsistent input).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import cartan
from .exactalg import (
    ParseError,
    ep_to_string,
    mat_equal,
    mat_inverse,
    mat_mul,
    mat_neg,
    parse_expr,
    poly_to_string,
    rf_to_string,
)
from .families import (
    FamilyParams,
    classify_family,
    family_metric,
    family_params,
    scaling_killing_field,
)
from .geometry import (
    Metric,
    coordinate_field,
    constant_curvature,
    make_metric,
    metric_determinant,
    ricci_char_poly,
    scalar_invariants,
    scalar_invariants_constant,
)
from .killing import (
    evaluation_rank,
    isotropy_subalgebra,
    solve_killing,
    vol_determinant,
)
from .liealg import NonClosureError, classify, classify_o21_element, structure_constants

TOOL_NAME = "lorentz3d"

COMPONENT_KEYS = (
    ("gxx", 0, 0),
    ("gxh", 0, 1),
    ("gxz", 0, 2),
    ("ghh", 1, 1),
    ("ghz", 1, 2),
    ("gzz", 2, 2),
)

ORBIT_OFFSETS = ((0, 0, 0), (0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 1))


class InputError(Exception):
    """Unreadable, malformed, or inconsistent command input."""


# ---------------------------------------------------------------------------
# input handling
# ---------------------------------------------------------------------------

def _fraction(text, label: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise InputError("%s: not a rational number: %r" % (label, text))


def load_metric_spec(path: str) -> Tuple[Metric, Dict[str, Fraction]]:
    """Parse and validate a metric TOML file; raises InputError with a
    pointed message (parse errors include their position)."""
    try:
        raw = Path(path).read_bytes()
    except OSError as err:
        raise InputError("cannot read %s: %s" % (path, err))
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as err:
        raise InputError("invalid TOML in %s: %s" % (path, err))

    metric_table = data.get("metric")
    if not isinstance(metric_table, dict):
        raise InputError("missing [metric] table")
    metric_table = dict(metric_table)

    params_table = data.get("params", {})
    if not isinstance(params_table, dict):
        raise InputError("[params] must be a table of rational strings")
    params: Dict[str, Fraction] = {}
    for name in sorted(params_table):
        value = params_table[name]
        if not isinstance(value, str):
            raise InputError(
                'parameter %s must be a rational string like "3/4"' % name
            )
        params[name] = _fraction(value, "parameter %s" % name)

    base = metric_table.pop("base_point", None)
    if not isinstance(base, list) or len(base) != 3:
        raise InputError("[metric] base_point must be a list of three rationals")
    point = tuple(_fraction(v, "base_point") for v in base)

    rows: List[List[Optional[dict]]] = [[None] * 3 for _ in range(3)]
    for key, i, j in COMPONENT_KEYS:
        if key not in metric_table:
            raise InputError("missing metric component %s" % key)
        text = metric_table.pop(key)
        if not isinstance(text, str):
            raise InputError("component %s must be an expression string" % key)
        try:
            entry = parse_expr(text, params)
        except ParseError as err:
            raise InputError("component %s: %s" % (key, err))
        rows[i][j] = entry
        rows[j][i] = entry
    if metric_table:
        raise InputError(
            "unknown keys in [metric]: %s" % ", ".join(sorted(metric_table))
        )
    try:
        return make_metric(rows, point), params
    except ValueError as err:
        raise InputError(str(err))


def _parse_rates(raw_rates: Sequence[str]) -> List[Tuple[Fraction, ...]]:
    """--exp-rate values into a canonical rate list (zero rate first)."""
    rates: List[Tuple[Fraction, ...]] = [
        (Fraction(0), Fraction(0), Fraction(0))
    ]
    for raw in raw_rates:
        parts = raw.split(",")
        if len(parts) != 3:
            raise InputError(
                "--exp-rate expects three comma-separated rationals, got %r" % raw
            )
        rate = tuple(_fraction(p, "--exp-rate") for p in parts)
        if rate not in rates:
            rates.append(rate)
    return rates


def _parse_grid(raw: str) -> List[Fraction]:
    parts = raw.split(":")
    if len(parts) != 3:
        raise InputError("--grid expects min:max:step, got %r" % raw)
    lo = _fraction(parts[0], "--grid min")
    hi = _fraction(parts[1], "--grid max")
    step = _fraction(parts[2], "--grid step")
    if step <= 0:
        raise InputError("--grid step must be positive")
    if lo > hi:
        raise InputError("--grid min exceeds max")
    values = []
    v = lo
    while v <= hi:
        values.append(v)
        v += step
    return values


# ---------------------------------------------------------------------------
# report sections
# ---------------------------------------------------------------------------

def _frac_str(value: Fraction) -> str:
    return str(Fraction(value))


def _rate_str(rate) -> str:
    return "%s,%s,%s" % tuple(_frac_str(v) for v in rate)


def _metric_section(g: Metric, params: Dict[str, Fraction]) -> dict:
    section = {}
    for key, i, j in COMPONENT_KEYS:
        section[key] = poly_to_string(g.components[i][j])
    section["base_point"] = [_frac_str(v) for v in g.base_point]
    section["params"] = {name: _frac_str(params[name]) for name in sorted(params)}
    section["det"] = poly_to_string(metric_determinant(g))
    return section


def _curvature_section(g: Metric) -> dict:
    k = constant_curvature(g)
    return {
        "constant_curvature": "none" if k is None else _frac_str(k),
        "ricci_char_poly": [rf_to_string(e) for e in ricci_char_poly(g)],
        "scalar_invariants": [rf_to_string(t) for t in scalar_invariants(g)],
        "scalar_invariants_constant": scalar_invariants_constant(g),
    }


def _killing_section(
    g: Metric,
    max_degree: int,
    rates,
    locus_triple=None,
) -> dict:
    basis = solve_killing(g, max_degree, exp_rates=rates)
    fields = basis.fields
    section = {
        "max_degree": max_degree,
        "exp_rates": [_rate_str(r) for r in rates],
        "dimension": len(fields),
        "basis": [[ep_to_string(c) for c in f.components] for f in fields],
    }

    closed = True
    algebra = None
    if fields:
        try:
            algebra = structure_constants(fields)
        except NonClosureError:
            closed = False
    section["bracket_closed"] = closed
    algebra_class = None
    if algebra is not None and algebra.dim in (3, 4, 6):
        algebra_class = str(classify(algebra))
    section["algebra_class"] = algebra_class

    try:
        iso = isotropy_subalgebra(fields, g.base_point) if fields else []
        iso_dim: Optional[int] = len(iso)
    except ValueError:
        iso, iso_dim = [], None
    section["isotropy_dimension"] = iso_dim
    o21_class = None
    if iso_dim == 1:
        try:
            frame = cartan.adapted_frame(g, g.base_point)
            _, rotation = cartan.omega_of_killing(g, iso[0], frame, g.base_point)
            o21_class = classify_o21_element(rotation)
        except ValueError:
            o21_class = None
    section["isotropy_o21_class"] = o21_class

    samples = []
    for offset in ORBIT_OFFSETS:
        pt = tuple(g.base_point[i] + offset[i] for i in range(3))
        samples.append(
            {
                "point": [_frac_str(v) for v in pt],
                "rank": evaluation_rank(fields, pt),
            }
        )
    section["orbit_rank_samples"] = samples

    triple = locus_triple
    if triple is None and len(fields) == 3:
        triple = fields
    section["degeneracy_locus"] = (
        ep_to_string(vol_determinant(triple)) if triple is not None else None
    )
    # the locus polynomial is a coordinate determinant; the invariant volume
    # of the spanned parallelepiped carries this extra metric factor
    section["volume_metric_factor"] = "sqrt(|%s|)" % poly_to_string(
        metric_determinant(g)
    )
    return section


def _geometry_section(verdict) -> dict:
    return {
        "tag": verdict.tag,
        "curvature_constant": (
            "none"
            if verdict.curvature_constant is None
            else _frac_str(verdict.curvature_constant)
        ),
        "symmetry_dimension": verdict.symmetry_dimension,
        "algebra_class": (
            None if verdict.algebra is None else str(verdict.algebra)
        ),
        "ricci_char_poly": (
            None
            if verdict.char_coefficients is None
            else [_frac_str(c) for c in verdict.char_coefficients]
        ),
        "double_eigenvalue": (
            None
            if verdict.double_eigenvalue is None
            else _frac_str(verdict.double_eigenvalue)
        ),
        "center_in_ricci_kernel": verdict.center_in_ricci_kernel,
    }


def _family_report(params: FamilyParams, full: bool) -> dict:
    report = {
        "tool": TOOL_NAME,
        "mode": "family",
        "parameters": {"C": _frac_str(params.a), "D": _frac_str(params.b)},
        "geometry_class": _geometry_section(classify_family(params)),
    }
    if full:
        g = family_metric(params)
        rates = [(Fraction(0),) * 3]
        minus_b = (-params.b, Fraction(0), Fraction(0))
        if minus_b not in rates:
            rates.append(minus_b)
        report["metric"] = _metric_section(g, {})
        report["curvature"] = _curvature_section(g)
        report["killing"] = _killing_section(
            g,
            2,
            rates,
            locus_triple=(
                coordinate_field(0),
                coordinate_field(1),
                scaling_killing_field(),
            ),
        )
    return report


def _emit(report: dict) -> None:
    print(json.dumps(report, indent=2))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_analyze(args) -> int:
    g, params = load_metric_spec(args.spec)
    rates = _parse_rates(args.exp_rate or [])
    if not 0 <= args.max_degree <= 6:
        raise InputError("--max-degree must be between 0 and 6")
    report = {
        "tool": TOOL_NAME,
        "mode": "analyze",
        "input": args.spec,
        "metric": _metric_section(g, params),
        "curvature": _curvature_section(g),
        "killing": _killing_section(g, args.max_degree, rates),
    }
    _emit(report)
    return 0


def _cmd_solve_killing(args) -> int:
    g, params = load_metric_spec(args.spec)
    if not 0 <= args.max_degree <= 6:
        raise InputError("--max-degree must be between 0 and 6")
    rates = _parse_rates([])
    basis = solve_killing(g, args.max_degree, exp_rates=rates)
    report = {
        "tool": TOOL_NAME,
        "mode": "solve-killing",
        "input": args.spec,
        "metric": _metric_section(g, params),
        "max_degree": args.max_degree,
        "exp_rates": [_rate_str(r) for r in rates],
        "dimension": len(basis.fields),
        "basis": [[ep_to_string(c) for c in f.components] for f in basis.fields],
    }
    _emit(report)
    return 0


def _cmd_family(args) -> int:
    params = family_params(
        _fraction(args.C, "--C"), _fraction(args.D, "--D")
    )
    _emit(_family_report(params, args.full))
    return 0


def _slug(value: Fraction) -> str:
    return _frac_str(value).replace("-", "m").replace("/", "over")


def _sweep_cell(cell: Tuple[str, str]) -> dict:
    return _family_report(family_params(Fraction(cell[0]), Fraction(cell[1])), False)


def _cmd_sweep(args) -> int:
    values = _parse_grid(args.grid)
    if args.jobs < 1:
        raise InputError("--jobs must be at least 1")
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise InputError("cannot create output directory %s: %s" % (args.out, err))

    cells = [
        (_frac_str(a), _frac_str(b)) for a in values for b in values
    ]  # values ascend, so this order is already sorted and deterministic
    if args.jobs == 1:
        reports = [_sweep_cell(cell) for cell in cells]
    else:
        from multiprocessing import Pool

        with Pool(args.jobs) as pool:
            reports = pool.map(_sweep_cell, cells)

    summary_cells = []
    for (a, b), report in zip(cells, reports):
        name = "cell_%s_%s.json" % (_slug(Fraction(a)), _slug(Fraction(b)))
        (out_dir / name).write_text(
            json.dumps(report, indent=2) + "\n", encoding="utf-8"
        )
        summary_cells.append(
            {"C": a, "D": b, "tag": report["geometry_class"]["tag"]}
        )
    summary = {
        "tool": TOOL_NAME,
        "mode": "sweep",
        "grid": args.grid,
        "cell_count": len(cells),
        "cells": summary_cells,
    }
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8"
    )
    _emit(summary)
    return 0


def _random_table_element(rng: random.Random):
    kappa = cartan.ce_zero()
    for row in cartan.generator_table():
        kappa = cartan.ce_add(
            kappa,
            cartan.ce_scale(
                row.preimage, Fraction(rng.randrange(-4, 5), rng.randrange(1, 3))
            ),
        )
    return kappa


def _random_group_element(rng: random.Random):
    return mat_mul(
        cartan.exp_e(Fraction(rng.randrange(-2, 3), rng.randrange(1, 4))),
        mat_mul(
            cartan.torus_element(Fraction(rng.randrange(1, 5), rng.randrange(1, 4))),
            cartan.exp_f(Fraction(rng.randrange(-2, 3), rng.randrange(1, 4))),
        ),
    )


def _cmd_cartan_check(args) -> int:
    del args
    rows = cartan.verify_table()

    rng = random.Random(20260816)
    equivariance = True
    for _ in range(50):
        kappa = _random_table_element(rng)
        p = _random_group_element(rng)
        lhs = cartan.phi(cartan.act_group(p, kappa))
        rhs = mat_mul(p, mat_mul(cartan.phi(kappa), mat_inverse(p)))
        equivariance = equivariance and mat_equal(lhs, rhs)

    origin = (0, 0, 0)
    bridge = True
    bridge_cells = [
        (3, 1),
        (1, 1),
        (0, 2),
        (2, 0),
        (Fraction(-1), Fraction(1, 2)),
    ]
    for a, b in bridge_cells:
        g = family_metric(family_params(a, b))
        frame = cartan.adapted_frame(g, origin)
        lhs = cartan.phi(cartan.kappa_at_frame(g, frame, origin))
        conj = cartan.conjugated_ricci_operator(g, frame, origin)
        bridge = bridge and mat_equal(lhs, mat_neg(conj))
        y_lhs, trace_free_lhs = cartan.decompose_ricci(lhs)
        y_rhs, trace_free_rhs = cartan.decompose_ricci(mat_neg(conj))
        bridge = bridge and y_lhs == y_rhs and mat_equal(trace_free_lhs, trace_free_rhs)

    identity = True
    pair_count = 0
    for a, b, degree in ((0, 0, 1), (3, 1, 2)):
        g = family_metric(family_params(a, b))
        rates = [(Fraction(0),) * 3, (Fraction(-b), Fraction(0), Fraction(0))]
        fields = solve_killing(g, degree, exp_rates=rates).fields
        frame = cartan.adapted_frame(g, origin)
        for i in range(len(fields)):
            for j in range(i + 1, len(fields)):
                identity = identity and cartan.check_identity(
                    g, fields[i], fields[j], frame, origin
                )
                pair_count += 1

    all_passed = all(rows.values()) and equivariance and bridge and identity
    report = {
        "tool": TOOL_NAME,
        "mode": "cartan-check",
        "table_rows": {name: rows[name] for name in rows},
        "equivariance": {"trials": 50, "passed": equivariance},
        "ricci_bridge": {"frames": len(bridge_cells), "passed": bridge},
        "structure_identity": {"pairs": pair_count, "passed": identity},
        "all_passed": all_passed,
    }
    _emit(report)
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Exact analysis of explicit three-dimensional Lorentz metrics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="full report for a metric TOML file")
    analyze.add_argument("spec", help="path to the metric TOML file")
    analyze.add_argument("--max-degree", type=int, default=2)
    analyze.add_argument(
        "--exp-rate",
        action="append",
        metavar="LX,LH,LZ",
        help="additional exponential ansatz rate (repeatable)",
    )
    analyze.set_defaults(handler=_cmd_analyze)

    family = sub.add_parser(
        "family", help="classify one member of the built-in metric family"
    )
    family.add_argument("--C", required=True, help="coefficient of z^2 dh^2")
    family.add_argument("--D", required=True, help="coefficient of z dx dh")
    family.add_argument(
        "--full", action="store_true", help="append the full analysis sections"
    )
    family.set_defaults(handler=_cmd_family)

    sweep = sub.add_parser(
        "sweep", help="classify the family over a square parameter grid"
    )
    sweep.add_argument("--grid", required=True, metavar="MIN:MAX:STEP")
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument("--out", required=True, help="output directory")
    sweep.set_defaults(handler=_cmd_sweep)

    check = sub.add_parser(
        "cartan-check", help="self-test the curvature representation layer"
    )
    check.set_defaults(handler=_cmd_cartan_check)

    solve = sub.add_parser(
        "solve-killing", help="solve the symmetry equation for a metric TOML file"
    )
    solve.add_argument("spec", help="path to the metric TOML file")
    solve.add_argument("--max-degree", type=int, required=True)
    solve.set_defaults(handler=_cmd_solve_killing)

    return parser


_DASH_VALUE_FLAGS = ("--grid", "--C", "--D", "--exp-rate")


def _glue_dash_values(argv: Sequence[str]) -> List[str]:
    """Join flags with values that start with '-' (negative bounds, rates)
    into --flag=value form so argparse does not mistake them for options."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if (
            token in _DASH_VALUE_FLAGS
            and i + 1 < len(argv)
            and argv[i + 1].startswith("-")
            and len(argv[i + 1]) > 1
        ):
            out.append("%s=%s" % (token, argv[i + 1]))
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = _build_parser().parse_args(_glue_dash_values(argv))
    try:
        return args.handler(args)
    except InputError as err:
        print("input error: %s" % err, file=sys.stderr)
        return 2
    except Exception as err:  # noqa: BLE001 - engine failures map to exit 1
        print("analysis error: %s" % err, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
