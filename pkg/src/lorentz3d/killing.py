"""The symmetry equation L_X g = 0 and its exact solution spaces.

For a vector field X with exponential-polynomial components the Lie
derivative of a polynomial metric is

    (L_X g)_ij = X^k d_k g_ij + (d_i X^k) g_kj + (d_j X^k) g_ik,

again a symmetric matrix of exponential-polynomials.  Requiring it to
vanish identically is a linear condition on X, so over a finite ansatz
(a span of monomials times fixed exponential rates, degree-bounded) the
equation becomes exact finite-dimensional linear algebra:

    solve_killing  enumerates one unknown per (rate, component, monomial),
                   applies L_. g to each, collects the coefficient of every
                   (rate, monomial) in every independent metric entry, and
                   returns the nullspace as a basis of symmetry fields.

Distinct rates never interact (the metric itself carries no exponential
part), so the system splits into one block per rate; the returned basis
is the concatenation of per-rate bases, deterministic for a fixed input
order.  Evaluation at points with irrational exponential values falls back
to floating point only where the contract allows it (rank computation).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactalg import (
    ExpPoly,
    Matrix,
    Poly,
    Rate,
    ZERO_RATE,
    ep_add,
    ep_diff,
    ep_eval_exact,
    ep_eval_float,
    ep_evaluates_exactly,
    ep_from_poly,
    ep_is_zero,
    ep_mul,
    ep_sub,
    matrix_rank,
    monomial_key,
    nullspace,
    mat_transpose,
    poly_diff,
)
from .geometry import (
    Metric,
    VectorField,
    coordinate_field,
    vf_add,
    vf_from_expoly,
    vf_from_polys,
    vf_is_zero,
    vf_scale,
)

__all__ = [
    "KillingBasis",
    "VectorField",
    "bracket",
    "coordinate_field",
    "evaluation_rank",
    "is_killing",
    "isotropy_subalgebra",
    "lie_derivative_metric",
    "make_killing_basis",
    "solve_killing",
    "vf_add",
    "vf_from_expoly",
    "vf_from_polys",
    "vf_is_zero",
    "vf_scale",
    "vol_determinant",
]

MAX_SOLVE_DEGREE = 6


def lie_derivative_metric(g: Metric, X: VectorField) -> Tuple[Tuple[ExpPoly, ...], ...]:
    """(L_X g)_ij as a symmetric 3x3 matrix of exponential-polynomials."""
    comp = X.components
    out = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i, 3):
            total: ExpPoly = {}
            for k in range(3):
                total = ep_add(
                    total,
                    ep_mul(comp[k], ep_from_poly(poly_diff(g.components[i][j], k))),
                )
                total = ep_add(
                    total, ep_mul(ep_diff(comp[k], i), ep_from_poly(g.components[k][j]))
                )
                total = ep_add(
                    total, ep_mul(ep_diff(comp[k], j), ep_from_poly(g.components[i][k]))
                )
            out[i][j] = total
            out[j][i] = total
    return tuple(tuple(row) for row in out)


def is_killing(g: Metric, X: VectorField) -> bool:
    ld = lie_derivative_metric(g, X)
    return all(ep_is_zero(ld[i][j]) for i in range(3) for j in range(i, 3))


def bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X,Y]^k = X^i d_i Y^k - Y^i d_i X^k."""
    comps = []
    for k in range(3):
        total: ExpPoly = {}
        for i in range(3):
            total = ep_add(total, ep_mul(X.components[i], ep_diff(Y.components[k], i)))
            total = ep_sub(total, ep_mul(Y.components[i], ep_diff(X.components[k], i)))
        comps.append(total)
    return VectorField(tuple(comps))


@dataclass(frozen=True)
class KillingBasis:
    """A verified basis of symmetry fields of one metric: every member
    satisfies L_X g = 0 exactly and the members are linearly independent
    over the rationals."""
    fields: Tuple[VectorField, ...]
    metric: Metric


def _coefficient_matrix(fields: Sequence[VectorField]) -> Matrix:
    """Fields as rows of rational coordinates over their joint
    (component, rate, monomial) support."""
    keys = sorted(
        {
            (c, r, e)
            for f in fields
            for c in range(3)
            for r, poly in f.components[c].items()
            for e in poly
        }
    )
    index = {key: pos for pos, key in enumerate(keys)}
    rows = []
    for f in fields:
        row = [Fraction(0)] * len(keys)
        for c in range(3):
            for r, poly in f.components[c].items():
                for e, value in poly.items():
                    row[index[(c, r, e)]] = value
        rows.append(row)
    return rows


def make_killing_basis(g: Metric, fields: Sequence[VectorField]) -> KillingBasis:
    """Validated constructor; raises ValueError when a field fails the
    symmetry equation or the family is rationally dependent."""
    fields = tuple(fields)
    for f in fields:
        if not is_killing(g, f):
            raise ValueError("field does not satisfy the symmetry equation")
    if fields and matrix_rank(_coefficient_matrix(fields)) != len(fields):
        raise ValueError("fields are linearly dependent over the rationals")
    return KillingBasis(fields, g)


def _monomials_up_to(degree: int):
    out = [
        (a, b, c)
        for a in range(degree + 1)
        for b in range(degree + 1 - a)
        for c in range(degree + 1 - a - b)
    ]
    return sorted(out, key=monomial_key)


def _solve_sector(g: Metric, degree: int, rate: Rate) -> List[VectorField]:
    monomials = _monomials_up_to(degree)
    columns = [(comp, e) for comp in range(3) for e in monomials]
    # one lie derivative per unknown; rows indexed by (entry i<=j, monomial)
    row_index: Dict[Tuple[int, int, Tuple[int, int, int]], int] = {}
    column_data = []
    for comp, e in columns:
        parts: List[ExpPoly] = [{}, {}, {}]
        parts[comp] = {rate: {e: Fraction(1)}}
        ld = lie_derivative_metric(g, VectorField(tuple(parts)))
        entries = {}
        for i in range(3):
            for j in range(i, 3):
                cell = ld[i][j]
                for r, poly in cell.items():
                    if r != rate:
                        raise RuntimeError("sector mixed exponential rates")
                for mono, value in cell.get(rate, {}).items():
                    key = (i, j, mono)
                    if key not in row_index:
                        row_index[key] = len(row_index)
                    entries[row_index[key]] = value
        column_data.append(entries)
    if not row_index:  # every candidate already satisfies the equation
        matrix = [[Fraction(0)] * len(columns)]
    else:
        matrix = [[Fraction(0)] * len(columns) for _ in range(len(row_index))]
        for col, entries in enumerate(column_data):
            for row, value in entries.items():
                matrix[row][col] = value
    solutions = nullspace(matrix)
    fields = []
    for vec in solutions:
        comps: List[ExpPoly] = [{}, {}, {}]
        for pos, (comp, e) in enumerate(columns):
            if vec[pos] != 0:
                comps[comp].setdefault(rate, {})[e] = vec[pos]
        fields.append(VectorField(tuple(comps)))
    return fields


def solve_killing(
    g: Metric,
    max_degree: int,
    exp_rates: Optional[Sequence[Sequence]] = None,
) -> KillingBasis:
    """Solve the symmetry equation over the finite ansatz

        X = sum over rates  exp(rate . coords) * (poly of degree <= max_degree)

    componentwise.  The rate list must contain the zero rate (plain
    polynomial fields) and max_degree is capped at 6 to keep the linear
    algebra bounded.
    """
    if not 0 <= max_degree <= MAX_SOLVE_DEGREE:
        raise ValueError("max_degree must be between 0 and %d" % MAX_SOLVE_DEGREE)
    if exp_rates is None:
        rates: List[Rate] = [ZERO_RATE]
    else:
        rates = []
        for raw in exp_rates:
            rate = tuple(Fraction(v) for v in raw)
            if len(rate) != 3:
                raise ValueError("exponential rates must have three components")
            if rate not in rates:
                rates.append(rate)
    if ZERO_RATE not in rates:
        raise ValueError("the rate list must include the zero rate")
    fields: List[VectorField] = []
    for rate in rates:
        fields.extend(_solve_sector(g, max_degree, rate))
    return make_killing_basis(g, fields)


# ---------------------------------------------------------------------------
# pointwise analysis
# ---------------------------------------------------------------------------

def _evaluates_exactly(fields: Sequence[VectorField], point) -> bool:
    return all(
        ep_evaluates_exactly(c, point) for f in fields for c in f.components
    )


def _value_rows_exact(fields: Sequence[VectorField], point) -> Matrix:
    return [
        [ep_eval_exact(c, point) for c in f.components] for f in fields
    ]


def _float_rank(rows: List[List[float]], tol: float = 1e-12) -> int:
    work = [row[:] for row in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    for col in range(cols):
        pivot = None
        best = tol
        for r in range(rank, len(work)):
            if abs(work[r][col]) > best:
                best = abs(work[r][col])
                pivot = r
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        lead = work[rank][col]
        for r in range(len(work)):
            if r != rank and abs(work[r][col]) > 0:
                factor = work[r][col] / lead
                work[r] = [v - factor * w for v, w in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def evaluation_rank(fields: Sequence[VectorField], point) -> int:
    """Rank of the n x 3 matrix of field values at the point: the dimension
    of the tangent directions the family spans there.

    Exact when every exponential factor is rational at the point (so, in
    particular, everywhere on the zero-rate sector); otherwise evaluated in
    floating point with pivot tolerance 1e-12.
    """
    if not fields:
        return 0
    pt = tuple(Fraction(v) for v in point)
    if _evaluates_exactly(fields, pt):
        return matrix_rank(_value_rows_exact(fields, pt))
    rows = [
        [ep_eval_float(c, pt) for c in f.components] for f in fields
    ]
    return _float_rank(rows)


def isotropy_subalgebra(
    fields: Sequence[VectorField], point
) -> List[VectorField]:
    """Basis of the fields in the rational span of the input that vanish at
    the point, each an exact combination of the inputs.

    The point must be one where every exponential factor is exactly
    rational; no numeric fallback is offered here because the output is a
    list of exact fields.
    """
    pt = tuple(Fraction(v) for v in point)
    if not fields:
        return []
    if not _evaluates_exactly(fields, pt):
        raise ValueError(
            "isotropy requires exponential factors to be exact at the point"
        )
    rows = _value_rows_exact(fields, pt)
    combos = nullspace(mat_transpose(rows))
    out = []
    for combo in combos:
        total = VectorField(({}, {}, {}))
        for coeff, f in zip(combo, fields):
            if coeff != 0:
                total = vf_add(total, vf_scale(f, coeff))
        out.append(total)
    return out


def vol_determinant(fields: Sequence[VectorField]) -> ExpPoly:
    """Determinant of the 3x3 matrix of components of exactly three fields
    (rows).  Its vanishing locus is where the three fields fail to frame
    the tangent space; the metric volume factor is not included."""
    if len(fields) != 3:
        raise ValueError("need exactly three fields")
    m = [f.components for f in fields]

    def two_by_two(r1: int, r2: int, c1: int, c2: int) -> ExpPoly:
        return ep_sub(ep_mul(m[r1][c1], m[r2][c2]), ep_mul(m[r1][c2], m[r2][c1]))

    det = ep_mul(m[0][0], two_by_two(1, 2, 1, 2))
    det = ep_sub(det, ep_mul(m[0][1], two_by_two(1, 2, 0, 2)))
    det = ep_add(det, ep_mul(m[0][2], two_by_two(1, 2, 0, 1)))
    return det
