"""Two-parameter family of Lorentz metrics on R^3 and its classification.

In coordinates (x, h, z) the family, indexed by two rational parameters
(a, b), has line element

    dx^2 + dh dz + a z^2 dh^2 + b z dx dh,

that is, component matrix (rows and columns ordered x, h, z)

    [ 1     b z      0 ]
    [ b z   a z^2    1 ]
    [ 0     1        0 ]

with constant determinant -1, hence Lorentz signature (2,1) everywhere.
Every member carries the symmetry fields

    d/dx,   d/dh,   -h d/dh + z d/dz,

and one additional quadratic field (`extra_killing_field`); for a = 0 there
is a further exponential one (`exponential_killing_field`).  The plane
z = 0 is where the first three fields degenerate, so members are
homogeneous away from that plane and the geometry there decides the
isometry type of the member.

`classify_family` names that type.  It runs entirely on computed evidence
-- curvature, solved symmetry algebra, spectrum of the curvature operator
-- and only afterwards compares the verdict against the closed-form
criteria in the parameters, raising if the two ever disagree.  The possible
tags:

    Minkowski          flat
    AdS3               constant negative curvature (anti-de Sitter space)
    RtimesDS2          metric product of a line and the de Sitter plane
    LorentzHeisenberg  left-invariant Lorentz metric on the Heisenberg group
    LeftInvariantSL2   left-invariant Lorentz metric on SL(2, R)
    Undetermined       evidence fits none of the patterns above

`rank_one_ricci_root` extracts, where possible, the isotropic vector field
direction W characterised by Ricci(u, u) = g(W, u)^2; it exists exactly
when the Ricci quadratic form has rank one, is nonnegative on its support,
and its root is g-isotropic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exactalg import (
    Matrix,
    Poly,
    ep_eval_exact,
    ep_from_poly,
    ep_zero,
    mat_inverse,
    mat_vec,
    matrix_rank,
    poly_const,
    rf_constant_value,
    rf_is_constant,
    sqrt_exact,
)
from .geometry import (
    Metric,
    VectorField,
    constant_curvature,
    coordinate_field,
    make_metric,
    metric_matrix_at,
    rf_matrix_at,
    ricci_char_poly,
    ricci_operator,
    ricci_tensor,
    vf_from_polys,
)
from .killing import solve_killing
from .liealg import (
    AlgebraClass,
    R_PLUS_SL2,
    R_SEMIDIRECT_HEIS,
    center,
    classify,
    structure_constants,
)

__all__ = [
    "FamilyParams",
    "family_params",
    "family_metric",
    "scaling_killing_field",
    "extra_killing_field",
    "exponential_killing_field",
    "standard_killing_fields",
    "GeometryClass",
    "MINKOWSKI",
    "ADS3",
    "R_TIMES_DS2",
    "LORENTZ_HEISENBERG",
    "LEFT_INVARIANT_SL2",
    "UNDETERMINED",
    "classify_family",
    "RicciRoot",
    "rank_one_ricci_root",
    "ricci_root_from_values",
]


# ---------------------------------------------------------------------------
# the family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyParams:
    """The two rational coefficients of a family member.

    `a` multiplies the z^2 dh^2 term, `b` the z dx dh term.
    """

    a: Fraction
    b: Fraction


def family_params(a, b) -> FamilyParams:
    """Coercing constructor; accepts anything Fraction() accepts."""
    return FamilyParams(Fraction(a), Fraction(b))


def _poly(entries) -> Poly:
    return {e: Fraction(c) for e, c in entries.items() if Fraction(c) != 0}


def family_metric(params: FamilyParams) -> Metric:
    """The family member for the given parameters, based at the origin."""
    a, b = params.a, params.b
    one = poly_const(1)
    zero = poly_const(0)
    bz = _poly({(0, 0, 1): b})
    azz = _poly({(0, 0, 2): a})
    rows = [
        [one, bz, zero],
        [bz, azz, one],
        [zero, one, zero],
    ]
    return make_metric(rows, (0, 0, 0))


def scaling_killing_field() -> VectorField:
    """-h d/dh + z d/dz: shared symmetry of every family member, scaling the
    degenerate plane's transverse coordinate against h."""
    return vf_from_polys(
        poly_const(0), _poly({(0, 1, 0): -1}), _poly({(0, 0, 1): 1})
    )


def extra_killing_field(params: FamilyParams) -> VectorField:
    """The quadratic symmetry field

        b h d/dx + (b^2 - a)/2 h^2 d/dh + ((a - b^2) z h - 1) d/dz,

    whose value at the origin is -d/dz.  Together with d/dx, d/dh and the
    scaling field it spans the generic member's symmetry algebra."""
    a, b = params.a, params.b
    px = _poly({(0, 1, 0): b})
    ph = _poly({(0, 2, 0): Fraction(b * b - a, 2)})
    pz = _poly({(0, 1, 1): a - b * b, (0, 0, 0): -1})
    return vf_from_polys(px, ph, pz)


def exponential_killing_field(params: FamilyParams) -> VectorField:
    """exp(-b x) d/dz, a symmetry field exactly of the a = 0 members."""
    if params.a != 0:
        raise ValueError("the exponential symmetry exists only for a = 0")
    rate = (-params.b, Fraction(0), Fraction(0))
    return VectorField((ep_zero(), ep_zero(), ep_from_poly(poly_const(1), rate)))


def standard_killing_fields(params: FamilyParams) -> Tuple[VectorField, ...]:
    """(d/dx, d/dh, scaling field, extra quadratic field)."""
    return (
        coordinate_field(0),
        coordinate_field(1),
        scaling_killing_field(),
        extra_killing_field(params),
    )


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

MINKOWSKI = "Minkowski"
ADS3 = "AdS3"
R_TIMES_DS2 = "RtimesDS2"
LORENTZ_HEISENBERG = "LorentzHeisenberg"
LEFT_INVARIANT_SL2 = "LeftInvariantSL2"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class GeometryClass:
    """Classification verdict together with the evidence it rests on.

    Fields not consulted on the decision path that was taken are None:
    constant-curvature members are decided before any symmetry solve, so
    they carry no algebra evidence, and the spectrum fields are only
    populated on the branch that inspects them.
    """

    tag: str
    curvature_constant: Optional[Fraction]
    symmetry_dimension: Optional[int]
    algebra: Optional[AlgebraClass]
    char_coefficients: Optional[Tuple[Fraction, Fraction, Fraction]]
    double_eigenvalue: Optional[Fraction]
    center_in_ricci_kernel: Optional[bool]


def _parameter_class(params: FamilyParams) -> str:
    """Closed-form classification straight from the parameters, used only to
    cross-check the evidence-driven verdict."""
    a, b = params.a, params.b
    if a == 0 and b == 0:
        return MINKOWSKI
    if b == 0:
        return R_TIMES_DS2
    if a == 0:
        return ADS3
    if a == b * b:
        return LORENTZ_HEISENBERG
    return LEFT_INVARIANT_SL2


def _constant_char_coefficients(
    g: Metric,
) -> Optional[Tuple[Fraction, Fraction, Fraction]]:
    """(e1, e2, e3) of the curvature operator when they are constant on the
    chart; None as soon as one of them varies."""
    values = []
    for entry in ricci_char_poly(g):
        if not rf_is_constant(entry):
            return None
        values.append(rf_constant_value(entry))
    return tuple(values)


def _double_eigenvalue(
    coefficients: Optional[Tuple[Fraction, Fraction, Fraction]]
) -> Optional[Fraction]:
    """mu with spectrum (0, mu, mu), mu != 0, read off the characteristic
    coefficients t^3 - e1 t^2 + e2 t - e3; None when the spectrum has a
    different shape."""
    if coefficients is None:
        return None
    e1, e2, e3 = coefficients
    if e3 != 0 or e1 == 0 or e1 * e1 != 4 * e2:
        return None
    return e1 / 2


def classify_family(params: FamilyParams) -> GeometryClass:
    """Classify a family member from computed evidence.

    Decision path: a constant-curvature member is Minkowski (flat) or AdS3
    (negative).  Otherwise the symmetry algebra is solved (degree 2,
    exponential rates {0, (-b, 0, 0)}) and classified; a semidirect
    extension of the Heisenberg algebra means LorentzHeisenberg, while for
    an algebra of type R + sl2 the curvature operator decides: spectrum
    (0, mu, mu) with mu != 0 and the algebra's center evaluating into the
    kernel of the curvature operator at the base point means RtimesDS2, any
    other spectrum means LeftInvariantSL2.  Evidence matching none of these
    patterns yields Undetermined.

    The verdict is finally compared with the closed-form parameter
    criteria; a disagreement raises RuntimeError, since it means some part
    of the engine miscomputed.
    """
    g = family_metric(params)
    k = constant_curvature(g)
    if k is not None:
        if k == 0:
            tag = MINKOWSKI
        elif k < 0:
            tag = ADS3
        else:
            tag = UNDETERMINED
        verdict = GeometryClass(tag, k, None, None, None, None, None)
    else:
        basis = solve_killing(g, 2, exp_rates=[(0, 0, 0), (-params.b, 0, 0)])
        algebra = structure_constants(basis.fields)
        algebra_class = classify(algebra)
        coefficients = _constant_char_coefficients(g)
        mu: Optional[Fraction] = None
        central_in_kernel: Optional[bool] = None
        if algebra_class == R_SEMIDIRECT_HEIS:
            tag = LORENTZ_HEISENBERG
        elif algebra_class == R_PLUS_SL2:
            mu = _double_eigenvalue(coefficients)
            if mu is not None:
                central_in_kernel = _center_in_ricci_kernel(
                    g, basis.fields, algebra
                )
            tag = (
                R_TIMES_DS2
                if mu is not None and central_in_kernel
                else LEFT_INVARIANT_SL2
            )
        else:
            tag = UNDETERMINED
        verdict = GeometryClass(
            tag,
            None,
            len(basis.fields),
            algebra_class,
            coefficients,
            mu,
            central_in_kernel,
        )
    expected = _parameter_class(params)
    if verdict.tag != expected:
        raise RuntimeError(
            "geometry classification mismatch for parameters (%s, %s): "
            "evidence says %s, parameter criteria say %s"
            % (params.a, params.b, verdict.tag, expected)
        )
    return verdict


def _center_in_ricci_kernel(g, fields, algebra) -> bool:
    """Whether the (one-dimensional) center of the solved symmetry algebra,
    evaluated at the base point, is annihilated by the curvature operator
    there."""
    central = center(algebra)
    if len(central) != 1:
        return False
    value = [Fraction(0)] * 3
    for coefficient, field in zip(central[0], fields):
        if coefficient == 0:
            continue
        for i in range(3):
            value[i] += coefficient * ep_eval_exact(
                field.components[i], g.base_point
            )
    operator = rf_matrix_at(ricci_operator(g).entries, g.base_point)
    return all(entry == 0 for entry in mat_vec(operator, value))


# ---------------------------------------------------------------------------
# rank-one curvature root
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RicciRoot:
    """Isotropic vector W with Ricci(u, u) = g(W, u)^2 at one point.

    `exact` is False when the required square root is irrational and the
    components fell back to floating point; reports quoting such a root
    must flag it as numeric."""

    components: Tuple
    exact: bool


def ricci_root_from_values(
    ricci_values: Matrix, metric_values: Matrix
) -> Optional[RicciRoot]:
    """`rank_one_ricci_root` on explicitly given point values.

    `ricci_values` is the symmetric matrix of the curvature quadratic form
    and `metric_values` the (invertible, symmetric) Gram matrix of the
    metric at one point.  Returns the normalized root, or None when the
    form is not rank one, is negative on its support, or its root fails to
    be isotropic.
    """
    m = [[Fraction(v) for v in row] for row in ricci_values]
    gram = [[Fraction(v) for v in row] for row in metric_values]
    if matrix_rank(m) != 1:
        return None
    pivot = next((j for j in range(3) if m[j][j] != 0), None)
    if pivot is None or m[pivot][pivot] < 0:
        # a symmetric rank-one form has a nonzero diagonal entry, and all
        # its nonzero diagonal entries share one sign: negative means the
        # form is negative semidefinite on its support
        return None
    weight = m[pivot][pivot]
    row = m[pivot]
    # rank one and nonnegative force  m = row^T row / weight;  verify
    for i in range(3):
        for j in range(3):
            if m[i][j] * weight != row[i] * row[j]:
                return None
    inverse = mat_inverse(gram)
    raised = mat_vec(inverse, list(row))
    # isotropy of the root, checked before any square root is taken:
    # g(W, W) = row g^{-1} row^T / weight
    if sum(row[i] * raised[i] for i in range(3)) != 0:
        return None
    for entry in raised:
        if entry != 0:
            if entry < 0:
                raised = [-v for v in raised]
            break
    root = sqrt_exact(weight)
    if root is not None:
        return RicciRoot(tuple(v / root for v in raised), True)
    scale = 1.0 / math.sqrt(float(weight))
    return RicciRoot(tuple(float(v) * scale for v in raised), False)


def rank_one_ricci_root(g: Metric, point: Sequence) -> Optional[RicciRoot]:
    """The isotropic root W of the curvature quadratic form of g at the
    point, when that form has rank one and is nonnegative on its support:

        Ricci(u, u) = g(W, u)^2,      g(W, W) = 0,

    with the sign fixed by making the first nonzero component positive.
    Returns None when no such root exists.  The scaling involves a square
    root; irrational values fall back to floating point, flagged on the
    result.
    """
    pt = [Fraction(v) for v in point]
    ric = rf_matrix_at(ricci_tensor(g), pt)
    return ricci_root_from_values(ric, metric_matrix_at(g, pt))
