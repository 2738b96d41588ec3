"""Tests for the curvature machinery."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import (
    fd_christoffel,
    fd_ricci,
    fd_riemann,
    family_metric,
    rational,
    rel_close,
    small_point,
)
from lorentz3d.exactalg import (
    ep_add,
    ep_from_poly,
    ep_is_zero,
    ep_mul,
    ep_sub,
    parse_expr,
    poly_add,
    poly_const,
    rf_eval,
    rf_from_poly,
    rf_is_polynomial,
    rf_to_string,
)
from lorentz3d.geometry import (
    christoffel,
    christoffel_at,
    constant_curvature,
    coordinate_field,
    covariant_derivative,
    inverse_metric,
    make_metric,
    metric_determinant,
    ricci_char_poly,
    ricci_operator,
    ricci_tensor,
    riemann,
    rf_matrix_at,
    scalar_invariants,
    scalar_invariants_constant,
    signature_at,
    vf_add,
    vf_apply,
    vf_from_polys,
    vf_is_zero,
    vf_scale,
)

F = Fraction
ZERO = parse_expr("0")
ONE = parse_expr("1")


def diag_metric(a: str, b: str, c: str, base=(0, 0, 0)):
    rows = [
        [parse_expr(a), ZERO, ZERO],
        [ZERO, parse_expr(b), ZERO],
        [ZERO, ZERO, parse_expr(c)],
    ]
    return make_metric(rows, base)


# -- construction and signature ----------------------------------------------

def test_make_metric_rejects_asymmetry():
    rows = [[ONE, parse_expr("z"), ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, parse_expr("-1")]]
    with pytest.raises(ValueError, match="symmetric"):
        make_metric(rows, (0, 0, 0))


def test_make_metric_rejects_riemannian_signature():
    with pytest.raises(ValueError, match="signature"):
        diag_metric("1", "1", "1")


def test_make_metric_rejects_degenerate_base_point():
    rows = [
        [ONE, ZERO, ZERO],
        [ZERO, parse_expr("z"), ZERO],
        [ZERO, ZERO, parse_expr("-1")],
    ]
    with pytest.raises(ValueError, match="degenerate"):
        make_metric(rows, (0, 0, 0))


def test_signature_at_examples():
    assert signature_at(diag_metric("1", "1", "-1"), (0, 0, 0)) == (2, 1)
    # hyperbolic-block matrix with the off-diagonal 1/2
    rows = [
        [ONE, ZERO, ZERO],
        [ZERO, ZERO, parse_expr("1/2")],
        [ZERO, parse_expr("1/2"), ZERO],
    ]
    assert signature_at(make_metric(rows, (0, 0, 0)), (1, 1, 1)) == (2, 1)


def test_signature_at_degenerate_point_raises():
    g = diag_metric("1", "z", "-1", base=(0, 0, 1))
    assert signature_at(g, (0, 0, 1)) == (2, 1)
    with pytest.raises(ValueError, match="degenerate"):
        signature_at(g, (0, 0, 0))


def test_family_metric_determinant_is_minus_one():
    rng = random.Random(3)
    for _ in range(5):
        g = family_metric(rational(rng, -3, 3), rational(rng, -3, 3))
        assert metric_determinant(g) == poly_const(-1)


def test_inverse_metric_of_family():
    # constant determinant makes the inverse polynomial
    g = family_metric(2, 3)
    inv = inverse_metric(g)
    for row in inv:
        for entry in row:
            assert rf_is_polynomial(entry)
    # spot value: (g^{-1})_zz = (D^2 - C) z^2
    assert inv[2][2] == rf_from_poly(parse_expr("7*z^2"))
    assert inv[0][0] == rf_from_poly(ONE)
    assert inv[1][2] == rf_from_poly(ONE)


# -- connection ---------------------------------------------------------------

def test_flat_christoffel_vanishes():
    gam = christoffel(family_metric(0, 0))
    for k in range(3):
        for i in range(3):
            for j in range(3):
                assert not gam.entries[k][i][j].num


def test_family_christoffel_is_polynomial():
    rng = random.Random(5)
    for _ in range(4):
        gam = christoffel(family_metric(rational(rng, -3, 3), rational(rng, -3, 3)))
        for k in range(3):
            for i in range(3):
                for j in range(3):
                    assert rf_is_polynomial(gam.entries[k][i][j])


def test_family_christoffel_closed_form():
    # C = 3, D = 1; indices (x, h, z) = (0, 1, 2)
    e = christoffel(family_metric(3, 1)).entries
    expected = {
        (0, 0, 1): "1/2*z",
        (0, 1, 1): "3*z^2",
        (0, 1, 2): "1/2",
        (1, 0, 1): "-1/2",
        (1, 1, 1): "-3*z",
        (2, 0, 1): "z^2",
        (2, 0, 2): "1/2",
        (2, 1, 1): "6*z^3",
        (2, 1, 2): "5/2*z",
    }
    for k in range(3):
        for i in range(3):
            for j in range(i, 3):
                want = expected.get((k, i, j), "0")
                assert rf_to_string(e[k][i][j]) == want, (k, i, j)


def test_christoffel_matches_difference_oracle():
    rng = random.Random(11)
    for C, D in [(3, 1), (F(-2), F(1, 2)), (0, 2)]:
        g = family_metric(C, D)
        sym = christoffel(g)
        for _ in range(3):
            p = small_point(rng)
            num = fd_christoffel(g, p)
            val = christoffel_at(sym, p)
            for k in range(3):
                for i in range(3):
                    for j in range(3):
                        assert rel_close(val[k][i][j], num[k][i][j])


def test_covariant_derivative_flat():
    g = family_metric(0, 0)
    dx = coordinate_field(0)
    assert vf_is_zero(covariant_derivative(g, dx, dx))


def test_constant_norm_symmetry_direction_is_geodesic():
    # the x-coordinate field has constant squared length 1 for every (C, D)
    rng = random.Random(13)
    for _ in range(4):
        g = family_metric(rational(rng, -3, 3), rational(rng, -3, 3))
        dx = coordinate_field(0)
        assert vf_is_zero(covariant_derivative(g, dx, dx))


def metric_pairing(g, Y, W):
    total = {}
    for i in range(3):
        for j in range(3):
            piece = ep_mul(
                ep_mul(Y.components[i], W.components[j]),
                ep_from_poly(g.components[i][j]),
            )
            total = ep_add(total, piece)
    return total


def random_field(rng: random.Random):
    def rand_poly():
        p = {}
        for _ in range(3):
            e = (rng.randrange(2), rng.randrange(2), rng.randrange(2))
            p = poly_add(p, {e: F(rng.randrange(-3, 4))})
        return p

    return vf_from_polys(rand_poly(), rand_poly(), rand_poly())


def test_metric_compatibility():
    # X . g(Y,W) = g(nabla_X Y, W) + g(Y, nabla_X W) for polynomial fields
    rng = random.Random(17)
    g = family_metric(3, 1)
    for _ in range(3):
        X, Y, W = random_field(rng), random_field(rng), random_field(rng)
        lhs = vf_apply(X, metric_pairing(g, Y, W))
        rhs = ep_add(
            metric_pairing(g, covariant_derivative(g, X, Y), W),
            metric_pairing(g, Y, covariant_derivative(g, X, W)),
        )
        assert ep_is_zero(ep_sub(lhs, rhs))


def test_covariant_derivative_rejects_rational_connection():
    g = diag_metric("1", "1 + x^2", "-1")
    with pytest.raises(ValueError, match="polynomial connection"):
        covariant_derivative(g, coordinate_field(0), coordinate_field(1))


# -- curvature ---------------------------------------------------------------

def test_riemann_flat_is_zero():
    r = riemann(family_metric(0, 0))
    for l in range(3):
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    assert not r.entries[l][i][j][k].num


def test_riemann_matches_difference_oracle():
    rng = random.Random(19)
    for C, D in [(3, 1), (1, 1)]:
        g = family_metric(C, D)
        r = riemann(g)
        for _ in range(2):
            p = small_point(rng)
            num = fd_riemann(g, p)
            for l in range(3):
                for i in range(3):
                    for j in range(3):
                        for k in range(3):
                            assert rel_close(
                                rf_eval(r.entries[l][i][j][k], p), num[l][i][j][k]
                            )


def test_ricci_matches_difference_oracle():
    rng = random.Random(23)
    for C, D in [(3, 1), (0, 2), (F(1, 2), F(-1, 2))]:
        g = family_metric(C, D)
        ric = ricci_tensor(g)
        for _ in range(2):
            p = small_point(rng)
            num = fd_ricci(g, p)
            for i in range(3):
                for j in range(3):
                    assert rel_close(rf_eval(ric[i][j], p), num[i][j])


def test_constant_curvature_flat():
    assert constant_curvature(family_metric(0, 0)) == 0


def test_constant_curvature_negative_family():
    # with no quadratic coefficient the family is a constant-curvature space,
    # curvature -D^2/4
    assert constant_curvature(family_metric(0, 1)) == F(-1, 4)
    assert constant_curvature(family_metric(0, 2)) == F(-1)
    assert constant_curvature(family_metric(0, F(1, 2))) == F(-1, 16)


def test_constant_curvature_rejects_product_case():
    assert constant_curvature(family_metric(1, 0)) is None
    assert constant_curvature(family_metric(3, 1)) is None


def test_ricci_operator_constant_curvature_is_scalar():
    # sectional curvature k forces A = 2k Id in three dimensions
    a = ricci_operator(family_metric(0, 1)).entries
    for i in range(3):
        for j in range(3):
            want = rf_from_poly(parse_expr("-1/2")) if i == j else rf_from_poly(ZERO)
            assert a[i][j] == want


def test_ricci_operator_product_case_spectrum():
    # one flat direction and a curved surface factor: spectrum (0, C, C)
    a = ricci_operator(family_metric(1, 0)).entries
    for i in range(3):
        for j in range(3):
            want = "1" if (i == j and i > 0) else "0"
            assert rf_to_string(a[i][j]) == want
    e1, e2, e3 = ricci_char_poly(family_metric(1, 0))
    assert rf_to_string(e1) == "2" and rf_to_string(e2) == "1" and rf_to_string(e3) == "0"


def test_ricci_operator_generic_cell():
    a = ricci_operator(family_metric(3, 1)).entries
    flat = [rf_to_string(a[i][j]) for i in range(3) for j in range(3)]
    assert flat == ["-1/2", "-3*z", "0", "0", "5/2", "0", "0", "0", "5/2"]


def test_scalar_invariants_flat():
    t1, t2, t3 = scalar_invariants(family_metric(0, 0))
    assert not t1.num and not t2.num and not t3.num


def test_scalar_invariants_constant_on_family():
    rng = random.Random(29)
    for _ in range(10):
        g = family_metric(rational(rng, -3, 3), rational(rng, -3, 3))
        assert scalar_invariants_constant(g)


def test_inhomogeneous_perturbation_has_varying_invariants():
    # cubic correction to the flat hyperbolic-plane block
    rows = [
        [ONE, ZERO, ZERO],
        [ZERO, parse_expr("z^3"), ONE],
        [ZERO, ONE, ZERO],
    ]
    g = make_metric(rows, (0, 0, 0))
    assert not scalar_invariants_constant(g)
    t1, _, _ = scalar_invariants(g)
    assert rf_to_string(t1) == "6*z"
    assert constant_curvature(g) is None


def test_trace_two_ways():
    import numpy as np

    rng = random.Random(31)
    g = family_metric(3, 1)
    a = ricci_operator(g).entries
    t1, _, _ = scalar_invariants(g)
    for _ in range(10):
        p = small_point(rng)
        matrix = np.array([[float(v) for v in row] for row in rf_matrix_at(a, p)])
        eig_sum = float(np.sum(np.linalg.eigvals(matrix)).real)
        assert abs(eig_sum - float(rf_eval(t1, p))) <= 1e-9


def test_vector_field_helpers():
    dx, dh = coordinate_field(0), coordinate_field(1)
    s = vf_add(dx, vf_scale(dh, -1))
    assert not vf_is_zero(s)
    assert vf_is_zero(vf_add(s, vf_add(vf_scale(dx, -1), dh)))
