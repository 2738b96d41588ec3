"""Structure constants, algebra invariants, and the classification tree."""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from lorentz3d.exactalg import (
    mat_det,
    matrix_rank,
    parse_expr,
    symmetric_signature,
)
from lorentz3d.killing import solve_killing
from lorentz3d.geometry import coordinate_field, vf_from_polys
from lorentz3d.liealg import (
    AlgebraClass,
    LieAlgebra,
    NonClosureError,
    Surd,
    adjoint_matrix,
    bracket_vectors,
    center,
    change_basis,
    classify,
    classify_o21_element,
    derived_algebra,
    direct_sum,
    is_unimodular,
    killing_form,
    make_abelian,
    make_aff_plus_r,
    make_heisenberg,
    make_lie_algebra,
    make_sl2,
    make_sol,
    make_unipotent_case,
    sqrt_exact,
    structure_constants,
    subalgebra,
)

from conftest import family_metric


def _field(expr_x: str, expr_h: str, expr_z: str):
    return vf_from_polys(
        parse_expr(expr_x), parse_expr(expr_h), parse_expr(expr_z)
    )


def _zero3():
    return [[[F(0)] * 3 for _ in range(3)] for _ in range(3)]


# ---------------------------------------------------------------------------
# constructor validation
# ---------------------------------------------------------------------------

def test_constructor_rejects_asymmetric_constants():
    c = _zero3()
    c[0][1][2] = F(1)  # missing the antisymmetric partner
    with pytest.raises(ValueError, match="antisymmetric"):
        make_lie_algebra(c)


def test_constructor_rejects_jacobi_violation():
    # [X1,X2] = X2 and [X2,X3] = X3 breaks Jacobi on (X1,X2,X3)
    c = _zero3()
    c[0][1][1] = F(1)
    c[1][0][1] = F(-1)
    c[1][2][2] = F(1)
    c[2][1][2] = F(-1)
    with pytest.raises(ValueError, match="Jacobi"):
        make_lie_algebra(c)


def test_constructor_accepts_rotation_algebra():
    c = _zero3()
    c[0][1][2], c[1][0][2] = F(1), F(-1)
    c[1][2][0], c[2][1][0] = F(1), F(-1)
    c[2][0][1], c[0][2][1] = F(1), F(-1)
    L = make_lie_algebra(c)
    assert L.dim == 3


# ---------------------------------------------------------------------------
# structure constants from vector fields
# ---------------------------------------------------------------------------

def test_translations_are_abelian():
    fields = [coordinate_field(i) for i in range(3)]
    L = structure_constants(fields)
    assert all(v == 0 for plane in L.c for row in plane for v in row)
    assert classify(L) == AlgebraClass("Abelian")


def test_translations_and_scaling():
    # basis (d/dx, d/dh, -h d/dh + z d/dz): the only relation is
    # [X3, X2] = X2
    fields = [
        coordinate_field(0),
        coordinate_field(1),
        _field("0", "-h", "z"),
    ]
    L = structure_constants(fields)
    expected = _zero3()
    expected[2][1][1] = F(1)
    expected[1][2][1] = F(-1)
    assert L.c == tuple(tuple(tuple(r) for r in p) for p in expected)
    assert classify(L) == AlgebraClass("AffPlusR")
    assert center(L) == [[F(1), F(0), F(0)]]


def test_non_closed_fields_raise():
    fields = [coordinate_field(1), _field("0", "h^2", "0")]
    with pytest.raises(NonClosureError, match="0 and 1"):
        structure_constants(fields)


def test_dependent_fields_raise():
    fields = [coordinate_field(0), coordinate_field(0)]
    with pytest.raises(ValueError, match="independent"):
        structure_constants(fields)


def test_rational_coefficients_recovered():
    # [X1, X2] = [x d/dx, x^2 d/dx] = x^2 d/dx = X2, scaled basis
    fields = [_field("x", "0", "0"), _field("x^2/2", "0", "0")]
    L = structure_constants(fields)
    assert L.c[0][1][1] == F(1)
    assert L.c[0][1][0] == F(0)


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def test_unimodularity_examples():
    assert is_unimodular(make_heisenberg())
    assert is_unimodular(make_abelian(3))
    assert is_unimodular(make_sl2())
    assert is_unimodular(make_sol(1, -1))
    assert not is_unimodular(make_sol(1, 1))
    assert not is_unimodular(make_aff_plus_r())


def test_unipotent_case_unimodular_iff_gamma_zero():
    for gamma in (0, 1, -2, F(1, 2)):
        for r in (0, 1, 4, -1, F(9, 4)):
            L = make_unipotent_case(gamma, r)
            assert is_unimodular(L) == (gamma == 0)


def test_derived_algebra_dimensions():
    assert derived_algebra(make_abelian(3)) == []
    assert len(derived_algebra(make_heisenberg())) == 1
    assert len(derived_algebra(make_aff_plus_r())) == 1
    assert len(derived_algebra(make_sol(1, -1))) == 2
    assert len(derived_algebra(make_sl2())) == 3


def test_derived_series_terminates_for_solvable():
    L = make_unipotent_case(1, 4)
    first = derived_algebra(L)
    assert len(first) == 2
    sub = subalgebra(L, first)
    assert derived_algebra(sub) == []  # the derived plane is abelian


def test_sl2_is_perfect():
    L = make_sl2()
    first = derived_algebra(L)
    sub = subalgebra(L, first)
    assert len(derived_algebra(sub)) == 3


def test_center_examples():
    assert center(make_heisenberg()) == [[F(0), F(0), F(1)]]
    assert center(make_aff_plus_r()) == [[F(0), F(0), F(1)]]
    assert center(make_sl2()) == []
    assert len(center(make_abelian(4))) == 4


def test_killing_form_sl2_signature():
    b = killing_form(make_sl2())
    assert b == [[F(2), F(0), F(0)], [F(0), F(0), F(2)], [F(0), F(2), F(0)]]
    assert matrix_rank(b) == 3
    assert symmetric_signature(b)[:2] == (2, 1)


def test_killing_form_degenerate_cases():
    assert matrix_rank(killing_form(make_heisenberg())) == 0
    assert matrix_rank(killing_form(make_abelian(3))) == 0
    # B = diag(a^2 + b^2, 0, 0) on the Sol family
    assert killing_form(make_sol(1, -1))[0][0] == F(2)
    assert matrix_rank(killing_form(make_sol(1, -1))) == 1


def test_adjoint_matrix_of_sl2_generator():
    L = make_sl2()
    ad = adjoint_matrix(L, [F(1), F(0), F(0)])
    assert ad == [[F(0), F(0), F(0)], [F(0), F(1), F(0)], [F(0), F(0), F(-1)]]


# ---------------------------------------------------------------------------
# classification: dimension 3
# ---------------------------------------------------------------------------

def test_classify_model_algebras():
    assert classify(make_abelian(3)) == AlgebraClass("Abelian")
    assert classify(make_heisenberg()) == AlgebraClass("Heisenberg")
    assert classify(make_aff_plus_r()) == AlgebraClass("AffPlusR")
    assert classify(make_sl2()) == AlgebraClass("Sl2")


def test_classify_sol_normalization():
    assert classify(make_sol(1, 2)) == AlgebraClass("Sol", (F(1), F(2)))
    assert classify(make_sol(2, 4)) == AlgebraClass("Sol", (F(1), F(2)))
    assert classify(make_sol(-1, -2)) == AlgebraClass("Sol", (F(1), F(2)))
    assert classify(make_sol(4, 2)) == AlgebraClass("Sol", (F(1), F(2)))
    assert classify(make_sol(1, -1)) == AlgebraClass("Sol", (F(1), F(-1)))
    assert classify(make_sol(1, 1)) == AlgebraClass("Sol", (F(1), F(1)))
    assert classify(make_sol(3, 3)) == AlgebraClass("Sol", (F(1), F(1)))
    # one zero eigenvalue decomposes as aff(R) + R instead
    assert classify(make_sol(0, 1)) == AlgebraClass("AffPlusR")
    assert classify(make_sol(0, 0)) == AlgebraClass("Abelian")


def test_classify_rotation_algebra_is_other():
    c = _zero3()
    c[0][1][2], c[1][0][2] = F(1), F(-1)
    c[1][2][0], c[2][1][0] = F(1), F(-1)
    c[2][0][1], c[0][2][1] = F(1), F(-1)
    assert classify(make_lie_algebra(c)) == AlgebraClass("Other")


def test_unipotent_case_square_discriminant():
    # eigenvalues -1 +- 2 = (1, -3)
    assert classify(make_unipotent_case(1, 4)) == AlgebraClass(
        "Sol", (F(1), F(-3))
    )


def test_unipotent_case_surd_discriminant():
    # eigenvalues -1 +- sqrt(2); ratio of larger to smaller is -3 - 2*sqrt(2)
    got = classify(make_unipotent_case(1, 2))
    assert got == AlgebraClass("Sol", (F(1), Surd(F(-3), F(-2), 2)))


def test_unipotent_case_opposite_eigenvalues():
    # gamma = 0: eigenvalues +- sqrt(2), ratio exactly -1
    assert classify(make_unipotent_case(0, 2)) == AlgebraClass(
        "Sol", (F(1), F(-1))
    )


def test_unipotent_case_negative_r_is_other():
    assert classify(make_unipotent_case(1, -1)) == AlgebraClass("Other")


def test_unipotent_case_jordan_block_is_other():
    assert classify(make_unipotent_case(1, 0)) == AlgebraClass("Other")


def test_unipotent_case_degenerate_is_heisenberg():
    assert classify(make_unipotent_case(0, 0)) == AlgebraClass("Heisenberg")


def test_unipotent_case_eigenvalue_identities():
    # when r = k^2 the Sol parameters come from -gamma +- k
    rng = random.Random(411)
    for _ in range(10):
        k = F(rng.randrange(1, 5), rng.randrange(1, 3))
        gamma = F(rng.randrange(-4, 5), rng.randrange(1, 3))
        if gamma in (k, -k):
            continue
        eig = sorted((-gamma + k, -gamma - k), key=abs)
        got = classify(make_unipotent_case(gamma, k * k))
        assert got.tag == "Sol"
        a, b = got.params
        # eigenvalues match up to the normalizing scale
        assert a * eig[1] == b * eig[0]
        assert a == 1
        # sum and product invariants transported through normalization
        assert eig[0] + eig[1] == -2 * gamma
        assert eig[0] * eig[1] == gamma * gamma - k * k


# ---------------------------------------------------------------------------
# classification: dimensions 4 and 6
# ---------------------------------------------------------------------------

def test_classify_r_plus_sl2():
    L = direct_sum(make_abelian(1), make_sl2())
    assert classify(L) == AlgebraClass("RplusSl2")


def test_classify_r_semidirect_heisenberg():
    # heisenberg on (X2, X3, X4) with X1 acting by the diagonal
    # derivation (1, 1, 2)
    c = [[[F(0)] * 4 for _ in range(4)] for _ in range(4)]
    c[1][2][3], c[2][1][3] = F(1), F(-1)
    c[0][1][1], c[1][0][1] = F(1), F(-1)
    c[0][2][2], c[2][0][2] = F(1), F(-1)
    c[0][3][3], c[3][0][3] = F(2), F(-2)
    assert classify(make_lie_algebra(c)) == AlgebraClass("RsemidirectHeis")


def test_classify_dim4_other_cases():
    assert classify(make_abelian(4)) == AlgebraClass("Other")
    L = direct_sum(make_abelian(1), make_heisenberg())
    assert classify(L) == AlgebraClass("Other")  # derived is 1-dimensional


def test_classify_sl2_plus_sl2():
    L = direct_sum(make_sl2(), make_sl2())
    assert classify(L) == AlgebraClass("Sl2plusSl2")


def test_classify_flat_symmetry_algebra():
    basis = solve_killing(family_metric(0, 0), 1)
    L = structure_constants(basis.fields)
    assert L.dim == 6
    assert classify(L) == AlgebraClass("Sl2semidirectR3")


def test_classify_dim6_coarse_invariants():
    assert classify(make_abelian(6)) == AlgebraClass("Other")
    # The published tree tests only Killing rank and radical commutativity,
    # which cannot tell a direct product with R^3 from a semidirect one;
    # the direct sum therefore lands in the same class.  Nothing in the
    # supported geometric pipelines produces the direct sum.
    L = direct_sum(make_sl2(), make_abelian(3))
    assert classify(L) == AlgebraClass("Sl2semidirectR3")


def test_classify_rejects_other_dimensions():
    with pytest.raises(ValueError, match="dimensions 3, 4 and 6"):
        classify(make_abelian(5))


# ---------------------------------------------------------------------------
# solved symmetry algebras of the metric family
# ---------------------------------------------------------------------------

def test_generic_family_cell_symmetry_algebra():
    rates = [(0, 0, 0), (F(-1), 0, 0)]
    basis = solve_killing(family_metric(3, 1), 2, rates)
    L = structure_constants(basis.fields)
    assert L.dim == 4
    assert classify(L) == AlgebraClass("RplusSl2")
    derived = derived_algebra(L)
    assert len(derived) == 3
    assert classify(subalgebra(L, derived)) == AlgebraClass("Sl2")


def test_degenerate_family_cell_symmetry_algebra():
    rates = [(0, 0, 0), (F(-1), 0, 0)]
    basis = solve_killing(family_metric(1, 1), 2, rates)
    L = structure_constants(basis.fields)
    assert L.dim == 4
    assert classify(L) == AlgebraClass("RsemidirectHeis")
    derived = derived_algebra(L)
    assert len(derived) == 3
    assert classify(subalgebra(L, derived)) == AlgebraClass("Heisenberg")


def test_subalgebra_non_closure():
    L = make_sl2()
    with pytest.raises(NonClosureError):
        subalgebra(L, [[F(0), F(1), F(0)], [F(0), F(0), F(1)]])


# ---------------------------------------------------------------------------
# basis-change invariance
# ---------------------------------------------------------------------------

def _random_unimodular(rng: random.Random, n: int):
    """Integer matrix with entries in [-2, 2] and determinant +-1."""
    while True:
        m = [[F(rng.randrange(-2, 3)) for _ in range(n)] for _ in range(n)]
        if abs(mat_det(m)) == 1:
            return m


def test_classify_invariant_under_basis_change():
    rng = random.Random(412)
    samples = [
        make_heisenberg(),
        make_aff_plus_r(),
        make_sl2(),
        make_sol(1, -3),
        make_unipotent_case(1, 2),
    ]
    for L in samples:
        want = classify(L)
        want_uni = is_unimodular(L)
        for _ in range(20):
            s = _random_unimodular(rng, 3)
            moved = change_basis(L, s)
            assert classify(moved) == want
            assert is_unimodular(moved) == want_uni


def test_classify_invariant_dim4_and_dim6():
    rng = random.Random(413)
    L4 = direct_sum(make_abelian(1), make_sl2())
    for _ in range(5):
        s = _random_unimodular(rng, 4)
        assert classify(change_basis(L4, s)) == AlgebraClass("RplusSl2")
    L6 = direct_sum(make_sl2(), make_sl2())
    for _ in range(3):
        blocks = [_random_unimodular(rng, 3), _random_unimodular(rng, 3)]
        s = [[F(0)] * 6 for _ in range(6)]
        for b in range(2):
            for i in range(3):
                for j in range(3):
                    s[3 * b + i][3 * b + j] = blocks[b][i][j]
        assert classify(change_basis(L6, s)) == AlgebraClass("Sl2plusSl2")


def test_change_basis_roundtrip():
    L = make_sl2()
    s = [[F(1), F(1), F(0)], [F(0), F(1), F(2)], [F(0), F(0), F(1)]]
    from lorentz3d.exactalg import mat_inverse

    back = change_basis(change_basis(L, s), mat_inverse(s))
    assert back.c == L.c


# ---------------------------------------------------------------------------
# square roots and surds
# ---------------------------------------------------------------------------

def test_sqrt_exact():
    assert sqrt_exact(F(9, 4)) == F(3, 2)
    assert sqrt_exact(F(0)) == F(0)
    assert sqrt_exact(F(2)) is None
    assert sqrt_exact(F(-1)) is None
    assert sqrt_exact(F(144)) == F(12)


def test_surd_str():
    assert str(Surd(F(-3), F(-2), 2)) == "-3 - 2*sqrt(2)"


# ---------------------------------------------------------------------------
# one-parameter isotropy classes
# ---------------------------------------------------------------------------

BOOST = [[1, 0, 0], [0, 0, 0], [0, 0, -1]]
SHEAR = [[0, -1, 0], [0, 0, 1], [0, 0, 0]]
ROTATION = [[0, -1, 0], [1, 0, 1], [0, -1, 0]]


def test_classify_o21_element_examples():
    assert classify_o21_element(BOOST) == "Semisimple"
    assert classify_o21_element(SHEAR) == "Unipotent"
    assert classify_o21_element(ROTATION) == "Elliptic"
    assert classify_o21_element([[0] * 3 for _ in range(3)]) == "Zero"


def test_classify_o21_element_scaling_invariance():
    for scale in (F(2), F(-1), F(1, 3)):
        scaled = [[scale * v for v in row] for row in BOOST]
        assert classify_o21_element(scaled) == "Semisimple"


def test_classify_o21_element_rejects_outsiders():
    with pytest.raises(ValueError, match="antisymmetric"):
        classify_o21_element([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(ValueError, match="3x3"):
        classify_o21_element([[1, 0], [0, 1]])
