"""Lie algebras by structure constants, and the classification used for
symmetry algebras of 3-dimensional Lorentz metrics.

An algebra is stored as the full array c[i][j][k] = coefficient of the k-th
basis element in [X_i, X_j]; the validated constructor checks antisymmetry
and the Jacobi identity exactly.  `structure_constants` turns a bracket-
closed family of vector fields into such an array by solving exact linear
systems, and `classify` walks a fixed decision tree over derived dimension,
center, adjoint eigenvalues and the Killing form:

    dim 3: derived 0                 -> Abelian
           derived 1, central        -> Heisenberg
           derived 1, not central    -> AffPlusR   (aff(R) + R)
           derived 2, diagonalizable -> Sol(1, b)  (adjoint eigenvalue ratio)
           derived 3, Killing (2,1)  -> Sl2
    dim 4: derived = sl2, center 1   -> RplusSl2
           derived = Heisenberg      -> RsemidirectHeis
    dim 6: Killing rank 6            -> Sl2plusSl2
           Killing rank 3, abelian
             3-dim radical           -> Sl2semidirectR3
    anything else                    -> Other

Sol parameters are the eigenvalues of the adjoint action on the derived
plane, defined up to common scale and swap; they are normalized by dividing
by the eigenvalue of smaller absolute value, giving (1, b) with |b| >= 1.
Non-square discriminants keep b as an exact quadratic surd u + v*sqrt(w)
rather than a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exactalg import (
    Matrix,
    Vector,
    mat_det,
    mat_transpose,
    matrix_rank,
    nullspace,
    rref,
    solve_linear,
    sqrt_exact,
    square_split,
    symmetric_signature,
)
from .geometry import VectorField
from .killing import bracket

Structure = Tuple[Tuple[Tuple[Fraction, ...], ...], ...]


@dataclass(frozen=True)
class LieAlgebra:
    """dim and c[i][j][k]: the X_k-coefficient of [X_i, X_j]."""
    dim: int
    c: Structure


class NonClosureError(ValueError):
    """A bracket left the rational span of the input fields."""


def make_lie_algebra(constants: Sequence[Sequence[Sequence]]) -> LieAlgebra:
    """Validated constructor: exact antisymmetry and Jacobi identity."""
    n = len(constants)
    c = tuple(
        tuple(tuple(Fraction(v) for v in row) for row in plane)
        for plane in constants
    )
    if any(len(plane) != n or any(len(row) != n for row in plane) for plane in c):
        raise ValueError("structure constants must form an n x n x n array")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if c[i][j][k] != -c[j][i][k]:
                    raise ValueError("structure constants must be antisymmetric")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    total = Fraction(0)
                    for m in range(n):
                        total += (
                            c[i][j][m] * c[m][k][l]
                            + c[j][k][m] * c[m][i][l]
                            + c[k][i][m] * c[m][j][l]
                        )
                    if total != 0:
                        raise ValueError("Jacobi identity fails")
    return LieAlgebra(n, c)


def bracket_vectors(L: LieAlgebra, v: Sequence[Fraction], w: Sequence[Fraction]) -> Vector:
    out = [Fraction(0)] * L.dim
    for i in range(L.dim):
        if v[i] == 0:
            continue
        for j in range(L.dim):
            if w[j] == 0:
                continue
            for k in range(L.dim):
                out[k] += v[i] * w[j] * L.c[i][j][k]
    return out


def adjoint_matrix(L: LieAlgebra, v: Sequence[Fraction]) -> Matrix:
    """Matrix of ad v: column j is [v, X_j]."""
    cols = [bracket_vectors(L, v, _unit(L.dim, j)) for j in range(L.dim)]
    return [[cols[j][k] for j in range(L.dim)] for k in range(L.dim)]


def _unit(n: int, i: int) -> Vector:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


# ---------------------------------------------------------------------------
# from vector fields
# ---------------------------------------------------------------------------

def structure_constants(fields: Sequence[VectorField]) -> LieAlgebra:
    """Expand every pairwise bracket in the given basis of fields.

    The fields must be linearly independent over the rationals and closed
    under bracket; a bracket that leaves the span raises NonClosureError
    naming the offending pair.
    """
    from .killing import _coefficient_matrix  # shared coordinate layout

    fields = list(fields)
    n = len(fields)
    coords = _coefficient_matrix(fields)
    if matrix_rank(coords) != n:
        raise ValueError("fields must be linearly independent")
    # joint support may grow under brackets; recompute coordinates of each
    # bracket against the fields by solving on the combined support
    constants = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            b = bracket(fields[i], fields[j])
            stacked = _coefficient_matrix(list(fields) + [b])
            matrix = mat_transpose(stacked[:n])
            target = stacked[n]
            solution = solve_linear(matrix, target)
            if solution is None or _residual(matrix, solution, target):
                raise NonClosureError(
                    "bracket of fields %d and %d leaves the span" % (i, j)
                )
            for k in range(n):
                constants[i][j][k] = solution[k]
                constants[j][i][k] = -solution[k]
    return make_lie_algebra(constants)


def _residual(matrix: Matrix, solution: Vector, target: Vector) -> bool:
    for row, want in zip(matrix, target):
        got = sum((a * b for a, b in zip(row, solution)), Fraction(0))
        if got != want:
            return True
    return False


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def is_unimodular(L: LieAlgebra) -> bool:
    """trace(ad X) = 0 for every X (it suffices to test basis elements)."""
    for i in range(L.dim):
        if sum((L.c[i][k][k] for k in range(L.dim)), Fraction(0)) != 0:
            return False
    return True


def _canonical_span(vectors: Sequence[Vector]) -> List[Vector]:
    rows = [list(v) for v in vectors if any(x != 0 for x in v)]
    if not rows:
        return []
    reduced, pivots = rref(rows)
    return [reduced[r] for r in range(len(pivots))]


def derived_algebra(L: LieAlgebra) -> List[Vector]:
    """Canonical (reduced-echelon) basis of span{[X_i, X_j]}."""
    brackets = [
        bracket_vectors(L, _unit(L.dim, i), _unit(L.dim, j))
        for i in range(L.dim)
        for j in range(i + 1, L.dim)
    ]
    return _canonical_span(brackets)


def center(L: LieAlgebra) -> List[Vector]:
    """Canonical basis of {v : [v, X_j] = 0 for all j}."""
    rows = []
    for j in range(L.dim):
        for k in range(L.dim):
            rows.append([L.c[i][j][k] for i in range(L.dim)])
    return nullspace(rows)


def killing_form(L: LieAlgebra) -> Matrix:
    ads = [adjoint_matrix(L, _unit(L.dim, i)) for i in range(L.dim)]
    out = [[Fraction(0)] * L.dim for _ in range(L.dim)]
    for i in range(L.dim):
        for j in range(i, L.dim):
            total = Fraction(0)
            for a in range(L.dim):
                for b in range(L.dim):
                    total += ads[i][a][b] * ads[j][b][a]
            out[i][j] = out[j][i] = total
    return out


def change_basis(L: LieAlgebra, S: Matrix) -> LieAlgebra:
    """Structure constants in the basis Y_a = sum_i S[i][a] X_i."""
    n = L.dim
    if mat_det(S) == 0:
        raise ValueError("basis change must be invertible")
    from .exactalg import mat_inverse

    T = mat_inverse(S)
    constants = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            # [Y_a, Y_b] in the X-basis, then converted
            v = bracket_vectors(
                L,
                [S[i][a] for i in range(n)],
                [S[i][b] for i in range(n)],
            )
            for cc in range(n):
                constants[a][b][cc] = sum(
                    (T[cc][k] * v[k] for k in range(n)), Fraction(0)
                )
    return make_lie_algebra(constants)


def _in_span(vector: Vector, basis: Sequence[Vector]) -> bool:
    if not basis:
        return all(x == 0 for x in vector)
    rows = [list(b) for b in basis]
    return matrix_rank(rows) == matrix_rank(rows + [list(vector)])


def subalgebra(L: LieAlgebra, basis: Sequence[Vector]) -> LieAlgebra:
    """The bracket-closed span of `basis` as an abstract algebra in that
    basis; NonClosureError if the span is not closed."""
    m = len(basis)
    matrix = mat_transpose([list(b) for b in basis])
    constants = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            v = bracket_vectors(L, basis[i], basis[j])
            solution = solve_linear(matrix, v)
            if solution is None or _residual(matrix, solution, v):
                raise NonClosureError("subspace is not closed under the bracket")
            for k in range(m):
                constants[i][j][k] = solution[k]
                constants[j][i][k] = -solution[k]
    return make_lie_algebra(constants)


# ---------------------------------------------------------------------------
# quadratic surds (exact irrational eigenvalue data)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Surd:
    """u + v*sqrt(root) with rational u, v and squarefree root > 1."""
    u: Fraction
    v: Fraction
    root: int

    def __str__(self) -> str:
        sign = "+" if self.v >= 0 else "-"
        return "%s %s %s*sqrt(%d)" % (self.u, sign, abs(self.v), self.root)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraClass:
    tag: str
    params: Tuple = ()

    def __str__(self) -> str:
        if not self.params:
            return self.tag
        return "%s(%s)" % (self.tag, ", ".join(str(p) for p in self.params))


ABELIAN = AlgebraClass("Abelian")
HEISENBERG = AlgebraClass("Heisenberg")
AFF_PLUS_R = AlgebraClass("AffPlusR")
SL2 = AlgebraClass("Sl2")
R_PLUS_SL2 = AlgebraClass("RplusSl2")
R_SEMIDIRECT_HEIS = AlgebraClass("RsemidirectHeis")
SL2_PLUS_SL2 = AlgebraClass("Sl2plusSl2")
SL2_SEMIDIRECT_R3 = AlgebraClass("Sl2semidirectR3")
OTHER = AlgebraClass("Other")


def _normalize_sol_pair(a, b) -> Tuple:
    """(a, b) up to swap and common scale, normalized to (1, b') with
    |b'| >= 1; inputs are rationals."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 and b == 0:
        raise ValueError("zero eigenvalue pair has no Sol normalization")
    if a == 0:
        return (Fraction(1), Fraction(0))
    if b == 0:
        return (Fraction(1), Fraction(0))
    small = a if abs(a) <= abs(b) else b
    pair = sorted((a / small, b / small), key=abs)
    return (pair[0], pair[1])


def _classify_dim3(L: LieAlgebra) -> AlgebraClass:
    derived = derived_algebra(L)
    dd = len(derived)
    if dd == 0:
        return ABELIAN
    if dd == 1:
        central = all(
            all(x == 0 for x in bracket_vectors(L, derived[0], _unit(3, j)))
            for j in range(3)
        )
        return HEISENBERG if central else AFF_PLUS_R
    if dd == 2:
        # the derived plane of a solvable algebra is abelian; verify anyway
        if any(x != 0 for x in bracket_vectors(L, derived[0], derived[1])):
            return OTHER
        # complement generator: first unit vector outside the derived plane
        z = next(
            _unit(3, i)
            for i in range(3)
            if not _in_span(_unit(3, i), derived)
        )
        # phi = matrix of ad z on the derived plane (basis `derived`)
        matrix = mat_transpose([list(v) for v in derived])
        cols = []
        for v in derived:
            image = bracket_vectors(L, z, v)
            coords = solve_linear(matrix, image)
            if coords is None or _residual(matrix, coords, image):
                return OTHER  # derived not ad-invariant: not a Lie algebra issue
            cols.append(coords)
        phi = [[cols[j][k] for j in range(2)] for k in range(2)]
        t = phi[0][0] + phi[1][1]
        det = phi[0][0] * phi[1][1] - phi[0][1] * phi[1][0]
        disc = t * t - 4 * det
        if disc < 0:
            return OTHER
        if disc == 0:
            # diagonalizable only when already scalar
            lam = t / 2
            if phi == [[lam, Fraction(0)], [Fraction(0), lam]]:
                return AlgebraClass("Sol", (Fraction(1), Fraction(1)))
            return OTHER
        root = sqrt_exact(disc)
        if root is not None:
            eig = ((t + root) / 2, (t - root) / 2)
            return AlgebraClass("Sol", _normalize_sol_pair(*eig))
        # irrational eigenvalues (t +- sqrt(disc))/2: normalize by the one
        # of smaller absolute value, which is (t + s*sqrt(disc))/2 with
        # s = +1 exactly when t <= 0; the ratio rationalizes to
        # (t^2 + disc - 2*s*t*sqrt(disc)) / (4 det)
        s = 1 if t <= 0 else -1
        m, w = square_split(disc)
        u = (t * t + disc) / (4 * det)
        v = Fraction(-2 * s, 1) * t * m / (4 * det)
        if v == 0:
            return AlgebraClass("Sol", (Fraction(1), u))
        return AlgebraClass("Sol", (Fraction(1), Surd(u, v, w)))
    # dd == 3: simple or nothing
    b = killing_form(L)
    if matrix_rank(b) == 3 and symmetric_signature(b)[:2] == (2, 1):
        return SL2
    return OTHER


def classify(L: LieAlgebra) -> AlgebraClass:
    """Isomorphism class per the decision tree in the module docstring.

    Defined for dimensions 3, 4 and 6; everything the tree does not
    recognize comes back as Other.
    """
    if L.dim not in (3, 4, 6):
        raise ValueError("classification covers dimensions 3, 4 and 6 only")
    if L.dim == 3:
        return _classify_dim3(L)
    if L.dim == 4:
        derived = derived_algebra(L)
        if len(derived) != 3:
            return OTHER
        try:
            sub = subalgebra(L, derived)
        except NonClosureError:
            return OTHER
        sub_class = _classify_dim3(sub)
        if sub_class == SL2 and len(center(L)) == 1:
            return R_PLUS_SL2
        if sub_class == HEISENBERG:
            return R_SEMIDIRECT_HEIS
        return OTHER
    # dim 6
    b = killing_form(L)
    rank = matrix_rank(b)
    if rank == 6:
        return SL2_PLUS_SL2
    if rank == 3:
        radical = nullspace(b)
        if len(radical) == 3 and all(
            all(x == 0 for x in bracket_vectors(L, v, w))
            for v in radical
            for w in radical
        ):
            return SL2_SEMIDIRECT_R3
    return OTHER


# ---------------------------------------------------------------------------
# model algebras
# ---------------------------------------------------------------------------

def make_abelian(dim: int) -> LieAlgebra:
    zero = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    return make_lie_algebra(zero)


def make_heisenberg() -> LieAlgebra:
    """[X1, X2] = X3, X3 central."""
    c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2] = Fraction(1)
    c[1][0][2] = Fraction(-1)
    return make_lie_algebra(c)


def make_aff_plus_r() -> LieAlgebra:
    """[X1, X2] = X2, with X3 a central summand: aff(R) + R."""
    c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][1] = Fraction(1)
    c[1][0][1] = Fraction(-1)
    return make_lie_algebra(c)


def make_sol(a, b) -> LieAlgebra:
    """R acting on R^2: [X1, X2] = a X2, [X1, X3] = b X3."""
    a, b = Fraction(a), Fraction(b)
    c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][1] = a
    c[1][0][1] = -a
    c[0][2][2] = b
    c[2][0][2] = -b
    return make_lie_algebra(c)


def make_sl2() -> LieAlgebra:
    """[A, B] = B, [A, C] = -C, [B, C] = A."""
    c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][1] = Fraction(1)
    c[1][0][1] = Fraction(-1)
    c[0][2][2] = Fraction(-1)
    c[2][0][2] = Fraction(1)
    c[1][2][0] = Fraction(1)
    c[2][1][0] = Fraction(-1)
    return make_lie_algebra(c)


def make_unipotent_case(gamma, r) -> LieAlgebra:
    """The 3-dimensional algebra on basis (X, Y, Z) with

        [Y, X] = 0,   [Y, Z] = X + gamma*Y,   [X, Z] = gamma*X + r*Y,

    so ad Z acts on the abelian plane span{X, Y} by [[-gamma, -1],
    [-r, -gamma]], with eigenvalues -gamma +- sqrt(r)."""
    gamma, r = Fraction(gamma), Fraction(r)
    c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    # [X, Z] = gamma X + r Y
    c[0][2][0] = gamma
    c[0][2][1] = r
    c[2][0][0] = -gamma
    c[2][0][1] = -r
    # [Y, Z] = X + gamma Y
    c[1][2][0] = Fraction(1)
    c[1][2][1] = gamma
    c[2][1][0] = Fraction(-1)
    c[2][1][1] = -gamma
    return make_lie_algebra(c)


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    n = a.dim + b.dim
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(a.dim):
        for j in range(a.dim):
            for k in range(a.dim):
                c[i][j][k] = a.c[i][j][k]
    for i in range(b.dim):
        for j in range(b.dim):
            for k in range(b.dim):
                c[a.dim + i][a.dim + j][a.dim + k] = b.c[i][j][k]
    return make_lie_algebra(c)


# ---------------------------------------------------------------------------
# one-parameter isotropy classes in o(2,1)
# ---------------------------------------------------------------------------

ZERO_CLASS = "Zero"
ELLIPTIC = "Elliptic"
SEMISIMPLE = "Semisimple"
UNIPOTENT = "Unipotent"


def classify_o21_element(M: Sequence[Sequence]) -> str:
    """Class of a one-parameter subgroup generator in o(2,1): the matrix
    must satisfy M I + I M^T = 0 for the antidiagonal form I.

    The characteristic polynomial is then t^3 - q t; the class is
    Semisimple for q > 0, Elliptic for q < 0, Unipotent for q = 0 with
    M nonzero, and Zero for the zero matrix.
    """
    m = [[Fraction(v) for v in row] for row in M]
    if len(m) != 3 or any(len(row) != 3 for row in m):
        raise ValueError("expected a 3x3 matrix")
    for i in range(3):
        for j in range(3):
            # (M I + I M^T)_ij = M[i][2-j] + M[j][2-i]
            if m[i][2 - j] + m[j][2 - i] != 0:
                raise ValueError("matrix is not antisymmetric for the form")
    if all(v == 0 for row in m for v in row):
        return ZERO_CLASS
    # q = -e2(M); trace and determinant vanish identically on o(2,1)
    e2 = (
        m[0][0] * m[1][1]
        - m[0][1] * m[1][0]
        + m[0][0] * m[2][2]
        - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1]
    )
    q = -e2
    if q > 0:
        return SEMISIMPLE
    if q < 0:
        return ELLIPTIC
    return UNIPOTENT
