"""Shared helpers: an independent finite-difference curvature oracle in
exact rational arithmetic, and a from-scratch builder for the metric family
used across the suite.

The oracle never touches the symbolic differentiation paths: metric values
are evaluated at shifted rational points, derivatives come from central
differences at base step 1/1024 refined by one Richardson extrapolation
step (4*D(s/2) - D(s))/3, and the matrix inverse is plain exact Gaussian
elimination.  On polynomial inputs of the degrees occurring here the
extrapolated difference quotient is exact, so the 1e-6 comparison tolerance
is comfortable rather than tight.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, List

from lorentz3d.exactalg import mat_inverse, parse_expr, poly_eval
from lorentz3d.geometry import Metric, make_metric

STEP = Fraction(1, 1024)
REL_TOL = Fraction(1, 10**6)


def family_metric(a, b) -> Metric:
    """The two-parameter family metric, assembled from expression strings
    independently of the library's own family constructor."""
    params = {"a": Fraction(a), "b": Fraction(b)}
    rows = [
        [parse_expr("1"), parse_expr("b*z", params), parse_expr("0")],
        [parse_expr("b*z", params), parse_expr("a*z^2", params), parse_expr("1")],
        [parse_expr("0"), parse_expr("1"), parse_expr("0")],
    ]
    return make_metric(rows, (0, 0, 0))


def rational(rng: random.Random, lo: int, hi: int, denom: int = 8) -> Fraction:
    """Random rational in [lo, hi] with denominator dividing `denom`."""
    return Fraction(rng.randrange(lo * denom, hi * denom + 1), denom)


def small_point(rng: random.Random):
    """Random rational point with all coordinates in [-1/4, 1/4]."""
    return tuple(Fraction(rng.randrange(-256, 257), 1024) for _ in range(3))


def metric_values(g: Metric, point) -> List[List[Fraction]]:
    pt = [Fraction(v) for v in point]
    return [[poly_eval(g.components[i][j], pt) for j in range(3)] for i in range(3)]


def _shift(point, var: int, amount: Fraction):
    moved = list(point)
    moved[var] += amount
    return tuple(moved)


def _central(f: Callable[[object], Fraction], point, var: int, step: Fraction) -> Fraction:
    return (f(_shift(point, var, step)) - f(_shift(point, var, -step))) / (2 * step)


def fd_partial(f: Callable[[object], Fraction], point, var: int) -> Fraction:
    """Richardson-extrapolated central difference, exact rationals."""
    coarse = _central(f, point, var, STEP)
    fine = _central(f, point, var, STEP / 2)
    return (4 * fine - coarse) / 3


def fd_christoffel(g: Metric, point) -> List[List[List[Fraction]]]:
    """Gamma^k_ij at a point, from metric values alone."""
    pt = tuple(Fraction(v) for v in point)
    ginv = mat_inverse(metric_values(g, pt))
    # dg[a][i][j] = numeric d_a g_ij
    dg = [
        [
            [
                fd_partial(lambda q, i=i, j=j: poly_eval(g.components[i][j], q), pt, a)
                for j in range(3)
            ]
            for i in range(3)
        ]
        for a in range(3)
    ]
    gamma = []
    for k in range(3):
        plane = []
        for i in range(3):
            row = []
            for j in range(3):
                total = Fraction(0)
                for l in range(3):
                    total += ginv[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j])
                row.append(total / 2)
            plane.append(row)
        gamma.append(plane)
    return gamma


def fd_riemann(g: Metric, point) -> List[List[List[List[Fraction]]]]:
    """R^l_ijk at a point: difference quotients of the numeric Christoffel
    symbols plus their quadratic terms.  The numeric symbols are cached per
    shifted point (13 evaluations cover all 81 components)."""
    pt = tuple(Fraction(v) for v in point)
    cache = {}

    def gam(q):
        if q not in cache:
            cache[q] = fd_christoffel(g, q)
        return cache[q]

    def dgamma(l: int, i: int, k: int, a: int) -> Fraction:
        coarse = (
            gam(_shift(pt, a, STEP))[l][i][k] - gam(_shift(pt, a, -STEP))[l][i][k]
        ) / (2 * STEP)
        fine = (
            gam(_shift(pt, a, STEP / 2))[l][i][k]
            - gam(_shift(pt, a, -STEP / 2))[l][i][k]
        ) / STEP
        return (4 * fine - coarse) / 3

    gamma = gam(pt)
    out = []
    for l in range(3):
        block = []
        for i in range(3):
            plane = []
            for j in range(3):
                row = []
                for k in range(3):
                    value = dgamma(l, i, k, j) - dgamma(l, i, j, k)
                    for m in range(3):
                        value += gamma[l][j][m] * gamma[m][i][k]
                        value -= gamma[l][k][m] * gamma[m][i][j]
                    row.append(value)
                plane.append(row)
            block.append(plane)
        out.append(block)
    return out


def fd_ricci(g: Metric, point) -> List[List[Fraction]]:
    riem = fd_riemann(g, point)
    return [
        [sum((riem[k][i][k][j] for k in range(3)), Fraction(0)) for j in range(3)]
        for i in range(3)
    ]


def rel_close(symbolic: Fraction, numeric: Fraction, tol: Fraction = REL_TOL) -> bool:
    """|symbolic - numeric| <= tol * max(1, |symbolic|), evaluated exactly."""
    bound = tol * max(Fraction(1), abs(symbolic))
    return abs(symbolic - numeric) <= bound
