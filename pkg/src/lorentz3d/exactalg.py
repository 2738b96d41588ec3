"""Exact arithmetic core: sparse polynomials, exponential-polynomials,
rational functions, an expression parser, and exact linear algebra.

Everything works over arbitrary-precision rationals (`fractions.Fraction`).
A polynomial in the three fixed coordinates (x, h, z) is a sparse map

    Poly = {(dx, dh, dz): coefficient, ...}

from exponent triples to nonzero coefficients; the empty dict is the zero
polynomial, so two polynomials are equal exactly when their dicts are equal.
An exponential-polynomial attaches a factor exp(lx*x + lh*h + lz*z) to each
polynomial summand:

    ExpPoly = {(lx, lh, lz): Poly, ...}

with rational rate vectors as keys and the zero rate recovering plain
polynomials.  Rational functions are kept gcd-reduced with a canonically
normalized denominator, so dataclass equality is mathematical equality.

The canonical term order used by the printer and the linear algebra is
graded lexicographic with z > h > x.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

Exponent = Tuple[int, int, int]  # degrees in (x, h, z)
Poly = Dict[Exponent, Fraction]
Rate = Tuple[Fraction, Fraction, Fraction]  # rates (lx, lh, lz) of exp(l . coords)
ExpPoly = Dict[Rate, Poly]
Point = Tuple[Fraction, Fraction, Fraction]
Vector = List[Fraction]
Matrix = List[List[Fraction]]

VAR_NAMES: Tuple[str, str, str] = ("x", "h", "z")
ZERO_EXPONENT: Exponent = (0, 0, 0)
ZERO_RATE: Rate = (Fraction(0), Fraction(0), Fraction(0))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def poly_zero() -> Poly:
    return {}


def poly_const(c) -> Poly:
    """Constant polynomial; accepts anything Fraction() accepts."""
    c = Fraction(c)
    return {} if c == 0 else {ZERO_EXPONENT: c}


def poly_var(index: int) -> Poly:
    """The coordinate polynomial x, h or z for index 0, 1, 2."""
    expo = [0, 0, 0]
    expo[index] = 1
    return {tuple(expo): Fraction(1)}


def poly_is_zero(p: Poly) -> bool:
    return not p


def poly_is_constant(p: Poly) -> bool:
    return all(e == ZERO_EXPONENT for e in p)


def poly_constant_value(p: Poly) -> Fraction:
    """Value of a constant polynomial (raises if p has positive degree)."""
    if not poly_is_constant(p):
        raise ValueError("polynomial is not constant: %s" % poly_to_string(p))
    return p.get(ZERO_EXPONENT, Fraction(0))


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, Fraction(0)) + c
        if s == 0:
            out.pop(e, None)
        else:
            out[e] = s
    return out


def poly_neg(a: Poly) -> Poly:
    return {e: -c for e, c in a.items()}


def poly_sub(a: Poly, b: Poly) -> Poly:
    return poly_add(a, poly_neg(b))


def poly_scale(a: Poly, c) -> Poly:
    c = Fraction(c)
    if c == 0:
        return {}
    return {e: c * v for e, v in a.items()}


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
            s = out.get(e, Fraction(0)) + ca * cb
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
    return out


def poly_pow(a: Poly, n: int) -> Poly:
    if n < 0:
        raise ValueError("negative power of a polynomial")
    out = poly_const(1)
    for _ in range(n):
        out = poly_mul(out, a)
    return out


def poly_diff(p: Poly, var: int) -> Poly:
    out: Poly = {}
    for e, c in p.items():
        if e[var] == 0:
            continue
        d = list(e)
        d[var] -= 1
        out[tuple(d)] = c * e[var]
    return out


def poly_eval(p: Poly, point: Sequence) -> Fraction:
    pt = [Fraction(v) for v in point]
    total = Fraction(0)
    for e, c in p.items():
        term = c
        for i in range(3):
            if e[i]:
                term *= pt[i] ** e[i]
        total += term
    return total


def poly_substitute(p: Poly, values: Dict[int, Fraction]) -> Poly:
    """Substitute rational values for a subset of the variables."""
    out: Poly = {}
    for e, c in p.items():
        coeff = c
        expo = list(e)
        for var, val in values.items():
            if expo[var]:
                coeff *= Fraction(val) ** expo[var]
                expo[var] = 0
        if coeff == 0:
            continue
        key = tuple(expo)
        s = out.get(key, Fraction(0)) + coeff
        if s == 0:
            out.pop(key, None)
        else:
            out[key] = s
    return out


def poly_total_degree(p: Poly) -> int:
    """Total degree; the zero polynomial gets -1."""
    if not p:
        return -1
    return max(e[0] + e[1] + e[2] for e in p)


def monomial_key(e: Exponent) -> Tuple[int, int, int, int]:
    """Sort key of the graded-lex order with z > h > x (larger = later)."""
    return (e[0] + e[1] + e[2], e[2], e[1], e[0])


def poly_leading(p: Poly) -> Tuple[Exponent, Fraction]:
    """Leading (exponent, coefficient) in graded-lex z > h > x order."""
    if not p:
        raise ValueError("zero polynomial has no leading term")
    e = max(p, key=monomial_key)
    return e, p[e]


def _monomial_string(e: Exponent) -> str:
    parts = []
    for i, name in enumerate(VAR_NAMES):
        if e[i] == 1:
            parts.append(name)
        elif e[i] > 1:
            parts.append("%s^%d" % (name, e[i]))
    return "*".join(parts)


def _coeff_string(c: Fraction) -> str:
    return str(c)  # Fraction prints as "p/q" or "p"


def poly_to_string(p: Poly) -> str:
    """Canonical rendering, graded-lex descending; parses back exactly."""
    if not p:
        return "0"
    pieces = []
    for e in sorted(p, key=monomial_key, reverse=True):
        c = p[e]
        mono = _monomial_string(e)
        mag = abs(c)
        if not mono:
            body = _coeff_string(mag)
        elif mag == 1:
            body = mono
        else:
            body = "%s*%s" % (_coeff_string(mag), mono)
        if not pieces:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append((" + " if c > 0 else " - ") + body)
    return "".join(pieces)


# ---------------------------------------------------------------------------
# expression parser
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    """Syntax or name error in an input expression, with its position."""

    def __init__(self, message: str, position: int):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class _Parser:
    """Recursive descent over: sum of terms; term = factors joined by '*'
    or '/' (division by nonzero constants only); factor = base ['^' nat];
    base = natural number | identifier | parenthesized sum.  A sum may
    carry one leading '-'.
    """

    def __init__(self, text: str, params: Dict[str, Fraction]):
        self.text = text
        self.pos = 0
        self.params = params

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Poly:
        result = self.parse_sum()
        self.skip_ws()
        if self.pos != len(self.text):
            raise ParseError("unexpected character %r" % self.text[self.pos], self.pos)
        return result

    def parse_sum(self) -> Poly:
        if self.peek() == "-":
            self.pos += 1
            total = poly_neg(self.parse_term())
        else:
            total = self.parse_term()
        while True:
            op = self.peek()
            if op == "+":
                self.pos += 1
                total = poly_add(total, self.parse_term())
            elif op == "-":
                self.pos += 1
                total = poly_sub(total, self.parse_term())
            else:
                return total

    def parse_term(self) -> Poly:
        total = self.parse_factor()
        while True:
            op = self.peek()
            if op == "*":
                self.pos += 1
                total = poly_mul(total, self.parse_factor())
            elif op == "/":
                at = self.pos
                self.pos += 1
                divisor = self.parse_factor()
                if not poly_is_constant(divisor):
                    raise ParseError("division is only allowed by constants", at)
                value = poly_constant_value(divisor)
                if value == 0:
                    raise ParseError("division by zero", at)
                total = poly_scale(total, 1 / value)
            else:
                return total

    def parse_factor(self) -> Poly:
        base = self.parse_base()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            if self.peek() == "-":
                raise ParseError("exponent must be a nonnegative integer", self.pos)
            n = self.parse_natural("exponent")
            return poly_pow(base, n)
        return base

    def parse_base(self) -> Poly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.parse_sum()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return inner
        if ch.isdigit():
            n = self.parse_natural("number")
            return poly_const(n)
        if ch.isalpha() or ch == "_":
            at = self.pos
            name = self.parse_identifier()
            if name in VAR_NAMES:
                return poly_var(VAR_NAMES.index(name))
            if name in self.params:
                return poly_const(self.params[name])
            raise ParseError("unknown identifier %r" % name, at)
        if ch == "":
            raise ParseError("unexpected end of input", self.pos)
        raise ParseError("unexpected character %r" % ch, self.pos)

    def parse_natural(self, what: str) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected %s" % what, start)
        return int(self.text[start:self.pos])

    def parse_identifier(self) -> str:
        start = self.pos
        self.pos += 1
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start:self.pos]


def parse_expr(text: str, params: Optional[Dict[str, object]] = None) -> Poly:
    """Parse an expression in x, h, z into an expanded polynomial.

    `params` maps parameter names to rationals, substituted exactly at
    parse time.  Raises ParseError (with position) on syntax errors,
    unknown identifiers, or fractional/negative exponents.
    """
    bound = {name: Fraction(value) for name, value in (params or {}).items()}
    return _Parser(text, bound).parse()


# ---------------------------------------------------------------------------
# polynomial gcd (content/primitive-part recursion)
# ---------------------------------------------------------------------------

def _variables_in(p: Poly) -> List[int]:
    seen = set()
    for e in p:
        for i in range(3):
            if e[i]:
                seen.add(i)
    return sorted(seen)


def _as_univariate(p: Poly, var: int) -> Dict[int, Poly]:
    out: Dict[int, Poly] = {}
    for e, c in p.items():
        d = e[var]
        rest = list(e)
        rest[var] = 0
        out.setdefault(d, {})[tuple(rest)] = c
    return out


def _from_univariate(coeffs: Dict[int, Poly], var: int) -> Poly:
    out: Poly = {}
    for d, q in coeffs.items():
        for e, c in q.items():
            key = list(e)
            key[var] += d
            out[tuple(key)] = c
    return out


def _univariate_degree(coeffs: Dict[int, Poly]) -> int:
    return max(coeffs) if coeffs else -1


def poly_divexact(p: Poly, d: Poly) -> Poly:
    """Exact multivariate division; raises ValueError if d does not divide p."""
    if poly_is_zero(d):
        raise ValueError("division by the zero polynomial")
    rem = dict(p)
    quot: Poly = {}
    de, dc = poly_leading(d)
    while rem:
        re, rc = poly_leading(rem)
        qe = (re[0] - de[0], re[1] - de[1], re[2] - de[2])
        if min(qe) < 0:
            raise ValueError("polynomial division is not exact")
        qc = rc / dc
        quot[qe] = qc
        rem = poly_sub(rem, poly_mul({qe: qc}, d))
    return quot


def _content_primitive(p: Poly, var: int) -> Tuple[Poly, Poly]:
    """Content (gcd of univariate coefficients in the remaining variables)
    and primitive part of p viewed as univariate in `var`."""
    coeffs = _as_univariate(p, var)
    content: Poly = {}
    for d in sorted(coeffs):
        content = poly_gcd(content, coeffs[d])
    return content, poly_divexact(p, content)


def _pseudo_remainder(a: Poly, b: Poly, var: int) -> Poly:
    """Pseudo-remainder of a by b in the variable `var`."""
    ub = _as_univariate(b, var)
    db = _univariate_degree(ub)
    lead_b = ub[db]
    rem = dict(a)
    while True:
        ur = _as_univariate(rem, var)
        dr = _univariate_degree(ur)
        if dr < db:
            return rem
        lead_r = ur[dr]
        # rem <- lead_b * rem - lead_r * v^(dr-db) * b
        shift: Poly = {
            tuple(dr - db if i == var else 0 for i in range(3)): Fraction(1)
        }
        rem = poly_sub(
            poly_mul(dict(lead_b), rem),
            poly_mul(poly_mul(dict(lead_r), shift), b),
        )


def _normalize_primitive(p: Poly) -> Poly:
    """Scale to coprime integer coefficients with positive leading one."""
    if not p:
        return {}
    denoms = 1
    for c in p.values():
        denoms = denoms * c.denominator // _gcd_int(denoms, c.denominator)
    ints = {e: c * denoms for e, c in p.items()}
    g = 0
    for c in ints.values():
        g = _gcd_int(g, c.numerator)
    scaled = {e: Fraction(c, g) for e, c in ints.items()}
    _, lead = poly_leading(scaled)
    if lead < 0:
        scaled = poly_neg(scaled)
    return scaled


def _gcd_int(a: int, b: int) -> int:
    a, b = abs(int(a)), abs(int(b))
    while b:
        a, b = b, a % b
    return a


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """gcd over the rationals, normalized primitive with positive leading
    coefficient; gcd(0, p) = normalized p and gcd(0, 0) = 0."""
    if poly_is_zero(a):
        return _normalize_primitive(b)
    if poly_is_zero(b):
        return _normalize_primitive(a)
    variables = sorted(set(_variables_in(a)) | set(_variables_in(b)))
    if not variables:
        return poly_const(1)
    var = variables[-1]  # recurse on the largest variable (z before h before x)
    cont_a, prim_a = _content_primitive(a, var)
    cont_b, prim_b = _content_primitive(b, var)
    cont = poly_gcd(cont_a, cont_b)
    # primitive pseudo-remainder sequence in `var`
    p, q = prim_a, prim_b
    if _univariate_degree(_as_univariate(p, var)) < _univariate_degree(_as_univariate(q, var)):
        p, q = q, p
    while not poly_is_zero(q):
        r = _pseudo_remainder(p, q, var)
        if poly_is_zero(r):
            p = q
            break
        if _univariate_degree(_as_univariate(r, var)) == 0:
            return _normalize_primitive(cont)
        _, r = _content_primitive(r, var)
        p, q = q, r
    _, prim = _content_primitive(p, var)
    return _normalize_primitive(poly_mul(cont, prim))


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=True)
class RatFunc:
    """Quotient of polynomials in canonical form: gcd-reduced, denominator
    scaled to coprime integer coefficients with positive leading (graded-lex)
    coefficient.  Equal values compare equal as dataclasses."""
    num: Poly
    den: Poly


def ratfunc(num: Poly, den: Optional[Poly] = None) -> RatFunc:
    den = poly_const(1) if den is None else den
    if poly_is_zero(den):
        raise ZeroDivisionError("rational function with zero denominator")
    if poly_is_zero(num):
        return RatFunc({}, poly_const(1))
    g = poly_gcd(num, den)
    num = poly_divexact(num, g)
    den = poly_divexact(den, g)
    canonical_den = _normalize_primitive(den)
    # den = scale * canonical_den; divide num by the same scale
    e, c = poly_leading(den)
    scale = c / canonical_den[e]
    num = poly_scale(num, 1 / scale)
    return RatFunc(num, canonical_den)


def rf_from_const(c) -> RatFunc:
    return ratfunc(poly_const(c))


def rf_from_poly(p: Poly) -> RatFunc:
    return ratfunc(dict(p))


def rf_is_zero(r: RatFunc) -> bool:
    return poly_is_zero(r.num)


def rf_add(a: RatFunc, b: RatFunc) -> RatFunc:
    return ratfunc(
        poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
        poly_mul(a.den, b.den),
    )


def rf_neg(a: RatFunc) -> RatFunc:
    return RatFunc(poly_neg(a.num), a.den)


def rf_sub(a: RatFunc, b: RatFunc) -> RatFunc:
    return rf_add(a, rf_neg(b))


def rf_mul(a: RatFunc, b: RatFunc) -> RatFunc:
    return ratfunc(poly_mul(a.num, b.num), poly_mul(a.den, b.den))


def rf_div(a: RatFunc, b: RatFunc) -> RatFunc:
    if rf_is_zero(b):
        raise ZeroDivisionError("division by the zero rational function")
    return ratfunc(poly_mul(a.num, b.den), poly_mul(a.den, b.num))


def rf_scale(a: RatFunc, c) -> RatFunc:
    return RatFunc(poly_scale(a.num, c), a.den) if Fraction(c) != 0 else ratfunc({})


def rf_eval(a: RatFunc, point: Sequence) -> Fraction:
    den = poly_eval(a.den, point)
    if den == 0:
        raise ZeroDivisionError("rational function has a pole at the point")
    return poly_eval(a.num, point) / den


def rf_is_constant(a: RatFunc) -> bool:
    return poly_is_constant(a.num) and poly_is_constant(a.den)


def rf_constant_value(a: RatFunc) -> Fraction:
    if not rf_is_constant(a):
        raise ValueError("rational function is not constant")
    return poly_constant_value(a.num) / poly_constant_value(a.den)


def rf_is_polynomial(a: RatFunc) -> bool:
    return poly_is_constant(a.den)


def rf_as_poly(a: RatFunc) -> Poly:
    """The polynomial a.num/a.den when the denominator is constant."""
    if not rf_is_polynomial(a):
        raise ValueError("rational function is not a polynomial")
    return poly_scale(a.num, 1 / poly_constant_value(a.den))


def rf_diff(a: RatFunc, var: int) -> RatFunc:
    # quotient rule (num' den - num den') / den^2
    return ratfunc(
        poly_sub(poly_mul(poly_diff(a.num, var), a.den),
                 poly_mul(a.num, poly_diff(a.den, var))),
        poly_mul(a.den, a.den),
    )


def rf_to_string(a: RatFunc) -> str:
    if poly_is_constant(a.den) and poly_constant_value(a.den) == 1:
        return poly_to_string(a.num)
    return "(%s) / (%s)" % (poly_to_string(a.num), poly_to_string(a.den))


# ---------------------------------------------------------------------------
# exponential-polynomials
# ---------------------------------------------------------------------------

def _rate(values: Sequence) -> Rate:
    lx, lh, lz = (Fraction(v) for v in values)
    return (lx, lh, lz)


def ep_zero() -> ExpPoly:
    return {}


def ep_from_poly(p: Poly, rate: Sequence = ZERO_RATE) -> ExpPoly:
    return {} if poly_is_zero(p) else {_rate(rate): dict(p)}


def ep_is_zero(p: ExpPoly) -> bool:
    return not p


def ep_add(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    out = {r: dict(q) for r, q in a.items()}
    for r, q in b.items():
        s = poly_add(out.get(r, {}), q)
        if poly_is_zero(s):
            out.pop(r, None)
        else:
            out[r] = s
    return out


def ep_neg(a: ExpPoly) -> ExpPoly:
    return {r: poly_neg(q) for r, q in a.items()}


def ep_sub(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    return ep_add(a, ep_neg(b))


def ep_scale(a: ExpPoly, c) -> ExpPoly:
    if Fraction(c) == 0:
        return {}
    return {r: poly_scale(q, c) for r, q in a.items()}


def ep_mul(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    out: ExpPoly = {}
    for ra, qa in a.items():
        for rb, qb in b.items():
            r = (ra[0] + rb[0], ra[1] + rb[1], ra[2] + rb[2])
            s = poly_add(out.get(r, {}), poly_mul(qa, qb))
            if poly_is_zero(s):
                out.pop(r, None)
            else:
                out[r] = s
    return out


def ep_mul_poly(a: ExpPoly, p: Poly) -> ExpPoly:
    return ep_mul(a, ep_from_poly(p))


def ep_diff(a: ExpPoly, var: int) -> ExpPoly:
    """d/dvar of sum exp(r . coords) q  =  sum exp(r . coords)(r_var q + dq)."""
    out: ExpPoly = {}
    for r, q in a.items():
        part = poly_add(poly_scale(q, r[var]), poly_diff(q, var))
        if not poly_is_zero(part):
            s = poly_add(out.get(r, {}), part)
            if poly_is_zero(s):
                out.pop(r, None)
            else:
                out[r] = s
    return out


def ep_eval_exact(a: ExpPoly, point: Sequence) -> Fraction:
    """Exact value; requires every rate to pair to zero with the point
    (then each exponential factor is exactly 1)."""
    pt = [Fraction(v) for v in point]
    total = Fraction(0)
    for r, q in a.items():
        if r[0] * pt[0] + r[1] * pt[1] + r[2] * pt[2] != 0:
            raise ValueError("exponential factor is irrational at the point")
        total += poly_eval(q, pt)
    return total


def ep_eval_float(a: ExpPoly, point: Sequence) -> float:
    import math

    pt = [Fraction(v) for v in point]
    total = 0.0
    for r, q in a.items():
        arg = r[0] * pt[0] + r[1] * pt[1] + r[2] * pt[2]
        total += math.exp(float(arg)) * float(poly_eval(q, pt))
    return total


def ep_evaluates_exactly(a: ExpPoly, point: Sequence) -> bool:
    pt = [Fraction(v) for v in point]
    return all(r[0] * pt[0] + r[1] * pt[1] + r[2] * pt[2] == 0 for r in a)


def _rate_string(r: Rate) -> str:
    parts = []
    for value, name in zip(r, VAR_NAMES):
        if value == 0:
            continue
        if value == 1:
            term = name
        elif value == -1:
            term = "-" + name
        else:
            term = "%s*%s" % (value, name)
        if parts and not term.startswith("-"):
            parts.append("+" + term)
        else:
            parts.append(term)
    return "".join(parts) or "0"


def ep_to_string(a: ExpPoly) -> str:
    if not a:
        return "0"
    pieces = []
    for r in sorted(a, key=lambda r: (r != ZERO_RATE, r)):
        body = poly_to_string(a[r])
        if r == ZERO_RATE:
            pieces.append(body)
        elif body == "1":
            pieces.append("exp(%s)" % _rate_string(r))
        else:
            pieces.append("(%s)*exp(%s)" % (body, _rate_string(r)))
    return " + ".join(pieces)


# ---------------------------------------------------------------------------
# exact square roots
# ---------------------------------------------------------------------------

def square_split(n: Fraction) -> Tuple[Fraction, int]:
    """Write a positive rational as n = m^2 * w with w a squarefree
    positive integer; returns (m, w)."""
    if n <= 0:
        raise ValueError("square_split expects a positive rational")
    num, den = n.numerator, n.denominator
    # n = (num*den)/den^2, so the part under the root is an integer
    inner = num * den
    m = Fraction(1, den)
    d = 2
    while d * d <= inner:
        count = 0
        while inner % (d * d) == 0:
            inner //= d * d
            count += 1
        if count:
            m *= d ** count
        d += 1
    return m, int(inner)


def sqrt_exact(n) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None when the root
    is irrational (or the input negative)."""
    n = Fraction(n)
    if n < 0:
        return None
    if n == 0:
        return Fraction(0)
    m, w = square_split(n)
    return m if w == 1 else None


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def mat_identity(n: int) -> Matrix:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def mat_copy(m: Matrix) -> Matrix:
    return [[Fraction(v) for v in row] for row in m]


def mat_transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            aik = a[i][k]
            if aik == 0:
                continue
            for j in range(cols):
                out[i][j] += aik * b[k][j]
    return out


def mat_vec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    return [sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in m]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(m: Matrix, c) -> Matrix:
    c = Fraction(c)
    return [[c * v for v in row] for row in m]


def mat_neg(m: Matrix) -> Matrix:
    return [[-v for v in row] for row in m]


def mat_equal(a: Matrix, b: Matrix) -> bool:
    return a == b


def mat_trace(m: Matrix) -> Fraction:
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


def mat_det(m: Matrix) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    a = mat_copy(m)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_inverse(m: Matrix) -> Matrix:
    n = len(m)
    work = [row[:] + ident[:] for row, ident in zip(mat_copy(m), mat_identity(n))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [v * inv for v in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [v - factor * w for v, w in zip(work[r], work[col])]
    return [row[n:] for row in work]


def rref(m: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns.

    Deterministic: the pivot in each column is the first nonzero entry
    scanning the remaining rows top to bottom.
    """
    a = mat_copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                factor = a[i][c]
                a[i] = [v - factor * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def _integer_rows(m: Matrix) -> List[List[int]]:
    out = []
    for row in m:
        lcm = 1
        for v in row:
            f = Fraction(v)
            lcm = lcm * f.denominator // _gcd_int(lcm, f.denominator)
        out.append([int(Fraction(v) * lcm) for v in row])
    return out


def _bareiss_echelon(m: List[List[int]]) -> Tuple[List[List[int]], List[int]]:
    """Fraction-free row echelon (Bareiss).  Returns echelon + pivot cols."""
    a = [row[:] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: List[int] = []
    prev = 1
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def matrix_rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    _, pivots = _bareiss_echelon(_integer_rows(m))
    return len(pivots)


def nullspace(m: Matrix) -> List[Vector]:
    """Deterministic exact basis of the right kernel of m.

    Forward elimination is fraction-free (Bareiss); the basis is then read
    off the reduced echelon form: one vector per free column, carrying 1 in
    the free coordinate.
    """
    if not m:
        return []
    cols = len(m[0])
    if cols == 0:
        return []
    echelon, pivots = _bareiss_echelon(_integer_rows(m))
    # reduce the integer echelon to RREF over the rationals
    reduced = [[Fraction(v) for v in row] for row in echelon[: len(pivots)]]
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        inv = 1 / reduced[r][c]
        reduced[r] = [v * inv for v in reduced[r]]
        for i in range(r):
            factor = reduced[i][c]
            if factor != 0:
                reduced[i] = [v - factor * w for v, w in zip(reduced[i], reduced[r])]
    free_cols = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][fc]
        basis.append(v)
    return basis


def solve_linear(m: Matrix, b: Vector) -> Optional[Vector]:
    """One exact solution of m v = b (free variables set to 0), or None."""
    if not m:
        return None if any(x != 0 for x in b) else []
    cols = len(m[0])
    augmented = [row[:] + [b[i]] for i, row in enumerate(mat_copy(m))]
    reduced, pivots = rref(augmented)
    if cols in pivots:  # pivot in the constant column: inconsistent
        return None
    v = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        v[pc] = reduced[r][cols]
    return v


def symmetric_signature(m: Matrix) -> Tuple[int, int, int]:
    """(positives, negatives, zeros) of a symmetric rational matrix by
    exact congruence diagonalization."""
    n = len(m)
    a = mat_copy(m)
    pos = neg = zero = 0
    index = 0
    while index < n:
        if a[index][index] == 0:
            # look for a nonzero diagonal entry to swap in
            swap = next(
                (j for j in range(index + 1, n) if a[j][j] != 0), None
            )
            if swap is not None:
                # congruence by a transposition
                a[index], a[swap] = a[swap], a[index]
                for row in a:
                    row[index], row[swap] = row[swap], row[index]
            else:
                # all remaining diagonal entries vanish; use an off-diagonal
                pair = next(
                    (
                        (i, j)
                        for i in range(index, n)
                        for j in range(i + 1, n)
                        if a[i][j] != 0
                    ),
                    None,
                )
                if pair is None:
                    zero += n - index
                    break
                i, j = pair
                # add row/col j onto row/col i: new a[i][i] = 2 a[i][j] != 0
                for k in range(n):
                    a[i][k] += a[j][k]
                for k in range(n):
                    a[k][i] += a[k][j]
                if i != index:
                    a[index], a[i] = a[i], a[index]
                    for row in a:
                        row[index], row[i] = row[i], row[index]
        d = a[index][index]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(index + 1, n):
            if a[i][index] != 0:
                factor = a[i][index] / d
                for k in range(n):
                    a[i][k] -= factor * a[index][k]
                for k in range(n):
                    a[k][i] -= factor * a[k][index]
        index += 1
    return pos, neg, zero


def congruence_diagonalization(m: Matrix) -> Tuple[Matrix, Vector]:
    """Invertible rational S with S^T m S diagonal; returns (S, diagonal).

    Same pivoting strategy as symmetric_signature, but tracking the basis.
    """
    n = len(m)
    a = mat_copy(m)
    s = mat_identity(n)

    def swap_basis(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in s:
            row[i], row[j] = row[j], row[i]

    index = 0
    while index < n:
        if a[index][index] == 0:
            swap = next((j for j in range(index + 1, n) if a[j][j] != 0), None)
            if swap is not None:
                swap_basis(index, swap)
            else:
                pair = next(
                    (
                        (i, j)
                        for i in range(index, n)
                        for j in range(i + 1, n)
                        if a[i][j] != 0
                    ),
                    None,
                )
                if pair is None:
                    break
                i, j = pair
                for k in range(n):
                    a[i][k] += a[j][k]
                for k in range(n):
                    a[k][i] += a[k][j]
                for row in s:
                    row[i] += row[j]
                if i != index:
                    swap_basis(index, i)
        d = a[index][index]
        if d == 0:
            break
        for i in range(index + 1, n):
            if a[i][index] != 0:
                factor = a[i][index] / d
                for k in range(n):
                    a[i][k] -= factor * a[index][k]
                for k in range(n):
                    a[k][i] -= factor * a[k][index]
                for row in s:
                    row[i] -= factor * row[index]
        index += 1
    diag = [a[i][i] for i in range(n)]
    return s, diag
