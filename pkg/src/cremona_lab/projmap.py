"""Homogeneous rational self-maps of the projective plane.

Maps are triples of homogeneous polynomials in x, y, z over Q(i), or over
complex balls when parameters are irrational.  Exact composition removes the
common factor of the three components, so degrees reported here are true
degrees of the birational map and not of a particular representative.

Content removal runs in three stages: monomial content, then a modular
coprimality certificate (restrictions to random lines modulo a prime that
splits in Z[i]), and only when that certificate fails an exact bivariate
primitive remainder sequence.
"""

from __future__ import annotations

import enum
import heapq
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import mpmath

from .arith import (
    ArithError,
    ComplexBall,
    DivisionByZero,
    GaussianRational,
    NonDivisible,
    Scalar,
    gaussian_rational_roots,
    is_exact,
    simplify_scalar,
    upoly_divmod,
    upoly_eval,
    upoly_gcd,
    upoly_monic,
    upoly_trim,
)

Coefficient = Union[int, Fraction, GaussianRational, ComplexBall]
Exponent = tuple[int, ...]

VARIABLES = ("x", "y", "z")


class ProjmapError(Exception):
    pass


class BallCoefficients(ProjmapError):
    """An exact-only operation received a map with ball coefficients."""


class NullComposition(ProjmapError):
    pass


class ZeroJacobian(ProjmapError):
    pass


class Inconclusive(ProjmapError):
    pass


class MapParseError(ProjmapError, ValueError):
    pass


# ---------------------------------------------------------------------------
# Sparse multivariate polynomials
# ---------------------------------------------------------------------------


class MPoly:
    """Sparse polynomial stored as ``{exponent tuple: coefficient}``.

    Terms are dropped only when their coefficient is an exact zero; a ball
    coefficient containing zero is kept.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Coefficient] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Coefficient] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError("exponent length does not match variable count")
                if is_exact(c):
                    if c == 0:
                        continue
                    c = simplify_scalar(c)
                clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    @staticmethod
    def _raw(nvars: int, terms: dict) -> "MPoly":
        p = MPoly.__new__(MPoly)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @staticmethod
    def zero(nvars: int = 3) -> "MPoly":
        return MPoly._raw(nvars, {})

    @staticmethod
    def constant(c: Coefficient, nvars: int = 3) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: c})

    @staticmethod
    def var(k: int, nvars: int = 3) -> "MPoly":
        e = [0] * nvars
        e[k] = 1
        return MPoly._raw(nvars, {tuple(e): 1})

    @staticmethod
    def monomial(exponent: Sequence[int], c: Coefficient = 1) -> "MPoly":
        return MPoly(len(exponent), {tuple(exponent): c})

    # -- queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, k: int) -> int:
        return max((e[k] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.terms.values())

    def coefficient(self, exponent: Sequence[int]) -> Coefficient:
        return self.terms.get(tuple(exponent), 0)

    def leading_exponent(self) -> Exponent:
        return max(self.terms)

    def leading_coefficient(self) -> Coefficient:
        return self.terms[max(self.terms)]

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if is_exact(other):
            return self == MPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "MPoly | None":
        if isinstance(other, MPoly):
            return other
        if is_exact(other) or isinstance(other, ComplexBall):
            return MPoly.constant(other, self.nvars)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            if e in out:
                out[e] = out[e] + c
            else:
                out[e] = c
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c: Coefficient) -> "MPoly":
        if is_exact(c) and c == 0:
            return MPoly.zero(self.nvars)
        return MPoly(self.nvars, {e: v * c for e, v in self.terms.items()})

    def shift(self, exponent: Sequence[int]) -> "MPoly":
        """Multiply by the monomial with the given exponent."""
        return MPoly._raw(self.nvars, {tuple(a + b for a, b in zip(e, exponent)): c
                                       for e, c in self.terms.items()})

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.terms) == 1 and not len(self.terms) == 1:
            return o * self
        if not self.terms or not o.terms:
            return MPoly.zero(self.nvars)
        return MPoly._raw(self.nvars, _mul_terms(self.terms, o.terms, self.nvars))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = MPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def derivative(self, k: int) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                out[tuple(e2)] = c * e[k]
        return MPoly(self.nvars, out)

    def evaluate(self, values: Sequence):
        """Value at a point; values may be exact scalars or balls."""
        if any(isinstance(v, ComplexBall) for v in values) or not self.is_exact():
            prec = max((v.prec for v in list(values) + list(self.terms.values())
                        if isinstance(v, ComplexBall)), default=None)
            acc = ComplexBall.exact(0, prec)
        else:
            acc = 0
        powers = [dict() for _ in range(self.nvars)]
        for e, c in self.terms.items():
            term = c
            for k, ek in enumerate(e):
                if ek:
                    pk = powers[k].get(ek)
                    if pk is None:
                        pk = values[k] ** ek
                        powers[k][ek] = pk
                    term = term * pk
            acc = acc + term
        if is_exact(acc):
            return simplify_scalar(acc)
        return acc

    def substitute(self, polys: Sequence["MPoly"]) -> "MPoly":
        """Replace variable k by ``polys[k]``."""
        if len(polys) != self.nvars:
            raise ValueError("substitution arity mismatch")
        nv = polys[0].nvars
        cache: dict[tuple[int, int], MPoly] = {}

        def power(k: int, e: int) -> MPoly:
            if e == 0:
                return MPoly.constant(1, nv)
            key = (k, e)
            if key not in cache:
                if e == 1:
                    cache[key] = polys[k]
                else:
                    half = power(k, e // 2)
                    sq = half * half
                    cache[key] = sq * polys[k] if e % 2 else sq
            return cache[key]

        acc: dict = {}
        for e, c in self.terms.items():
            term = MPoly.constant(c, nv)
            for k, ek in enumerate(e):
                if ek:
                    term = term * power(k, ek)
            for ex, v in term.terms.items():
                acc[ex] = acc[ex] + v if ex in acc else v
        return MPoly(nv, acc)

    def map_coefficients(self, fn) -> "MPoly":
        return MPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def monomial_content(self) -> Exponent:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[k] for e in self.terms) for k in range(self.nvars))

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        """Quotient when ``divisor`` divides ``self``; NonDivisible otherwise."""
        return self.divmod(divisor, exact=True)[0]

    def divmod(self, divisor: "MPoly", exact: bool = False) -> tuple["MPoly", "MPoly"]:
        """Lex-order division by a single divisor.

        The remainder collects terms not divisible by the divisor's leading
        monomial.  With ``exact`` the first such term raises NonDivisible.
        """
        if not divisor.terms:
            raise DivisionByZero("division by the zero polynomial")
        lead_e = max(divisor.terms)
        lead_c = divisor.terms[lead_e]
        tail = [(de, dc) for de, dc in divisor.terms.items() if de != lead_e]
        rem = dict(self.terms)
        heap = [tuple(-a for a in e) for e in rem]
        heapq.heapify(heap)
        quot: dict = {}
        left: dict = {}
        while heap:
            neg = heapq.heappop(heap)
            e = tuple(-a for a in neg)
            c = rem.pop(e, None)
            if c is None:
                continue
            shift = tuple(a - b for a, b in zip(e, lead_e))
            if any(s < 0 for s in shift):
                if exact:
                    raise NonDivisible("polynomial does not divide exactly")
                left[e] = c
                continue
            qc = _exact_div_scalar(c, lead_c)
            if type(qc) is not int:
                qc = simplify_scalar(qc)
            quot[shift] = qc
            for de, dc in tail:
                te = tuple(a + b for a, b in zip(de, shift))
                old = rem.get(te)
                if old is None:
                    rem[te] = -qc * dc
                    heapq.heappush(heap, tuple(-a for a in te))
                else:
                    v = old - qc * dc
                    if v == 0:
                        del rem[te]
                    else:
                        rem[te] = v
        return MPoly(self.nvars, quot), MPoly(self.nvars, left)

    def __str__(self) -> str:
        return format_mpoly(self)

    def __repr__(self) -> str:
        return f"MPoly({format_mpoly(self)})"


def _exact_div_scalar(a, b):
    if isinstance(a, int) and isinstance(b, int):
        if a % b == 0:
            return a // b
        return Fraction(a, b)
    return a / b


def _mul_terms(a: dict, b: dict, nvars: int) -> dict:
    out: dict = {}
    get = out.get
    if nvars == 3:
        for (a0, a1, a2), ca in a.items():
            for (b0, b1, b2), cb in b.items():
                e = (a0 + b0, a1 + b1, a2 + b2)
                out[e] = get(e, 0) + ca * cb
    elif nvars == 2:
        for (a0, a1), ca in a.items():
            for (b0, b1), cb in b.items():
                e = (a0 + b0, a1 + b1)
                out[e] = get(e, 0) + ca * cb
    else:
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
    clean = {}
    for e, c in out.items():
        if type(c) is int:
            if c:
                clean[e] = c
        elif is_exact(c):
            if c != 0:
                clean[e] = simplify_scalar(c)
        else:
            clean[e] = c
    return clean


def format_mpoly(p: MPoly, names: Sequence[str] = VARIABLES) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e in sorted(p.terms, reverse=True):
        c = p.terms[e]
        mono = "*".join(
            (names[k] if ek == 1 else f"{names[k]}^{ek}") for k, ek in enumerate(e) if ek
        )
        if isinstance(c, ComplexBall):
            cs = f"[{mpmath.nstr(c.mid, 12)}]"
            parts.append(("+", cs + ("*" + mono if mono else "")))
            continue
        g = GaussianRational.coerce(c)
        neg = (g.im == 0 and g.re < 0) or (g.re == 0 and g.im < 0)
        if neg:
            g = -g
        if g == 1 and mono:
            cs = ""
        elif g.im == 0 or g.re == 0:
            cs = str(g)
        else:
            cs = f"({g})"
        if cs and mono:
            body = f"{cs}*{mono}"
        else:
            body = cs or mono
        parts.append(("-" if neg else "+", body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


X = MPoly.var(0)
Y = MPoly.var(1)
Z = MPoly.var(2)


# ---------------------------------------------------------------------------
# Points and maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of P^2 in normalized coordinates.

    Exact points have their first nonzero coordinate equal to 1; ball points
    have the coordinate of largest midpoint modulus equal to 1.
    """

    coords: tuple

    def __post_init__(self) -> None:
        coords = tuple(self.coords)
        if len(coords) != 3:
            raise ValueError("projective points have three coordinates")
        object.__setattr__(self, "coords", _normalize_coords(coords))

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k: int):
        return self.coords[k]

    def close_to(self, other: "ProjectivePoint", tol: float = 1e-10) -> bool:
        """Coordinatewise agreement after normalization, within ``tol``."""
        for a, b in zip(_as_complex_coords(self), _as_complex_coords(other)):
            if abs(a - b) > tol:
                return False
        return True

    def possibly_equal(self, other: "ProjectivePoint") -> bool:
        """True unless some pair of coordinates is certainly different."""
        for a, b in zip(self.coords, other.coords):
            ba = a if isinstance(a, ComplexBall) else ComplexBall.exact(a)
            bb = b if isinstance(b, ComplexBall) else ComplexBall.exact(b)
            if ba.disjoint(bb):
                return False
        return True

    def __str__(self) -> str:
        return "(" + ":".join(_coord_str(c) for c in self.coords) + ")"


def _coord_str(c) -> str:
    if isinstance(c, ComplexBall):
        return mpmath.nstr(c.mid, 12)
    return str(GaussianRational.coerce(c))


def _as_complex_coords(p: ProjectivePoint) -> list[complex]:
    out = []
    for c in p.coords:
        out.append(complex(c.mid) if isinstance(c, ComplexBall) else complex(GaussianRational.coerce(c)))
    return out


def _normalize_coords(coords: tuple) -> tuple:
    if all(is_exact(c) for c in coords):
        pivot = next((c for c in coords if c != 0), None)
        if pivot is None:
            raise ValueError("(0:0:0) is not a projective point")
        return tuple(simplify_scalar(_exact_div_scalar(c, pivot) if c != 0 else 0) for c in coords)
    balls = [c if isinstance(c, ComplexBall) else ComplexBall.exact(c) for c in coords]
    k = max(range(3), key=lambda j: abs(balls[j].mid))
    if balls[k].mid == 0:
        raise ValueError("(0:0:0) is not a projective point")
    pivot = balls[k]
    out = []
    for j, c in enumerate(coords):
        if j == k:
            out.append(1)
        elif is_exact(c) and c == 0:
            out.append(0)
        else:
            try:
                out.append(balls[j] / pivot)
            except DivisionByZero:
                return tuple(coords)
    return tuple(out)


@dataclass(frozen=True)
class Indeterminate:
    """Evaluation result at a common zero of the components.

    ``certain`` is False for ball evaluations where every component enclosure
    merely contains zero.
    """

    point: ProjectivePoint | None = None
    certain: bool = True

    def __str__(self) -> str:
        return "indeterminate" if self.certain else "possibly indeterminate"


@dataclass(frozen=True, eq=False)
class HomogeneousMap:
    """Triple of homogeneous polynomials in x, y, z of a common degree."""

    components: tuple[MPoly, MPoly, MPoly]
    degree: int = field(default=-1)

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if len(comps) != 3:
            raise ValueError("a plane map has three components")
        if all(c.is_zero() for c in comps):
            raise NullComposition("all components vanish")
        degs = {c.total_degree() for c in comps if not c.is_zero()}
        if len(degs) != 1 or not all(c.is_homogeneous() for c in comps):
            raise ValueError("components must be homogeneous of one degree")
        d = degs.pop()
        if d < 1:
            raise ValueError("map degree must be at least 1")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "degree", d)

    @staticmethod
    def from_components(components: Sequence[MPoly], reduce: bool = True) -> "HomogeneousMap":
        """Build a map, removing the common factor when coefficients are exact."""
        comps = tuple(components)
        if reduce and all(c.is_exact() for c in comps):
            comps = remove_content(comps)
        return HomogeneousMap(comps)

    @staticmethod
    def parse(text: str) -> "HomogeneousMap":
        return parse_map(text)

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact() for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousMap):
            return NotImplemented
        return same_map(self, other)

    def __hash__(self) -> int:
        return hash(self.degree)

    def __call__(self, point: ProjectivePoint):
        return evaluate(self, point)

    def __str__(self) -> str:
        return "(" + " : ".join(format_mpoly(c) for c in self.components) + ")"

    def __repr__(self) -> str:
        return f"HomogeneousMap{self}"


def same_map(f: HomogeneousMap, g: HomogeneousMap) -> bool:
    """True when f and g agree as projective maps (components proportional)."""
    if f.degree != g.degree:
        return False
    ratio = None
    for a, b in zip(f.components, g.components):
        if a.is_zero() != b.is_zero():
            return False
        if a.is_zero():
            continue
        if set(a.terms) != set(b.terms):
            return False
        e = next(iter(a.terms))
        r = _exact_div_scalar(b.terms[e], a.terms[e]) if a.is_exact() and b.is_exact() else None
        if r is None:
            return a == b
        if ratio is None:
            ratio = r
        if a.scale(ratio) != b:
            return False
    return True


def identity_map() -> HomogeneousMap:
    return HomogeneousMap((X, Y, Z))


def linear_map(matrix: Sequence[Sequence[Scalar]]) -> HomogeneousMap:
    """The map v -> A v on column vectors (x, y, z)."""
    comps = []
    for row in matrix:
        comps.append(row[0] * X + row[1] * Y + row[2] * Z)
    return HomogeneousMap.from_components(comps)


# ---------------------------------------------------------------------------
# Content removal
# ---------------------------------------------------------------------------

# A prime p = 1 (mod 4) with a fixed square root of -1; reduction modulo
# the Gaussian prime (p, i - SQRT_MINUS_ONE) maps Z[i] onto Z/p.
CERT_PRIME = 2305843009213693973
SQRT_MINUS_ONE = 1035093963448091331


def remove_content(components: Sequence[MPoly]) -> tuple[MPoly, MPoly, MPoly]:
    """Divide three homogeneous forms by their gcd and scale canonically."""
    comps = [c for c in components]
    nonzero = [c for c in comps if c]
    if not nonzero:
        raise NullComposition("all components vanish")
    shift = tuple(min(c.monomial_content()[k] for c in nonzero) for k in range(3))
    if any(shift):
        neg = tuple(-s for s in shift)
        comps = [c.shift(neg) if c else c for c in comps]
    # a common factor would divide a monomial, so it is already shifted out
    has_monomial = any(len(c) == 1 for c in comps if c)
    if not has_monomial and not _certified_coprime(comps):
        g, quotients = form_gcd_with_cofactors(comps)
        if g.total_degree() > 0:
            comps = quotients
    return _canonical_scaling(comps)


def _canonical_scaling(comps: Sequence[MPoly]) -> tuple[MPoly, MPoly, MPoly]:
    """Scale to Gaussian-integer coefficients with unit content.

    The leading coefficient of the first nonzero component is put in the
    first quadrant (real part > 0, imaginary part >= 0).
    """
    coeffs = [c for p in comps for c in p.terms.values()]
    if all(type(c) is int for c in coeffs):
        g = 0
        for c in coeffs:
            g = math.gcd(g, c)
        first = next(p for p in comps if p)
        if first.leading_coefficient() < 0:
            g = -g
        if g == 1:
            return tuple(comps)
        return tuple(MPoly._raw(3, {e: c // g for e, c in p.terms.items()}) for p in comps)
    den = 1
    for c in coeffs:
        gc = GaussianRational.coerce(c)
        for part in (gc.re, gc.im):
            den = den * part.denominator // math.gcd(den, part.denominator)
    ints = []
    for c in coeffs:
        gc = GaussianRational.coerce(c) * den
        ints.append((int(gc.re), int(gc.im)))
    g = (0, 0)
    for v in ints:
        g = _gauss_gcd(g, v)
    first = next(p for p in comps if p)
    lead = GaussianRational.coerce(first.leading_coefficient()) * den
    lead_q = _gauss_divide_exact((int(lead.re), int(lead.im)), g)
    # Rotate by a unit so the leading coefficient lies in the first quadrant.
    unit = (1, 0)
    for u in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        re = lead_q[0] * u[0] - lead_q[1] * u[1]
        im = lead_q[0] * u[1] + lead_q[1] * u[0]
        if re > 0 and im >= 0:
            unit = u
            break
    factor = GaussianRational(Fraction(den), Fraction(0)) / GaussianRational(Fraction(g[0]), Fraction(g[1]))
    factor = factor * GaussianRational(Fraction(unit[0]), Fraction(unit[1]))
    return tuple(p.scale(factor) for p in comps)


def _gauss_gcd(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    while b != (0, 0):
        q = _gauss_round_div(a, b)
        r = (a[0] - (q[0] * b[0] - q[1] * b[1]), a[1] - (q[0] * b[1] + q[1] * b[0]))
        a, b = b, r
    return a


def _gauss_round_div(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    return (_round_div(re, n), _round_div(im, n))


def _round_div(a: int, n: int) -> int:
    return (2 * a + n) // (2 * n)


def _gauss_divide_exact(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    return (re // n, im // n)


def _mod_p(c, p: int = CERT_PRIME) -> int | None:
    """Image of an element of Q(i) in Z/p, or None if a denominator is divisible by p."""
    g = GaussianRational.coerce(c)
    out = 0
    for part, mult in ((g.re, 1), (g.im, SQRT_MINUS_ONE)):
        if part == 0:
            continue
        if part.denominator % p == 0:
            return None
        out += part.numerator * pow(part.denominator, -1, p) * mult
    return out % p


def _restrict_mod_p(poly: MPoly, m: int, c: int, p: int) -> list[int] | None:
    """Coefficients of poly(s, m*s + c, 1) modulo p, ascending in s."""
    by_y: dict[int, dict[int, int]] = {}
    for (a, b, _), coef in poly.terms.items():
        r = _mod_p(coef, p)
        if r is None:
            return None
        row = by_y.setdefault(b, {})
        row[a] = (row.get(a, 0) + r) % p
    if not by_y:
        return []
    top = max(by_y)
    acc: list[int] = []
    for b in range(top, -1, -1):
        # acc <- acc * (m s + c) + row_b
        new = [0] * (len(acc) + 1) if acc else []
        for k, v in enumerate(acc):
            if v:
                new[k] = (new[k] + v * c) % p
                new[k + 1] = (new[k + 1] + v * m) % p
        row = by_y.get(b, {})
        if row:
            width = max(row) + 1
            if len(new) < width:
                new.extend([0] * (width - len(new)))
            for a, v in row.items():
                new[a] = (new[a] + v) % p
        acc = new
    while acc and acc[-1] == 0:
        acc.pop()
    return acc


def _gcd_mod_p(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            if a[-1] == 0:
                a.pop()
                continue
            f = a[-1] * inv % p
            off = len(a) - len(b)
            for k, v in enumerate(b):
                a[off + k] = (a[off + k] - f * v) % p
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return a


def _certified_coprime(comps: Sequence[MPoly], attempts: int = 3) -> bool:
    """Modular certificate that three forms have no common factor.

    The restriction of a common factor G to a line is a binary form of degree
    deg G dividing every restricted component, and reduction modulo a prime
    of Z[i] preserves this when the components stay nonzero on the line.  A
    constant binary gcd on one line therefore proves deg G = 0.
    """
    nonzero = [c for c in comps if c]
    if len(nonzero) == 1:
        return nonzero[0].total_degree() == 0
    d = nonzero[0].total_degree()
    p = CERT_PRIME
    rng = random.Random(0x5EED ^ d ^ len(nonzero[0]))
    for _ in range(attempts):
        m = rng.randrange(2, p - 1)
        c = rng.randrange(2, p - 1)
        restricted = [_restrict_mod_p(f, m, c, p) for f in nonzero]
        if any(r is None for r in restricted):
            return False
        if any(not r for r in restricted):
            continue
        g = restricted[0]
        for r in restricted[1:]:
            g = _gcd_mod_p(g, r, p)
        binary_deg = (len(g) - 1) + min(d - (len(r) - 1) for r in restricted)
        if binary_deg == 0:
            return True
    return False


def form_gcd(comps: Sequence[MPoly]) -> MPoly:
    """Exact gcd of homogeneous forms in x, y, z without common monomial factor."""
    return form_gcd_with_cofactors(comps)[0]


def form_gcd_with_cofactors(comps: Sequence[MPoly]) -> tuple[MPoly, list[MPoly]]:
    """The gcd together with the exact quotients of every input form.

    The modular algorithm is tried first; a primitive remainder sequence over
    Q(i)[y] is the fallback when modular reconstruction does not verify.
    """
    nonzero = [c for c in comps if c]
    if not nonzero:
        raise NullComposition("gcd of zero forms")
    found = _modular_form_gcd(nonzero) if len(nonzero) > 1 else None
    if found is not None:
        g, quotients = found
        if g.total_degree() <= 0:
            return MPoly.constant(1), list(comps)
        it = iter(quotients)
        return g, [next(it) if c else c for c in comps]
    if len(nonzero) == 1:
        g = _canonical_scaling([nonzero[0]])[0]
    else:
        biv = [_dehomogenize(c) for c in nonzero]
        acc = biv[0]
        for b in biv[1:]:
            acc = _bivariate_gcd(acc, b)
            if _xdeg(acc) == 0 and _is_constant(acc):
                break
        g = _canonical_scaling([_homogenize(acc)])[0]
    if g.total_degree() <= 0:
        return MPoly.constant(1), list(comps)
    return g, [c.exact_div(g) if c else c for c in comps]


# Primes p = 1 (mod 4) below 2^61 with a square root of -1 modulo p.
GCD_PRIMES = (
    (2305843009213693921, 583529827753931384),
    (2305843009213693693, 966685122347009555),
    (2305843009213693669, 1290453122423660404),
    (2305843009213693613, 330140092769082148),
    (2305843009213693561, 2183648776066960371),
    (2305843009213693549, 1655409490667276801),
    (2305843009213693421, 647753841339350312),
    (2305843009213693373, 2122200347098188385),
)

_SHEARS = ((1, 2), (2, 3), (3, 1), (-1, 2), (2, -3), (5, 7), (-4, 3), (7, -2))


def _modular_form_gcd(forms: Sequence[MPoly]) -> tuple[MPoly, list[MPoly]] | None:
    """gcd of homogeneous forms by evaluation, interpolation and reconstruction.

    A shear (x, y, z) -> (x, y + c x, z + e x) makes every form, and hence the
    gcd, have a constant leading coefficient in x.  Modulo a prime of Z[i] the
    monic gcd of the specializations at y = y_k then has degree at least the
    true degree, with equality at all but finitely many points; interpolation
    gives the sheared gcd modulo p.  Both embeddings of i recover real and
    imaginary parts, CRT and rational reconstruction lift them to Q(i), and a
    candidate is accepted only if it divides every form exactly.  A verified
    divisor of degree at least the true degree is the gcd.
    """
    shear = None
    for c, e in _SHEARS:
        if all(f.evaluate((1, c, e)) != 0 for f in forms):
            shear = (c, e)
            break
    if shear is None:
        return None
    c, e = shear
    sheared = [_shear(f, c, e) for f in forms]
    residues: list[tuple[int, dict[tuple[int, int], tuple[int, int]]]] = []
    degree = None
    for p, r in GCD_PRIMES:
        images = []
        for root in (r, p - r):
            img = _sheared_gcd_mod_p(sheared, p, root)
            if img is None:
                break
            images.append(img)
        if len(images) < 2:
            continue
        (d1, g1), (d2, g2) = images
        if d1 != d2:
            continue
        if d1 == 0:
            return MPoly.constant(1), list(forms)
        if degree is None or d1 < degree:
            degree = d1
            residues = []
        elif d1 > degree:
            continue
        inv2 = pow(2, -1, p)
        inv2r = pow(2 * r, -1, p)
        parts = {}
        for key in set(g1) | set(g2):
            u, v = g1.get(key, 0), g2.get(key, 0)
            parts[key] = ((u + v) * inv2 % p, (u - v) * inv2r % p)
        residues.append((p, parts))
        candidate = _reconstruct(residues, degree)
        if candidate is None:
            continue
        unshear = [X, Y - X.scale(c), Z - X.scale(e)]
        g = _canonical_scaling([candidate.substitute(unshear)])[0]
        try:
            quotients = [f.divmod(g, exact=True)[0] for f in forms]
        except NonDivisible:
            continue
        return g, quotients
    return None


def _shear(f: MPoly, c: int, e: int) -> MPoly:
    """f(x, y + c x, z + e x), one variable at a time by binomial expansion."""
    terms = f.terms
    for var, factor in ((1, c), (2, e)):
        acc: dict[Exponent, object] = {}
        for exp, coef in terms.items():
            n = exp[var]
            for j in range(n + 1):
                key = list(exp)
                key[0] += j
                key[var] -= j
                key = tuple(key)
                w = coef * (math.comb(n, j) * factor ** j)
                acc[key] = acc[key] + w if key in acc else w
        terms = acc
    return MPoly(3, terms)


def _sheared_gcd_mod_p(sheared: Sequence[MPoly], p: int, root: int):
    """Degree and coefficients {(x power, y power): value} of the monic gcd mod p."""
    tables = []
    for f in sheared:
        table: dict[int, dict[int, int]] = {}
        for (a, b, _), coef in f.terms.items():
            val = _embed_mod_p(coef, p, root)
            if val is None:
                return None
            row = table.setdefault(a, {})
            row[b] = (row.get(b, 0) + val) % p
        top = max(table)
        if not any(table[top].values()):
            return None
        tables.append((top, table))
    total = max(t[0] for t in tables)
    max_b = max(b for _, table in tables for row in table.values() for b in row)
    points: list[tuple[int, list[int]]] = []
    best = None
    y0 = 0
    while True:
        y0 += 1
        if y0 > 4 * total + 40:
            return None
        g: list[int] = []
        powers = [1]
        for _ in range(max_b):
            powers.append(powers[-1] * y0 % p)
        for top, table in tables:
            u = [0] * (top + 1)
            for a, row in table.items():
                u[a] = sum(v * powers[b] for b, v in row.items()) % p
            while u and u[-1] == 0:
                u.pop()
            g = _gcd_mod_p(g, u, p) if g else u
        inv = pow(g[-1], -1, p)
        g = [v * inv % p for v in g]
        d = len(g) - 1
        if d == 0:
            return 0, {(0, 0): 1}
        if best is None or d < best:
            best = d
            points = []
        if d == best:
            points.append((y0, g))
        if len(points) >= best + 1:
            break
    d = best
    xs = [pt[0] for pt in points]
    out: dict[tuple[int, int], int] = {}
    for a in range(d + 1):
        ys = [pt[1][a] for pt in points]
        coeffs = _interpolate_mod_p(xs, ys, p)
        for b, v in enumerate(coeffs):
            if v:
                out[(a, b)] = v
    return d, out


def _embed_mod_p(coef, p: int, root: int) -> int | None:
    g = GaussianRational.coerce(coef)
    out = 0
    for part, mult in ((g.re, 1), (g.im, root)):
        if part == 0:
            continue
        if part.denominator % p == 0:
            return None
        out += part.numerator * pow(part.denominator, -1, p) * mult
    return out % p


def _interpolate_mod_p(xs: Sequence[int], ys: Sequence[int], p: int) -> list[int]:
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    poly = [coef[-1]]
    for i in range(n - 2, -1, -1):
        new = [0] * (len(poly) + 1)
        for k, v in enumerate(poly):
            new[k + 1] = (new[k + 1] + v) % p
            new[k] = (new[k] - v * xs[i]) % p
        new[0] = (new[0] + coef[i]) % p
        poly = new
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _reconstruct(residues, degree: int) -> MPoly | None:
    """Lift CRT-combined residues to a homogeneous form of the given degree over Q(i)."""
    modulus = 1
    for p, _ in residues:
        modulus *= p
    keys = set()
    for _, parts in residues:
        keys |= set(parts)
    terms = {}
    for key in keys:
        re_val, im_val = 0, 0
        acc_mod = 1
        for p, parts in residues:
            u, v = parts.get(key, (0, 0))
            re_val = _crt(re_val, acc_mod, u, p)
            im_val = _crt(im_val, acc_mod, v, p)
            acc_mod *= p
        re_q = _rational_reconstruct(re_val, modulus)
        im_q = _rational_reconstruct(im_val, modulus)
        if re_q is None or im_q is None:
            return None
        a, b = key
        value = GaussianRational(re_q, im_q)
        if not value.is_zero():
            terms[(a, b, degree - a - b)] = value
    return MPoly(3, terms)


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return (r1 + m1 * t) % (m1 * m2)


def _rational_reconstruct(a: int, m: int) -> Fraction | None:
    """The fraction n/d = a (mod m) with |n|, d <= sqrt(m/2), if it exists."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    frac = Fraction(r1, s1)
    if math.gcd(frac.denominator, m) != 1:
        return None
    return frac


# Bivariate polynomials in x over Q(i)[y]: list indexed by the x power whose
# entries are ascending coefficient lists in y.

def _dehomogenize(p: MPoly) -> list[list]:
    dx = p.degree_in(0)
    out: list[list] = [[] for _ in range(dx + 1)]
    for (a, b, _), c in p.terms.items():
        row = out[a]
        if len(row) <= b:
            row.extend([0] * (b + 1 - len(row)))
        row[b] = row[b] + c
    return _btrim([upoly_trim(r) for r in out])


def _homogenize(g: list[list]) -> MPoly:
    deg = max((a + len(row) - 1 for a, row in enumerate(g) if row), default=0)
    terms = {}
    for a, row in enumerate(g):
        for b, c in enumerate(row):
            if c != 0:
                terms[(a, b, deg - a - b)] = c
    return MPoly(3, terms)


def _btrim(p: list[list]) -> list[list]:
    while p and not p[-1]:
        p.pop()
    return p


def _xdeg(p: list[list]) -> int:
    return len(p) - 1


def _is_constant(p: list[list]) -> bool:
    return len(p) == 1 and len(p[0]) <= 1


def _bcontent(p: list[list]) -> list:
    g: list = []
    for row in p:
        if row:
            g = upoly_gcd(g, row) if g else upoly_monic(row)
        if len(g) == 1:
            break
    return g


def _bprimitive(p: list[list]) -> list[list]:
    c = _bcontent(p)
    if len(c) <= 1:
        lead_row = p[-1]
        lc = lead_row[-1]
        return [[simplify_scalar(_exact_div_scalar(v, lc)) for v in row] for row in p]
    return [upoly_trim(upoly_divmod(row, c)[0]) if row else [] for row in p]


def _bmul_scalar_poly(p: list[list], q: list) -> list[list]:
    from .arith import upoly_mul
    return [upoly_mul(row, q) if row else [] for row in p]


def _bsub(a: list[list], b: list[list]) -> list[list]:
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        ra = a[k] if k < len(a) else []
        rb = b[k] if k < len(b) else []
        m = max(len(ra), len(rb))
        row = [simplify_scalar((ra[j] if j < len(ra) else 0) - (rb[j] if j < len(rb) else 0)) for j in range(m)]
        out.append(upoly_trim(row))
    return _btrim(out)


def _bprem(a: list[list], b: list[list]) -> list[list]:
    lb = b[-1]
    db = _xdeg(b)
    r = a
    while r and _xdeg(r) >= db:
        lr = r[-1]
        shift = _xdeg(r) - db
        left = _bmul_scalar_poly(r, lb)
        right = [[] for _ in range(shift)] + _bmul_scalar_poly(b, lr)
        r = _bsub(left, right)
    return r


def _bivariate_gcd(a: list[list], b: list[list]) -> list[list]:
    if not a:
        return _bprimitive(b) if b else b
    if not b:
        return _bprimitive(a)
    ca, cb = _bcontent(a), _bcontent(b)
    c = upoly_gcd(ca, cb) if ca and cb else [1]
    a, b = _bprimitive(a), _bprimitive(b)
    if _xdeg(a) < _xdeg(b):
        a, b = b, a
    while True:
        if _xdeg(b) == 0:
            return [c]
        r = _bprem(a, b)
        if not r:
            g = _bprimitive(b)
            return _bmul_scalar_poly(g, c)
        a, b = b, _bprimitive(r)


# ---------------------------------------------------------------------------
# Composition and iteration
# ---------------------------------------------------------------------------


def compose(f: HomogeneousMap, g: HomogeneousMap) -> HomogeneousMap:
    """The map f after g, with the common factor of the components removed."""
    if not (f.is_exact and g.is_exact):
        raise BallCoefficients("composition with content removal needs exact coefficients")
    subs = list(g.components)
    cache: dict[Exponent, MPoly] = {}
    powers: dict[tuple[int, int], MPoly] = {}

    def power(k: int, e: int) -> MPoly:
        if e == 0:
            return MPoly.constant(1)
        key = (k, e)
        if key not in powers:
            if e == 1:
                powers[key] = subs[k]
            else:
                lower = power(k, e - 1)
                powers[key] = lower * subs[k]
        return powers[key]

    def monomial(e: Exponent) -> MPoly:
        if e not in cache:
            out = MPoly.constant(1)
            for k in range(3):
                if e[k]:
                    out = out * power(k, e[k])
            cache[e] = out
        return cache[e]

    comps = []
    for comp in f.components:
        acc: dict = {}
        for e, c in comp.terms.items():
            for ex, v in monomial(e).terms.items():
                w = v * c
                acc[ex] = acc[ex] + w if ex in acc else w
        comps.append(MPoly(3, acc))
    if all(c.is_zero() for c in comps):
        raise NullComposition("the image of g lies in the indeterminacy locus of f")
    return HomogeneousMap(remove_content(comps))


def iterate(f: HomogeneousMap, n: int) -> HomogeneousMap:
    if n < 0:
        raise ValueError("negative iterate")
    if n == 0:
        return identity_map()
    out = f
    for _ in range(n - 1):
        out = compose(f, out)
    return out


@dataclass(frozen=True)
class DegreeSequence:
    degrees: tuple[int, ...]
    truncated: bool

    def __iter__(self):
        return iter(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def __getitem__(self, k):
        return self.degrees[k]


def degree_sequence(f: HomogeneousMap, n_max: int = 12, degree_budget: int = 200) -> DegreeSequence:
    """Degrees of f, f^2, ..., f^n_max.

    Iteration stops before any composition whose unreduced degree
    deg f * deg f^k would exceed the budget, so no iterate above the budget
    is ever built; the ``truncated`` flag reports that the list is shorter
    than n_max.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if not f.is_exact:
        raise BallCoefficients("degree sequences need exact coefficients")
    degrees = [f.degree]
    current = f
    while len(degrees) < n_max:
        if f.degree * degrees[-1] > degree_budget:
            return DegreeSequence(tuple(degrees), True)
        current = compose(f, current)
        degrees.append(current.degree)
    return DegreeSequence(tuple(degrees), False)


class GrowthTag(enum.Enum):
    BOUNDED = "Bounded"
    LINEAR = "Linear"
    QUADRATIC = "Quadratic"
    EXPONENTIAL = "Exponential"


@dataclass(frozen=True)
class GrowthClass:
    tag: GrowthTag
    rate: ComplexBall | None = None

    def __post_init__(self) -> None:
        if (self.rate is not None) != (self.tag is GrowthTag.EXPONENTIAL):
            raise ValueError("a rate is present exactly for exponential growth")


GROWTH_WINDOW = 5
GROWTH_DELTA = Fraction(1, 10)


def growth_class(degrees: Sequence[int], window: int = GROWTH_WINDOW,
                 delta: Fraction = GROWTH_DELTA) -> GrowthClass:
    """Classify a degree sequence from the last ``window`` entries.

    Bounded covers constant tails and tails of period two (such as the
    alternating degrees of an involution).  Linear likewise accepts first
    differences of period two, as in 2, 2, 3, 3, 4, 4.
    """
    degrees = list(degrees)
    if len(degrees) < 8:
        raise Inconclusive("at least 8 degrees are needed")
    tail = degrees[-window:]
    if len(set(tail)) == 1 or all(tail[k] == tail[k + 2] for k in range(len(tail) - 2)):
        return GrowthClass(GrowthTag.BOUNDED)
    d1 = [b - a for a, b in zip(tail, tail[1:])]
    if all(d1[k] == d1[k + 2] for k in range(len(d1) - 2)) and min(d1) >= 0 and d1[0] + d1[1] > 0:
        return GrowthClass(GrowthTag.LINEAR)
    d2 = [b - a for a, b in zip(d1, d1[1:])]
    if len(set(d2)) == 1 and d2[0] > 0:
        return GrowthClass(GrowthTag.QUADRATIC)
    ratios = [Fraction(b, a) for a, b in zip(tail, tail[1:]) if a > 0]
    if len(ratios) == len(tail) - 1 and all(r >= 1 + delta for r in ratios):
        prec = 128
        with mpmath.workprec(prec + 20):
            logs = [mpmath.log(mpmath.mpf(r.numerator)) - mpmath.log(mpmath.mpf(r.denominator)) for r in ratios]
            mean = mpmath.exp(mpmath.fsum(logs) / len(logs))
        spread = max(ratios) - min(ratios)
        if spread == 0 and ratios[0].denominator == 1:
            rate = ComplexBall.exact(ratios[0], prec)
        else:
            with mpmath.workprec(prec):
                rad = mpmath.mpf(spread.numerator) / spread.denominator + mpmath.ldexp(abs(mean), 8 - prec)
            rate = ComplexBall(+mean, mpmath.mpf(0), rad, prec)
        return GrowthClass(GrowthTag.EXPONENTIAL, rate)
    raise Inconclusive(f"no growth pattern in tail {tail}")


@dataclass(frozen=True)
class StabilityReport:
    stable_up_to: int
    violated_at: int | None
    truncated: bool = False


def stability_probe(f: HomogeneousMap, n_max: int = 12, degree_budget: int = 200) -> StabilityReport:
    """First n with deg f^n < (deg f)^n, within the iteration budget."""
    if f.degree == 1:
        return StabilityReport(n_max, None, False)
    seq = degree_sequence(f, n_max, degree_budget)
    d = f.degree
    for n, deg in enumerate(seq.degrees, start=1):
        if deg < d ** n:
            return StabilityReport(n - 1, n, seq.truncated)
    return StabilityReport(len(seq.degrees), None, seq.truncated)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def evaluate(f: HomogeneousMap, p: ProjectivePoint) -> "ProjectivePoint | Indeterminate":
    """Image of a point, or an Indeterminate marker at a common zero."""
    values = [comp.evaluate(p.coords) for comp in f.components]
    if all(is_exact(v) for v in values):
        if all(v == 0 for v in values):
            return Indeterminate(p, True)
        return ProjectivePoint(tuple(values))
    balls = [v if isinstance(v, ComplexBall) else ComplexBall.exact(v) for v in values]
    if all(b.contains_zero() for b in balls):
        return Indeterminate(p, False)
    return ProjectivePoint(tuple(values))


# ---------------------------------------------------------------------------
# Exceptional and indeterminacy loci
# ---------------------------------------------------------------------------


def jacobian_determinant(f: HomogeneousMap) -> MPoly:
    rows = [[c.derivative(k) for k in range(3)] for c in f.components]
    (a, b, c), (d, e, g), (h, i, j) = rows
    return a * (e * j - g * i) - b * (d * j - g * h) + c * (d * i - e * h)


@dataclass(frozen=True)
class FactoredDivisor:
    """Linear factors with multiplicities and any unfactored remainder."""

    factors: tuple[tuple[MPoly, int], ...]
    remainder: MPoly
    unfactored: bool

    def total_degree(self) -> int:
        return sum(m for _, m in self.factors) + max(self.remainder.total_degree(), 0)


_GENERIC_LINES = (
    ((1, 2, 3), (2, -1, 5)),
    ((2, -3, 1), (1, 4, -2)),
    ((3, 1, -4), (-2, 5, 1)),
)


def jacobian_divisor(f: HomogeneousMap) -> FactoredDivisor:
    """Split the Jacobian determinant into linear forms.

    The determinant is restricted to two generic lines; lines through pairs of
    Q(i)-rational intersection points are tried as factors and kept when they
    divide exactly.  Whatever does not split into linear forms is returned as
    a remainder and flagged.
    """
    if not f.is_exact:
        raise BallCoefficients("jacobian_divisor needs exact coefficients")
    jac = jacobian_determinant(f)
    if jac.is_zero():
        raise ZeroJacobian("the components are algebraically dependent")
    factors: list[tuple[MPoly, int]] = []
    rest = jac
    for (p1, q1), (p2, q2) in zip(_GENERIC_LINES, _GENERIC_LINES[1:]):
        if rest.total_degree() <= 0:
            break
        pts1 = _line_points(rest, p1, q1)
        pts2 = _line_points(rest, p2, q2)
        for a in pts1:
            for b in pts2:
                cand = _line_through(a, b)
                if cand is None:
                    continue
                mult = 0
                while rest.total_degree() > 0:
                    q, r = rest.divmod(cand)
                    if r:
                        break
                    rest = q
                    mult += 1
                if mult:
                    factors.append((cand, mult))
    remainder_deg = rest.total_degree()
    return FactoredDivisor(tuple(factors), rest, remainder_deg > 0)


def _line_points(poly: MPoly, p: Sequence[int], q: Sequence[int]) -> list[tuple]:
    """Q(i)-rational points where the restriction of poly to the line p + s*q vanishes."""
    d = poly.total_degree()
    s = MPoly.var(0, 1)
    param = [MPoly.constant(p[k], 1) + s.scale(q[k]) for k in range(3)]
    restricted = poly.substitute(param)
    coeffs = [restricted.coefficient((k,)) for k in range(restricted.total_degree() + 1)]
    pts = []
    if restricted.total_degree() < d:
        pts.append(tuple(q))
    if len(coeffs) > 1:
        roots, _ = gaussian_rational_roots(coeffs)
        for r in roots:
            pts.append(tuple(simplify_scalar(GaussianRational.coerce(p[k]) + r * q[k]) for k in range(3)))
    return pts


def _line_through(a: Sequence, b: Sequence) -> MPoly | None:
    """The linear form vanishing at two distinct points, normalized."""
    ga = [GaussianRational.coerce(v) for v in a]
    gb = [GaussianRational.coerce(v) for v in b]
    n = (ga[1] * gb[2] - ga[2] * gb[1], ga[2] * gb[0] - ga[0] * gb[2], ga[0] * gb[1] - ga[1] * gb[0])
    if all(v.is_zero() for v in n):
        return None
    pivot = next(v for v in n if not v.is_zero())
    n = [simplify_scalar(v / pivot) for v in n]
    return n[0] * X + n[1] * Y + n[2] * Z


@dataclass(frozen=True)
class IndeterminacyResult:
    points: tuple[ProjectivePoint, ...]
    complete: bool

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


def indeterminacy_points(f: HomogeneousMap, candidates: Iterable[ProjectivePoint] = ()) -> IndeterminacyResult:
    """Common zeros of the three components.

    For degree at most 3 the zeros are found by resultant elimination and the
    result is complete whenever every elimination root lies in Q(i).  For
    higher degrees only caller-supplied candidates are checked.
    """
    if not f.is_exact:
        raise BallCoefficients("indeterminacy_points needs exact coefficients")
    found: list[ProjectivePoint] = []

    def add(pt: ProjectivePoint) -> None:
        if pt not in found:
            found.append(pt)

    for pt in candidates:
        if isinstance(evaluate(f, pt), Indeterminate):
            add(pt)
    if f.degree > 3:
        return IndeterminacyResult(tuple(found), False)
    complete = True
    comps = f.components
    # Points on the line z = 0.
    if all(c.evaluate((1, 0, 0)) == 0 for c in comps):
        add(ProjectivePoint((1, 0, 0)))
    at_infinity = [_univariate_in_x(c, y=1, z=0) for c in comps]
    g: list = []
    for u in at_infinity:
        g = upoly_gcd(g, u) if g else upoly_monic(u)
    if len(g) > 1:
        roots, ok = gaussian_rational_roots(g)
        complete &= ok
        for r in roots:
            add(ProjectivePoint((r, 1, 0)))
    elif not g and any(at_infinity):
        pass
    # Affine part z = 1.
    biv = [_dehomogenize(c) for c in comps]
    res = _elimination_polynomial(biv)
    if res is None:
        return IndeterminacyResult(tuple(found), False)
    y_roots, ok = gaussian_rational_roots(res)
    if not ok:
        complete &= _irrational_roots_harmless(biv, res, y_roots)
    for y0 in y_roots:
        rows = [_specialize_y(b, y0) for b in biv]
        gx: list = []
        for row in rows:
            if row:
                gx = upoly_gcd(gx, row) if gx else upoly_monic(row)
        if len(gx) > 1:
            xs, okx = gaussian_rational_roots(gx)
            complete &= okx
            for x0 in xs:
                add(ProjectivePoint((x0, y0, 1)))
    found = [pt for pt in found if isinstance(evaluate(f, pt), Indeterminate)]
    return IndeterminacyResult(tuple(found), complete)


def _univariate_in_x(p: MPoly, y: int, z: int) -> list:
    deg = p.degree_in(0)
    out = [0] * (deg + 1) if deg >= 0 else []
    for (a, b, c), coef in p.terms.items():
        out[a] = out[a] + coef * (y ** b) * (z ** c)
    return upoly_trim([simplify_scalar(v) for v in out])


def _specialize_y(b: list[list], y0) -> list:
    return upoly_trim([simplify_scalar(upoly_eval(row, y0)) if row else 0 for row in b])


def _elimination_polynomial(biv: list[list[list]]) -> list | None:
    """A nonzero polynomial in y vanishing at every common affine zero.

    Uses Res_x of two generic combinations of the components, evaluated at
    enough sample values of y and interpolated.
    """
    combos = [((1, 0, 0), (0, 1, 2)), ((1, 3, 0), (0, 1, 5)), ((1, 2, 7), (3, 1, 4)), ((2, 5, 1), (1, 7, 3))]
    for ca, cb in combos:
        a = _bcombine(biv, ca)
        b = _bcombine(biv, cb)
        if not a or not b:
            continue
        da = _total_deg(a)
        db = _total_deg(b)
        bound = max(da, 0) * max(db, 0)
        samples = list(range(bound + 1))
        vals = []
        for y0 in samples:
            vals.append(_sylvester_resultant(_specialize_formal(a, y0), _specialize_formal(b, y0)))
        poly = _interpolate(samples, vals)
        if poly:
            return poly
    return None


def _bcombine(biv: list[list[list]], coeffs: Sequence[int]) -> list[list]:
    out: list[list] = []
    for p, c in zip(biv, coeffs):
        if c == 0 or not p:
            continue
        scaled = [[v * c for v in row] for row in p]
        out = _bsub(out, [[-v for v in row] for row in scaled]) if out else _btrim([upoly_trim(list(r)) for r in scaled])
    return out


def _total_deg(b: list[list]) -> int:
    return max((a + len(row) - 1 for a, row in enumerate(b) if row), default=0)


def _specialize_formal(b: list[list], y0) -> list:
    # Keep the formal x-degree so the Sylvester matrix is polynomial in y.
    return [simplify_scalar(upoly_eval(row, y0)) if row else 0 for row in b]


def _sylvester_resultant(a: list, b: list):
    m, n = len(a) - 1, len(b) - 1
    if m < 0 or n < 0:
        return 0
    size = m + n
    if size == 0:
        return 1
    mat = []
    for k in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(a)):
            row[k + j] = c
        mat.append(row)
    for k in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(b)):
            row[k + j] = c
        mat.append(row)
    return _det_field(mat)


def _det_field(mat: list[list]):
    n = len(mat)
    m = [[GaussianRational.coerce(v) for v in row] for row in mat]
    det = GaussianRational(Fraction(1))
    for k in range(n):
        piv = next((r for r in range(k, n) if not m[r][k].is_zero()), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det = det * m[k][k]
        inv = m[k][k].inverse()
        for r in range(k + 1, n):
            if m[r][k].is_zero():
                continue
            f = m[r][k] * inv
            for c in range(k, n):
                m[r][c] = m[r][c] - f * m[k][c]
    return simplify_scalar(det)


def _interpolate(xs: Sequence[int], ys: Sequence) -> list:
    """Newton interpolation over Q(i); ascending coefficients."""
    n = len(xs)
    coef = [GaussianRational.coerce(v) for v in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly: list = [coef[-1]]
    for i in range(n - 2, -1, -1):
        # poly <- poly * (y - xs[i]) + coef[i]
        new = [0] * (len(poly) + 1)
        for k, v in enumerate(poly):
            new[k + 1] = new[k + 1] + v
            new[k] = new[k] - v * xs[i]
        new[0] = new[0] + coef[i]
        poly = new
    return upoly_trim([simplify_scalar(v) for v in poly])


def _irrational_roots_harmless(biv, res, rational_roots) -> bool:
    """Numerically confirm that irrational elimination roots carry no common zero."""
    rest = list(res)
    for r in rational_roots:
        while True:
            q, rem = upoly_divmod(rest, [-r, 1])
            if rem:
                break
            rest = q
    coeffs = [GaussianRational.coerce(c).to_mpc() for c in reversed(rest)]
    if len(coeffs) <= 1:
        return True
    with mpmath.workdps(50):
        ys = mpmath.polyroots(coeffs, maxsteps=500, extraprec=300, error=False)
        for y0 in ys:
            rows = []
            for b in biv:
                rows.append([upoly_eval([GaussianRational.coerce(v).to_mpc() for v in row], y0) if row else 0
                             for row in b])
            lead = max(rows, key=len)
            lead = [c for c in lead]
            while lead and abs(lead[-1]) < mpmath.mpf(10) ** -40:
                lead.pop()
            if len(lead) <= 1:
                continue
            xs = mpmath.polyroots(list(reversed(lead)), maxsteps=500, extraprec=300, error=False)
            for x0 in xs:
                if all(abs(upoly_eval(row, x0)) < mpmath.mpf(10) ** -25 for row in rows):
                    return False
    return True


# ---------------------------------------------------------------------------
# Map literals
# ---------------------------------------------------------------------------


class _Parser:
    """Recursive-descent parser for polynomial expressions in x, y, z, i."""

    def __init__(self, text: str, variables: Sequence[str] = VARIABLES):
        self.text = text
        self.pos = 0
        self.variables = list(variables)

    def error(self, msg: str) -> MapParseError:
        return MapParseError(f"{msg} at position {self.pos} in {self.text!r}")

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def take(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def expr(self) -> MPoly:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        out = self.term()
        if sign < 0:
            out = -out
        while self.peek() in ("+", "-") and self.peek():
            op = self.text[self.pos]
            self.pos += 1
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> MPoly:
        out = self.power()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                out = out * self.power()
            elif ch == "/":
                self.pos += 1
                den = self.power()
                if den.total_degree() != 0 or not den.terms:
                    raise self.error("division only by nonzero constants")
                c = den.terms[(0,) * len(self.variables)]
                out = out.scale(GaussianRational.coerce(c).inverse())
            elif ch and (ch.isalpha() or ch == "(" or ch.isdigit()):
                out = out * self.power()
            else:
                return out

    def power(self) -> MPoly:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                raise self.error("expected an exponent")
            base = base ** int(self.text[start:self.pos])
        return base

    def atom(self) -> MPoly:
        ch = self.peek()
        nv = len(self.variables)
        if ch == "(":
            self.pos += 1
            out = self.expr()
            self.take(")")
            return out
        if ch == "-":
            self.pos += 1
            return -self.power()
        if ch.isdigit() or ch == ".":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "."):
                self.pos += 1
            try:
                value = Fraction(self.text[start:self.pos])
            except ValueError as exc:
                raise self.error("malformed number") from exc
            return MPoly.constant(value, nv)
        if ch.isalpha():
            name = ch
            self.pos += 1
            if name == "i":
                return MPoly.constant(GaussianRational(Fraction(0), Fraction(1)), nv)
            if name in self.variables:
                return MPoly.var(self.variables.index(name), nv)
            raise self.error(f"unknown symbol {name!r}")
        raise self.error("unexpected input")


def parse_polynomial(text: str, variables: Sequence[str] = VARIABLES) -> MPoly:
    parser = _Parser(text, variables)
    out = parser.expr()
    if parser.peek():
        raise parser.error("trailing input")
    return out


def parse_map(text: str) -> HomogeneousMap:
    """Parse ``(p:q:r)`` where p, q, r are polynomials in x, y, z over Q(i)."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise MapParseError("a map literal looks like (p:q:r)")
    parts = _split_top_level(s[1:-1], ":")
    if len(parts) != 3:
        raise MapParseError("a map literal has exactly three components")
    comps = [parse_polynomial(p) for p in parts]
    try:
        return HomogeneousMap.from_components(comps)
    except (ValueError, NullComposition) as exc:
        raise MapParseError(str(exc)) from exc


def _split_top_level(s: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_point(text: str) -> ProjectivePoint:
    """Parse ``(a:b:c)`` with entries in Q(i)."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise MapParseError("a point literal looks like (a:b:c)")
    parts = _split_top_level(s[1:-1], ":")
    if len(parts) != 3:
        raise MapParseError("a point has three coordinates")
    coords = []
    for p in parts:
        poly = parse_polynomial(p)
        if poly.total_degree() > 0:
            raise MapParseError("point coordinates must be constants")
        coords.append(poly.coefficient((0, 0, 0)))
    return ProjectivePoint(tuple(coords))
