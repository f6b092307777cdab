"""Exact scalars, integer polynomials and matrices, and certified root enclosures.

Every other module builds on the types defined here:

* ``GaussianRational`` -- exact elements of Q(i) in canonical form.
* ``ComplexBall`` -- a disc (midpoint, radius) with outward-rounded arithmetic.
* ``IntPolynomial`` -- univariate integer polynomials, ascending coefficients.
* ``IntegerMatrix`` -- exact integer matrices.

Root isolation seeds from companion-matrix eigenvalues, polishes the seeds
with simultaneous Weierstrass corrections, and certifies them with the
Gerschgorin-type inclusion discs of B. T. Smith: when the discs are pairwise
disjoint each one holds exactly one root.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath
import numpy as np

BigRational = Fraction

DEFAULT_PRECISION = 128
MAX_PRECISION = 1024
PRECISION_ENV = "CREMONA_LAB_PRECISION"


class ArithError(Exception):
    """Base class for arithmetic failures."""


class DivisionByZero(ArithError, ZeroDivisionError):
    pass


class NonSquare(ArithError, ValueError):
    pass


class NonDivisible(ArithError, ArithmeticError):
    pass


class PrecisionExhausted(ArithError):
    pass


def default_precision() -> int:
    """Working precision in bits, overridable through the environment."""
    raw = os.environ.get(PRECISION_ENV)
    if raw:
        try:
            bits = int(raw)
        except ValueError:
            return DEFAULT_PRECISION
        if bits >= 53:
            return bits
    return DEFAULT_PRECISION


# ---------------------------------------------------------------------------
# Q(i)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """An element re + im*i of Q(i); both parts are reduced fractions."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def coerce(value: "Scalar") -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(Fraction(value))
        raise TypeError(f"cannot read {value!r} as an element of Q(i)")

    @staticmethod
    def i() -> "GaussianRational":
        return GaussianRational(Fraction(0), Fraction(1))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("inverse of zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero in Q(i)")
            return GaussianRational(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(Fraction(other)) * self.inverse()
        return NotImplemented

    def __pow__(self, exponent: int) -> "GaussianRational":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = GaussianRational(Fraction(1))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def to_mpc(self) -> mpmath.mpc:
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"GaussianRational({format_scalar(self)})"

    @staticmethod
    def parse(text: str) -> "GaussianRational":
        """Read forms such as ``3/4``, ``-i``, ``1/2+1/2*i`` or ``2-3*i``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty scalar")
        total = GaussianRational(Fraction(0))
        pos = 0
        while pos < len(s):
            sign = 1
            if s[pos] in "+-":
                sign = -1 if s[pos] == "-" else 1
                pos += 1
            end = pos
            while end < len(s) and s[end] not in "+-":
                end += 1
            chunk = s[pos:end]
            if not chunk:
                raise ValueError(f"malformed scalar {text!r}")
            if chunk == "i":
                term = GaussianRational(Fraction(0), Fraction(1))
            elif chunk.endswith("*i"):
                term = GaussianRational(Fraction(0), Fraction(chunk[:-2]))
            elif chunk.endswith("i"):
                term = GaussianRational(Fraction(0), Fraction(chunk[:-1]))
            else:
                term = GaussianRational(Fraction(chunk))
            total = total + (term if sign > 0 else -term)
            pos = end
        return total


Scalar = Union[int, Fraction, GaussianRational]
I = GaussianRational(Fraction(0), Fraction(1))


def simplify_scalar(value: Scalar) -> Scalar:
    """Smallest exact type holding ``value``: int, then Fraction, then Q(i)."""
    if isinstance(value, GaussianRational):
        if value.im != 0:
            return value
        value = value.re
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction, GaussianRational))


def format_scalar(value: Scalar) -> str:
    value = GaussianRational.coerce(value)
    re, im = value.re, value.im
    if im == 0:
        return str(re)
    if re == 0:
        return _imag_str(im, leading=True)
    return f"{re}{_imag_str(im, leading=False)}"


def _imag_str(im: Fraction, leading: bool) -> str:
    sign = "-" if im < 0 else ("" if leading else "+")
    mag = abs(im)
    if mag == 1:
        return f"{sign}i"
    return f"{sign}{mag}*i"


def gq_field_ops(a: GaussianRational, b: GaussianRational, op: str) -> GaussianRational:
    """Apply one of add/sub/mul/div to two elements of Q(i)."""
    a = GaussianRational.coerce(a)
    b = GaussianRational.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise DivisionByZero("division by zero in Q(i)")
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


# ---------------------------------------------------------------------------
# Complex balls
# ---------------------------------------------------------------------------


def _mpf_exact(value) -> mpmath.mpf:
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


@dataclass(frozen=True)
class ComplexBall:
    """Closed disc of radius ``rad`` around ``mid_re + i*mid_im``.

    Operations compute the midpoint at ``prec`` bits and inflate the radius
    by the propagated input radii plus a bound on the rounding error, so the
    result always contains every exact image of points in the inputs.
    """

    mid_re: mpmath.mpf
    mid_im: mpmath.mpf
    rad: mpmath.mpf
    prec: int = DEFAULT_PRECISION

    # -- construction -----------------------------------------------------

    @staticmethod
    def exact(value, prec: int | None = None) -> "ComplexBall":
        """Enclose an exact scalar (int, Fraction, Q(i)) or a float value."""
        prec = prec or default_precision()
        if isinstance(value, ComplexBall):
            return value
        with mpmath.workprec(prec):
            if isinstance(value, GaussianRational):
                re, im = _mpf_exact(value.re), _mpf_exact(value.im)
                exact_parts = (value.re, value.im)
            elif isinstance(value, (int, Fraction)):
                re, im = _mpf_exact(value), mpmath.mpf(0)
                exact_parts = (Fraction(value), Fraction(0))
            elif isinstance(value, complex) or isinstance(value, mpmath.mpc):
                re, im = mpmath.mpf(value.real), mpmath.mpf(value.imag)
                exact_parts = None
            else:
                re, im = mpmath.mpf(value), mpmath.mpf(0)
                exact_parts = None
            if exact_parts is not None and all(_is_dyadic_fit(p, prec) for p in exact_parts):
                rad = mpmath.mpf(0)
            else:
                rad = _round_err(re, im, prec)
        return ComplexBall(re, im, rad, prec)

    @staticmethod
    def from_mid_rad(mid, rad, prec: int | None = None) -> "ComplexBall":
        prec = prec or default_precision()
        with mpmath.workprec(prec):
            mid = mpmath.mpc(mid)
            return ComplexBall(mpmath.mpf(mid.real), mpmath.mpf(mid.imag),
                               abs(mpmath.mpf(rad)), prec)

    @staticmethod
    def real_interval(lo, hi, prec: int | None = None) -> "ComplexBall":
        """Smallest ball (up to rounding) holding the real segment [lo, hi]."""
        prec = prec or default_precision()
        pad = _conversion_pad(lo) + _conversion_pad(hi)
        lo, hi = _mpf_exact_wide(lo), _mpf_exact_wide(hi)
        if hi < lo:
            lo, hi = hi, lo
        with mpmath.workprec(prec):
            mid = (lo + hi) / 2
        with mpmath.workprec(4 * prec + 4096):
            rad = max(hi - mid, mid - lo) + pad
        with mpmath.workprec(prec):
            rad = _up(+rad, prec)
        return ComplexBall(mid, mpmath.mpf(0), rad, prec)

    # -- queries ------------------------------------------------------------

    @property
    def mid(self) -> mpmath.mpc:
        return mpmath.mpc(self.mid_re, self.mid_im)

    def is_real(self) -> bool:
        return self.mid_im == 0

    def is_exact_zero(self) -> bool:
        return self.mid_re == 0 and self.mid_im == 0 and self.rad == 0

    def contains(self, value) -> bool:
        """True when the exact (or float) value lies in the closed disc."""
        with mpmath.workprec(self.prec + 64):
            if isinstance(value, ComplexBall):
                d = abs(mpmath.mpc(value.mid_re - self.mid_re, value.mid_im - self.mid_im))
                return d + value.rad <= self.rad
            z = _to_mpc(value)
            return abs(z - self.mid) <= self.rad

    def contains_zero(self) -> bool:
        return self.contains(0)

    def overlaps(self, other: "ComplexBall") -> bool:
        with mpmath.workprec(max(self.prec, other.prec) + 64):
            d = abs(mpmath.mpc(self.mid_re - other.mid_re, self.mid_im - other.mid_im))
            return d <= self.rad + other.rad

    def disjoint(self, other: "ComplexBall") -> bool:
        return not self.overlaps(other)

    def abs_bounds(self) -> tuple[mpmath.mpf, mpmath.mpf]:
        """Lower and upper bounds of |z| over the disc."""
        with mpmath.workprec(self.prec + 10):
            m = abs(self.mid)
            lo = m - self.rad
            hi = m + self.rad
            pad = _round_err(m, mpmath.mpf(0), self.prec)
            return max(mpmath.mpf(0), lo - pad), hi + pad

    def real_bounds(self) -> tuple[mpmath.mpf, mpmath.mpf]:
        """Bounds of the real part over the disc (endpoints rounded outward)."""
        with mpmath.workprec(self.prec + 10):
            pad = _round_err(self.mid_re, mpmath.mpf(0), self.prec + 10)
            return self.mid_re - self.rad - pad, self.mid_re + self.rad + pad

    def lower(self) -> mpmath.mpf:
        return self.real_bounds()[0]

    def upper(self) -> mpmath.mpf:
        return self.real_bounds()[1]

    def __complex__(self) -> complex:
        return complex(float(self.mid_re), float(self.mid_im))

    def __float__(self) -> float:
        return float(self.mid_re)

    def __str__(self) -> str:
        """``mid +/- rad``, dropping the imaginary part of real balls."""
        mid = mpmath.nstr(self.mid_re, 20)
        if self.mid_im != 0:
            im = mpmath.nstr(abs(self.mid_im), 20)
            mid = f"{mid}{'+' if self.mid_im > 0 else '-'}{im}i"
        return mid if self.rad == 0 else f"{mid} +/- {mpmath.nstr(self.rad, 3)}"

    def __repr__(self) -> str:
        re = mpmath.nstr(self.mid_re, 20)
        im = mpmath.nstr(self.mid_im, 20)
        return f"ComplexBall({re}{'+' if self.mid_im >= 0 else '-'}{im.lstrip('-')}i +/- {mpmath.nstr(self.rad, 3)})"

    # -- arithmetic ---------------------------------------------------------

    def _lift(self, other) -> "ComplexBall | None":
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, (int, Fraction, GaussianRational, float, complex)):
            return ComplexBall.exact(other, self.prec)
        if isinstance(other, (mpmath.mpf, mpmath.mpc)):
            return ComplexBall.exact(other, self.prec)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        prec = max(self.prec, o.prec)
        with mpmath.workprec(prec):
            re = self.mid_re + o.mid_re
            im = self.mid_im + o.mid_im
            rad = _up(self.rad + o.rad, prec) + _round_err(re, im, prec)
        return ComplexBall(re, im, rad, prec)

    __radd__ = __add__

    def __neg__(self) -> "ComplexBall":
        with mpmath.workprec(self.prec):
            return ComplexBall(-self.mid_re, -self.mid_im, self.rad, self.prec)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        prec = max(self.prec, o.prec)
        with mpmath.workprec(prec):
            a = mpmath.mpc(self.mid_re, self.mid_im)
            b = mpmath.mpc(o.mid_re, o.mid_im)
            p = a * b
            prop = abs(a) * o.rad + abs(b) * self.rad + self.rad * o.rad
            rad = _up(prop, prec) + _round_err(p.real, p.imag, prec, ops=4)
        return ComplexBall(p.real, p.imag, rad, prec)

    __rmul__ = __mul__

    def inverse(self) -> "ComplexBall":
        prec = self.prec
        with mpmath.workprec(prec):
            m = abs(self.mid)
            if m <= self.rad:
                raise DivisionByZero("ball inverse: disc contains zero")
            q = 1 / self.mid
            prop = self.rad / (m * (m - self.rad))
            rad = _up(prop, prec) + _round_err(q.real, q.imag, prec, ops=6)
        return ComplexBall(q.real, q.imag, rad, prec)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> "ComplexBall":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ComplexBall.exact(1, self.prec)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> "ComplexBall":
        with mpmath.workprec(self.prec):
            return ComplexBall(self.mid_re, -self.mid_im, self.rad, self.prec)

    def abs(self) -> "ComplexBall":
        lo, hi = self.abs_bounds()
        return ComplexBall.real_interval(lo, hi, self.prec)

    def sqrt(self) -> "ComplexBall":
        """Principal square root; the disc must avoid the branch cut."""
        prec = self.prec
        with mpmath.workprec(prec):
            m = abs(self.mid)
            if m <= self.rad:
                raise ArithError("ball sqrt: disc contains zero")
            if self.mid_re - self.rad <= 0 and abs(self.mid_im) <= self.rad:
                raise ArithError("ball sqrt: disc meets the branch cut")
            s = mpmath.sqrt(self.mid)
            # |sqrt'(w)| = 1/(2|sqrt w|) <= 1/(2 sqrt(m - r)) on the disc.
            prop = self.rad / (2 * mpmath.sqrt(m - self.rad))
            rad = _up(prop, prec) + _round_err(s.real, s.imag, prec, ops=8)
        return ComplexBall(s.real, s.imag, rad, prec)

    def exp(self) -> "ComplexBall":
        prec = self.prec
        with mpmath.workprec(prec):
            e = mpmath.exp(self.mid)
            prop = abs(e) * (mpmath.exp(self.rad) - 1)
            rad = _up(prop, prec) + _round_err(e.real, e.imag, prec, ops=8)
        return ComplexBall(e.real, e.imag, rad, prec)

    def log_real(self) -> "ComplexBall":
        """Natural log of a positive real ball, as a real ball."""
        lo, hi = self.real_bounds()
        if lo <= 0:
            raise ArithError("log of a ball that is not strictly positive")
        with mpmath.workprec(self.prec + 10):
            a = mpmath.log(lo)
            b = mpmath.log(hi)
        return ComplexBall.real_interval(a, b, self.prec)


def _is_dyadic_fit(value: Fraction, prec: int) -> bool:
    den = value.denominator
    if den & (den - 1):
        return False
    return abs(value.numerator).bit_length() <= prec


def _mpf_exact_wide(value) -> mpmath.mpf:
    # Fractions are rounded at generous precision; mpf values pass through.
    if isinstance(value, Fraction):
        with mpmath.workprec(2048):
            return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, int):
        with mpmath.workprec(max(64, value.bit_length() + 8)):
            return mpmath.mpf(value)
    return mpmath.mpf(value) if not isinstance(value, mpmath.mpf) else value


def _conversion_pad(value) -> mpmath.mpf:
    if isinstance(value, Fraction) and value.denominator & (value.denominator - 1):
        return abs(_mpf_exact_wide(value)) * mpmath.ldexp(1, -2040)
    return mpmath.mpf(0)


def _up(value: mpmath.mpf, prec: int) -> mpmath.mpf:
    # Inflate by a few ulps so that the radius is never rounded down.
    if value == 0:
        return mpmath.mpf(0)
    return value * (1 + mpmath.ldexp(1, 4 - prec))


def _round_err(re, im, prec: int, ops: int = 1) -> mpmath.mpf:
    mag = abs(mpmath.mpf(re)) + abs(mpmath.mpf(im))
    if mag == 0:
        return mpmath.mpf(0)
    return mag * ops * mpmath.ldexp(1, 1 - prec)


def _to_mpc(value) -> mpmath.mpc:
    if isinstance(value, GaussianRational):
        return mpmath.mpc(_mpf_exact(value.re), _mpf_exact(value.im))
    if isinstance(value, Fraction):
        return mpmath.mpc(_mpf_exact(value))
    if isinstance(value, ComplexBall):
        return value.mid
    return mpmath.mpc(value)


# ---------------------------------------------------------------------------
# Univariate polynomials over Q(i), used for exact gcds and root recovery
# ---------------------------------------------------------------------------


def upoly_trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def upoly_divmod(a: Sequence[Scalar], b: Sequence[Scalar]) -> tuple[list, list]:
    """Division with remainder over the field Q(i); ascending coefficients."""
    b = upoly_trim(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    rem = upoly_trim([simplify_scalar(GaussianRational.coerce(c)) for c in a])
    lead = b[-1]
    db = len(b) - 1
    quot = [0] * max(len(rem) - db, 0)
    while len(rem) - 1 >= db and rem:
        shift = len(rem) - 1 - db
        c = simplify_scalar(_div(rem[-1], lead))
        quot[shift] = c
        for k, bc in enumerate(b):
            rem[shift + k] = simplify_scalar(rem[shift + k] - c * bc)
        upoly_trim(rem)
    return upoly_trim(quot), rem


def _div(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def upoly_monic(p: Sequence[Scalar]) -> list:
    p = upoly_trim(list(p))
    if not p:
        return p
    lead = p[-1]
    return [simplify_scalar(_div(c, lead)) for c in p]


def upoly_gcd(a: Sequence[Scalar], b: Sequence[Scalar]) -> list:
    """Monic gcd over Q(i); the gcd of two zero polynomials is zero."""
    a = upoly_trim(list(a))
    b = upoly_trim(list(b))
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    return upoly_monic(a)


def upoly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def upoly_derivative(p: Sequence[Scalar]) -> list:
    return upoly_trim([simplify_scalar(k * p[k]) for k in range(1, len(p))])


def upoly_mul(a: Sequence[Scalar], b: Sequence[Scalar]) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return upoly_trim([simplify_scalar(c) for c in out])


def upoly_squarefree(p: Sequence[Scalar]) -> list:
    """Squarefree part p / gcd(p, p'), monic."""
    p = upoly_trim(list(p))
    if len(p) <= 2:
        return upoly_monic(p)
    g = upoly_gcd(p, upoly_derivative(p))
    q, _ = upoly_divmod(p, g)
    return upoly_monic(q)


def gaussian_rational_roots(p: Sequence[Scalar], max_denominator: int = 10**9) -> tuple[list, bool]:
    """Exact roots of ``p`` that lie in Q(i).

    Approximate roots of the squarefree part are rounded to nearby elements of
    Q(i) and accepted only if they annihilate ``p`` exactly.  The flag reports
    whether every root of the squarefree part was recovered.
    """
    sq = upoly_squarefree(p)
    if len(sq) <= 1:
        return [], True
    found: list[GaussianRational] = []
    rest = sq
    for z in _numeric_roots(sq):
        cand = GaussianRational(
            Fraction(float(z.real)).limit_denominator(max_denominator),
            Fraction(float(z.imag)).limit_denominator(max_denominator),
        )
        refined = _refine_candidate(sq, cand, z)
        if refined is None:
            continue
        if any(refined == f for f in found):
            continue
        found.append(refined)
        rest, r = upoly_divmod(rest, [-refined, 1])
        if r:
            raise ArithError("deflation by a verified root left a remainder")
    return found, len(rest) <= 1


def _refine_candidate(p: Sequence[Scalar], cand: GaussianRational, approx) -> GaussianRational | None:
    if upoly_eval(p, cand) == 0:
        return cand
    # Snap tiny parts to zero or to nearby simple rationals.
    for den in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16):
        c2 = GaussianRational(Fraction(round(float(approx.real) * den), den),
                              Fraction(round(float(approx.imag) * den), den))
        if upoly_eval(p, c2) == 0:
            return c2
    return None


def _numeric_roots(p: Sequence[Scalar]) -> list:
    coeffs = [GaussianRational.coerce(c).to_mpc() for c in reversed(p)]
    if len(coeffs) == 2:
        return [-coeffs[1] / coeffs[0]]
    with mpmath.workdps(40):
        try:
            return list(mpmath.polyroots(coeffs, maxsteps=400, extraprec=200))
        except mpmath.libmp.NoConvergence:
            return list(mpmath.polyroots(coeffs, maxsteps=2000, extraprec=800, error=False))


# ---------------------------------------------------------------------------
# Integer polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Univariate polynomial with integer coefficients in ascending order."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = [int(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @staticmethod
    def of(*coefficients: int) -> "IntPolynomial":
        return IntPolynomial(tuple(coefficients))

    @staticmethod
    def t(power: int = 1) -> "IntPolynomial":
        return IntPolynomial((0,) * power + (1,))

    @staticmethod
    def constant(c: int) -> "IntPolynomial":
        return IntPolynomial((c,))

    @staticmethod
    def from_roots_product(factors: Iterable["IntPolynomial"]) -> "IntPolynomial":
        out = IntPolynomial.constant(1)
        for f in factors:
            out = out * f
        return out

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def __getitem__(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def __len__(self) -> int:
        return len(self.coefficients)

    def __add__(self, other):
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        n = max(len(self), len(other))
        return IntPolynomial(tuple(self[k] + other[k] for k in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "IntPolynomial":
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        out = IntPolynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                out = out * base
            base = base * base
            exponent >>= 1
        return out

    def __divmod__(self, other: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Division by a divisor with leading coefficient +1 or -1."""
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        lead = other.leading()
        if lead not in (1, -1):
            q, r = self.divmod_rational(other)
            if any(c.denominator != 1 for c in q + r):
                raise NonDivisible("quotient is not integral; use divmod_rational")
            return IntPolynomial(tuple(int(c) for c in q)), IntPolynomial(tuple(int(c) for c in r))
        rem = list(self.coefficients)
        d = other.degree
        quot = [0] * max(len(rem) - d, 0)
        for shift in range(len(rem) - 1 - d, -1, -1):
            c = rem[shift + d] * lead
            quot[shift] = c
            if c:
                for k, b in enumerate(other.coefficients):
                    rem[shift + k] -= c * b
        return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem[:d]))

    def __floordiv__(self, other: "IntPolynomial") -> "IntPolynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "IntPolynomial") -> "IntPolynomial":
        return divmod(self, other)[1]

    def divmod_rational(self, other: "IntPolynomial") -> tuple[list[Fraction], list[Fraction]]:
        q, r = upoly_divmod([Fraction(c) for c in self.coefficients], list(other.coefficients))
        return [Fraction(c) if not isinstance(c, GaussianRational) else c.re for c in q], \
               [Fraction(c) if not isinstance(c, GaussianRational) else c.re for c in r]

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        """Quotient when ``other`` divides ``self`` in Z[t]; NonDivisible otherwise."""
        q, r = self.divmod_rational(other)
        if any(c != 0 for c in r):
            raise NonDivisible(f"{other} does not divide {self}")
        if any(c.denominator != 1 for c in q):
            raise NonDivisible(f"quotient of {self} by {other} is not integral")
        return IntPolynomial(tuple(int(c) for c in q))

    def divides(self, other: "IntPolynomial") -> bool:
        """True when ``self`` divides ``other`` exactly in Q[t]."""
        _, r = other.divmod_rational(self)
        return all(c == 0 for c in r)

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """Horner evaluation in whatever ring ``x`` belongs to."""
        if isinstance(x, ComplexBall):
            acc = ComplexBall.exact(0, x.prec)
        else:
            acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(k * self.coefficients[k] for k in range(1, len(self))))

    def reverse(self) -> "IntPolynomial":
        return IntPolynomial(tuple(reversed(self.coefficients)))

    def content(self) -> int:
        g = 0
        for c in self.coefficients:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        """Primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        g = self.content()
        if self.leading() < 0:
            g = -g
        return IntPolynomial(tuple(c // g for c in self.coefficients))

    def gcd(self, other: "IntPolynomial") -> "IntPolynomial":
        """Primitive gcd over Q[t] with positive leading coefficient."""
        g = upoly_gcd([Fraction(c) for c in self.coefficients], [Fraction(c) for c in other.coefficients])
        if not g:
            return IntPolynomial(())
        den = 1
        for c in g:
            den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
        return IntPolynomial(tuple(int(Fraction(c) * den) for c in g)).primitive()

    def squarefree_decomposition(self) -> list[tuple["IntPolynomial", int]]:
        """Yun's algorithm: primitive squarefree factors with multiplicities."""
        if self.degree <= 0:
            return []
        f = upoly_monic([Fraction(c) for c in self.coefficients])
        df = upoly_derivative(f)
        a = upoly_gcd(f, df)
        b = upoly_divmod(f, a)[0]
        c = upoly_divmod(df, a)[0]
        d = _usub(c, upoly_derivative(b))
        out: list[tuple[IntPolynomial, int]] = []
        k = 1
        while len(b) > 1:
            g = upoly_gcd(b, d)
            if len(g) > 1:
                out.append((_to_primitive(g), k))
            b = upoly_divmod(b, g)[0]
            c = upoly_divmod(d, g)[0]
            d = _usub(c, upoly_derivative(b))
            k += 1
        return out

    def squarefree_part(self) -> "IntPolynomial":
        if self.degree <= 0:
            return self
        return _to_primitive(upoly_squarefree([Fraction(c) for c in self.coefficients]))

    def is_monic(self) -> bool:
        return self.leading() == 1

    def __str__(self) -> str:
        return self.format()

    def format(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if k == 0:
                mono = str(abs(c))
            else:
                power = var if k == 1 else f"{var}^{k}"
                mono = power if abs(c) == 1 else f"{abs(c)}*{power}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, mono))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, mono in parts[1:]:
            text += f" {sign} {mono}"
        return text

    def to_json(self) -> list[int]:
        return list(self.coefficients)

    @staticmethod
    def from_json(data: Sequence[int]) -> "IntPolynomial":
        return IntPolynomial(tuple(int(c) for c in data))

    @staticmethod
    def parse(text: str, var: str = "t") -> "IntPolynomial":
        """Parse sums of terms ``c``, ``c*t``, ``t^k``, ``-3*t^2`` (any order)."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        coeffs: dict[int, int] = {}
        pos = 0
        while pos < len(s):
            sign = 1
            if s[pos] in "+-":
                sign = -1 if s[pos] == "-" else 1
                pos += 1
            end = pos
            while end < len(s) and s[end] not in "+-":
                end += 1
            term = s[pos:end]
            if not term:
                raise ValueError(f"malformed polynomial {text!r}")
            if var in term:
                head, _, power = term.partition(var)
                head = head.rstrip("*")
                c = int(head) if head else 1
                if power:
                    if not power.startswith("^"):
                        raise ValueError(f"malformed power in {term!r}")
                    k = int(power[1:])
                else:
                    k = 1
            else:
                c, k = int(term), 0
            coeffs[k] = coeffs.get(k, 0) + sign * c
            pos = end
        top = max(coeffs) if coeffs else 0
        return IntPolynomial(tuple(coeffs.get(k, 0) for k in range(top + 1)))


def _as_intpoly(value) -> IntPolynomial | None:
    if isinstance(value, IntPolynomial):
        return value
    if isinstance(value, int):
        return IntPolynomial.constant(value)
    return None


def _to_primitive(coeffs: Sequence[Scalar]) -> IntPolynomial:
    fr = [Fraction(GaussianRational.coerce(c).re) for c in coeffs]
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return IntPolynomial(tuple(int(c * den) for c in fr)).primitive()


def _usub(a: Sequence[Scalar], b: Sequence[Scalar]) -> list:
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)]
    return upoly_trim([simplify_scalar(c) for c in out])


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense integer matrix stored row-major."""

    nrows: int
    ncols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(e) for e in self.entries)
        if len(entries) != self.nrows * self.ncols:
            raise ValueError("entry count does not match the shape")
        object.__setattr__(self, "entries", entries)

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return IntegerMatrix(len(rows), ncols, tuple(e for r in rows for e in r))

    @staticmethod
    def identity(n: int) -> "IntegerMatrix":
        return IntegerMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zero(nrows: int, ncols: int | None = None) -> "IntegerMatrix":
        ncols = nrows if ncols is None else ncols
        return IntegerMatrix(nrows, ncols, (0,) * (nrows * ncols))

    @staticmethod
    def diagonal(values: Sequence[int]) -> "IntegerMatrix":
        n = len(values)
        return IntegerMatrix(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.entries[i * self.ncols + j]

    def rows(self) -> list[list[int]]:
        n = self.ncols
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(self.nrows)]

    def column(self, j: int) -> list[int]:
        return [self.entries[i * self.ncols + j] for i in range(self.nrows)]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.ncols, self.nrows,
                             tuple(self[i, j] for j in range(self.ncols) for i in range(self.nrows)))

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        self._same_shape(other)
        return IntegerMatrix(self.nrows, self.ncols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        self._same_shape(other)
        return IntegerMatrix(self.nrows, self.ncols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntegerMatrix":
        return IntegerMatrix(self.nrows, self.ncols, tuple(-a for a in self.entries))

    def scale(self, c: int) -> "IntegerMatrix":
        return IntegerMatrix(self.nrows, self.ncols, tuple(c * a for a in self.entries))

    def _same_shape(self, other: "IntegerMatrix") -> None:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        a_rows = self.rows()
        b_cols = [other.column(j) for j in range(other.ncols)]
        out = []
        for r in a_rows:
            for c in b_cols:
                out.append(sum(x * y for x, y in zip(r, c) if x))
        return IntegerMatrix(self.nrows, other.ncols, tuple(out))

    __mul__ = __matmul__

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.ncols:
            raise ValueError("vector length does not match")
        return tuple(sum(self[i, j] * vector[j] for j in range(self.ncols)) for i in range(self.nrows))

    def __pow__(self, exponent: int) -> "IntegerMatrix":
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        if exponent < 0:
            raise ValueError("negative matrix power")
        out = IntegerMatrix.identity(self.nrows)
        base = self
        while exponent:
            if exponent & 1:
                out = out @ base
            base = base @ base
            exponent >>= 1
        return out

    def trace(self) -> int:
        return sum(self[i, i] for i in range(min(self.nrows, self.ncols)))

    def determinant(self) -> int:
        """Fraction-free Bareiss elimination."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        m = self.rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else 1

    def is_identity(self) -> bool:
        return self.is_square and self == IntegerMatrix.identity(self.nrows)

    def to_json(self) -> list[str]:
        return [str(e) for e in self.entries]

    def __str__(self) -> str:
        width = max((len(str(e)) for e in self.entries), default=1)
        return "\n".join(" ".join(str(e).rjust(width) for e in r) for r in self.rows())


def char_poly(matrix: IntegerMatrix) -> IntPolynomial:
    """det(t*I - A) by the Faddeev-LeVerrier recursion.

    With M_1 = I and M_{k+1} = A*M_k + c_{n-k}*I, each coefficient
    c_{n-k} = -tr(A*M_k)/k is an integer, so every division is exact.
    """
    if not matrix.is_square:
        raise NonSquare("characteristic polynomial of a non-square matrix")
    n = matrix.nrows
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    ident = IntegerMatrix.identity(n)
    m = ident
    for k in range(1, n + 1):
        am = matrix @ m
        tr = am.trace()
        if tr % k:
            raise ArithError("non-integral trace quotient in Faddeev-LeVerrier")
        coeffs[n - k] = -tr // k
        m = am + ident.scale(coeffs[n - k])
    return IntPolynomial(tuple(coeffs))


def evaluate_matrix_polynomial(poly: IntPolynomial, matrix: IntegerMatrix) -> IntegerMatrix:
    """p(A) by Horner's scheme; zero exactly when Cayley-Hamilton holds."""
    n = matrix.nrows
    acc = IntegerMatrix.zero(n)
    ident = IntegerMatrix.identity(n)
    for c in reversed(poly.coefficients):
        acc = acc @ matrix + ident.scale(c)
    return acc


# ---------------------------------------------------------------------------
# Certified root isolation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootBall:
    """An isolating ball around exactly one distinct root."""

    ball: ComplexBall
    multiplicity: int
    real: bool


def isolate_roots(poly: IntPolynomial, precision: int | None = None) -> list[RootBall]:
    """Disjoint balls, one per distinct complex root, with multiplicities.

    Rational roots are found exactly and returned with radius zero.  The
    remaining roots of each squarefree factor are certified by Smith's
    inclusion discs; the working precision doubles on failure up to
    ``MAX_PRECISION`` bits, after which ``PrecisionExhausted`` is raised.
    """
    if poly.degree < 1:
        return []
    prec = precision or default_precision()
    out: list[RootBall] = []
    for factor, mult in poly.squarefree_decomposition():
        rational, rest = _split_rational_roots(factor)
        for r in rational:
            out.append(RootBall(ComplexBall.exact(r, prec), mult, True))
        if rest.degree >= 1:
            for ball, real in _certify_factor(rest, prec):
                out.append(RootBall(ball, mult, real))
    out.sort(key=lambda rb: (-float(abs(rb.ball.mid)), float(rb.ball.mid_re), float(rb.ball.mid_im)))
    return out


def _split_rational_roots(factor: IntPolynomial) -> tuple[list[Fraction], IntPolynomial]:
    """Rational roots of a squarefree integer polynomial, and the cofactor."""
    lead = abs(factor.leading())
    roots: list[Fraction] = []
    rest = factor
    if factor.degree == 1:
        return [Fraction(-factor[0], factor[1])], IntPolynomial.constant(1)
    if factor[0] == 0:
        roots.append(Fraction(0))
        rest = rest.exact_div(IntPolynomial.of(0, 1))
    seeds = np.roots([float(c) for c in reversed(rest.coefficients)]) if rest.degree >= 1 else []
    for z in seeds:
        if abs(z.imag) > 1e-6 * max(1.0, abs(z)):
            continue
        if not math.isfinite(z.real):
            continue
        cand = Fraction(z.real).limit_denominator(max(lead, 1))
        for c in {cand, Fraction(round(z.real))}:
            if c in roots:
                continue
            if rest.degree >= 1 and rest.evaluate(c) == 0:
                roots.append(c)
                lin = IntPolynomial.of(-c.numerator, c.denominator)
                rest = rest.exact_div(lin)
    return roots, rest


def _certify_factor(factor: IntPolynomial, prec: int) -> list[tuple[ComplexBall, bool]]:
    """Certified balls for the roots of a squarefree polynomial without rational roots."""
    current = prec
    seeds = _seed_roots(factor)
    while True:
        approx = _weierstrass_polish(factor, seeds, current + 32)
        cert = _smith_certificate(factor, approx, current)
        if cert is not None:
            return cert
        if current >= MAX_PRECISION:
            raise PrecisionExhausted(f"could not isolate the roots of {factor} within {MAX_PRECISION} bits")
        current = min(2 * current, MAX_PRECISION)
        seeds = approx


def _seed_roots(factor: IntPolynomial) -> list:
    d = factor.degree
    coeffs = [float(c) for c in reversed(factor.coefficients)]
    if all(math.isfinite(c) for c in coeffs):
        with np.errstate(all="ignore"):
            seeds = [complex(z) for z in np.roots(coeffs)]
    else:
        seeds = []
    if len(seeds) != d or not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in seeds):
        # Fall back on the classical circle start.
        bound = 1 + max(abs(c) for c in factor.coefficients[:-1]) / abs(factor.leading())
        seeds = [bound * complex(math.cos(2 * math.pi * k / d + 0.4), math.sin(2 * math.pi * k / d + 0.4))
                 for k in range(d)]
    # Separate coincident seeds so that the Weierstrass correction is defined.
    out = []
    for k, z in enumerate(seeds):
        while any(abs(z - w) < 1e-12 for w in out):
            z += complex(1e-9 * (k + 1), 1e-9)
        out.append(z)
    return out


def _weierstrass_polish(factor: IntPolynomial, seeds: Sequence, prec: int) -> list:
    """Simultaneous Weierstrass (Durand-Kerner) iterations at ``prec`` bits."""
    coeffs = factor.coefficients
    lead = coeffs[-1]
    with mpmath.workprec(prec):
        zs = [mpmath.mpc(z) for z in seeds]
        tol = mpmath.ldexp(1, -prec + 8)
        for _ in range(500):
            biggest = mpmath.mpf(0)
            new = []
            for i, z in enumerate(zs):
                val = mpmath.mpc(0)
                for c in reversed(coeffs):
                    val = val * z + c
                den = mpmath.mpc(lead)
                for j, w in enumerate(zs):
                    if j != i:
                        den *= z - w
                if den == 0:
                    den = mpmath.mpc(tol)
                step = val / den
                biggest = max(biggest, abs(step) / max(1, abs(z)))
                new.append(z - step)
            zs = new
            if biggest < tol:
                break
        return zs


def _smith_certificate(factor: IntPolynomial, approx: Sequence, prec: int) -> list[tuple[ComplexBall, bool]] | None:
    """Smith inclusion discs D(z_i, d*|W_i|); ``None`` when they overlap."""
    d = factor.degree
    with mpmath.workprec(prec):
        centers = [ComplexBall(mpmath.mpf(z.real), mpmath.mpf(z.imag), mpmath.mpf(0), prec) for z in approx]
    discs = []
    for i, c in enumerate(centers):
        num = factor.evaluate(c)
        den = ComplexBall.exact(factor.leading(), prec)
        for j, w in enumerate(centers):
            if j != i:
                den = den * (c - w)
        try:
            w_i = num / den
        except DivisionByZero:
            return None
        _, hi = w_i.abs_bounds()
        with mpmath.workprec(prec):
            rad = _up(d * hi, prec)
        discs.append(ComplexBall(c.mid_re, c.mid_im, rad, prec))
    for i in range(d):
        for j in range(i + 1, d):
            if discs[i].overlaps(discs[j]):
                return None
    result = []
    for i, disc in enumerate(discs):
        conj = disc.conjugate()
        if all(conj.disjoint(discs[j]) for j in range(d) if j != i):
            # The conjugate of the root in this disc is a root lying in no
            # other disc, hence it is the same root.
            with mpmath.workprec(prec):
                rad = _up(disc.rad + abs(disc.mid_im), prec)
            result.append((ComplexBall(disc.mid_re, mpmath.mpf(0), rad, prec), True))
        elif abs(disc.mid_im) > disc.rad:
            result.append((disc, False))
        else:
            return None
    return result


def spectral_radius(source: "IntegerMatrix | IntPolynomial", precision: int | None = None) -> ComplexBall:
    """Real ball around the largest eigenvalue modulus of a matrix.

    A polynomial argument is treated as a characteristic polynomial.  The
    enclosure is tightened until its radius is at most
    ``2^(-precision/2) * max(1, |mid|)``.
    """
    poly = char_poly(source) if isinstance(source, IntegerMatrix) else source
    prec = precision or default_precision()
    current = prec
    while True:
        roots = isolate_roots(poly, current)
        if not roots:
            raise ValueError("spectral radius of a constant polynomial")
        bounds = [rb.ball.abs_bounds() if rb.ball.rad or rb.ball.mid_im else (abs(rb.ball.mid_re),) * 2
                  for rb in roots]
        lo = max(b[0] for b in bounds)
        hi = max(b[1] for b in bounds)
        ball = ComplexBall.real_interval(lo, hi, prec)
        with mpmath.workprec(prec):
            target = mpmath.ldexp(1, -(prec // 2)) * max(1, abs(ball.mid_re))
        if ball.rad <= target:
            return ball
        if current >= MAX_PRECISION:
            raise PrecisionExhausted("spectral radius enclosure too wide")
        current = min(2 * current, MAX_PRECISION)
