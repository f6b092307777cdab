"""Reciprocal polynomials, cyclotomic factors, and Salem classification.

A reciprocal polynomial p of degree 2d with p(+-1) != 0 can be written as
p(t) = t^d q(t + 1/t).  Roots of p on the unit circle correspond to real
roots of q in (-2, 2), and a real root lambda > 1 of p to a root
lambda + 1/lambda > 2 of q.  Counting real roots of q with Sturm sequences
therefore decides unit-circle membership exactly.  Root balls give a
second, independent count of the roots outside the closed unit disc; the
two routes must agree.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .arith import (
    MAX_PRECISION,
    ComplexBall,
    IntPolynomial,
    NonDivisible,
    PrecisionExhausted,
    default_precision,
    isolate_roots,
    spectral_radius,
    upoly_derivative,
    upoly_divmod,
    upoly_trim,
)

T = IntPolynomial.t()
ONE = IntPolynomial.constant(1)


class Tag(enum.Enum):
    CYCLOTOMIC_PRODUCT = "CyclotomicProduct"
    SALEM = "Salem"
    QUADRATIC_RECIPROCAL = "QuadraticReciprocal"
    OTHER = "Other"


@dataclass(frozen=True)
class PolyClassification:
    tag: Tag
    leading_root: ComplexBall | None = None


# ---------------------------------------------------------------------------
# Cyclotomic polynomials
# ---------------------------------------------------------------------------


def euler_phi(k: int) -> int:
    result, m, p = k, k, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _mobius(k: int) -> int:
    result, m, p = 1, k, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> IntPolynomial:
    """Phi_k as the product of (t^d - 1)^mu(k/d) over divisors d of k."""
    if k < 1:
        raise ValueError("cyclotomic index must be positive")
    num, den = ONE, ONE
    for d in range(1, k + 1):
        if k % d:
            continue
        mu = _mobius(k // d)
        if mu == 1:
            num = num * (T ** d - ONE)
        elif mu == -1:
            den = den * (T ** d - ONE)
    return num.exact_div(den)


def cyclotomic_indices(max_degree: int) -> list[int]:
    """Every k with phi(k) <= max_degree; phi(k) >= sqrt(k/2) bounds the search."""
    bound = max(2, 2 * max_degree * max_degree)
    return [k for k in range(1, bound + 1) if euler_phi(k) <= max_degree]


def cyclotomic_part(p: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    """Split p = cyclo * rest with cyclo the largest product of cyclotomic factors."""
    if p.is_zero():
        raise ValueError("cyclotomic part of the zero polynomial")
    cyclo, rest = ONE, p
    for k in cyclotomic_indices(p.degree):
        phi = cyclotomic(k)
        if phi.degree > rest.degree:
            continue
        while rest.degree >= phi.degree:
            q, r = divmod(rest, phi)
            if not r.is_zero():
                break
            cyclo, rest = cyclo * phi, q
    return cyclo, rest


def cyclotomic_factors(p: IntPolynomial) -> dict[int, int]:
    """Multiplicity of each Phi_k dividing p."""
    out: dict[int, int] = {}
    rest = p
    for k in cyclotomic_indices(p.degree):
        phi = cyclotomic(k)
        while rest.degree >= phi.degree:
            q, r = divmod(rest, phi)
            if not r.is_zero():
                break
            out[k] = out.get(k, 0) + 1
            rest = q
    return out


# ---------------------------------------------------------------------------
# Reciprocity and the trace polynomial
# ---------------------------------------------------------------------------


def is_reciprocal(p: IntPolynomial) -> bool:
    """Coefficients equal their reverse up to a global sign."""
    if p.is_zero():
        raise ValueError("reciprocity of the zero polynomial")
    c = p.coefficients
    r = tuple(reversed(c))
    return c == r or c == tuple(-x for x in r)


def trace_polynomial(p: IntPolynomial) -> IntPolynomial:
    """q with p(t) = t^d q(t + 1/t) for palindromic p of even degree 2d."""
    c = p.coefficients
    if p.degree % 2 or c != tuple(reversed(c)):
        raise ValueError("trace polynomial needs a palindromic polynomial of even degree")
    d = p.degree // 2
    s = IntPolynomial.t()
    v_prev, v = IntPolynomial.constant(2), s
    q = IntPolynomial.constant(c[d])
    for k in range(1, d + 1):
        q = q + v * c[d + k]
        v_prev, v = v, s * v - v_prev
    return q


def _sturm_sequence(p: Sequence[Fraction]) -> list[list[Fraction]]:
    seq = [upoly_trim(list(p)), upoly_trim(upoly_derivative(list(p)))]
    while len(seq[-1]) > 1:
        _, r = upoly_divmod(seq[-2], seq[-1])
        r = upoly_trim([-x for x in r])
        if not r:
            break
        seq.append(r)
    return seq


def _sign_changes(seq: list[list[Fraction]], x: Fraction | None, at_infinity: int = 0) -> int:
    signs = []
    for poly in seq:
        if not poly:
            continue
        if x is None:
            lead = poly[-1]
            deg = len(poly) - 1
            v = lead if at_infinity > 0 or deg % 2 == 0 else -lead
        else:
            v = Fraction(0)
            for c in reversed(poly):
                v = v * x + c
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: IntPolynomial, lo: Fraction | None, hi: Fraction | None) -> int:
    """Distinct real roots in the open interval (lo, hi); None means infinite.

    Endpoints must not be roots.
    """
    coeffs = [Fraction(c) for c in p.squarefree_part().coefficients]
    if len(coeffs) <= 1:
        return 0
    for end in (lo, hi):
        if end is not None and p.evaluate(Fraction(end)) == 0:
            raise ValueError("interval endpoint is a root")
    seq = _sturm_sequence(coeffs)
    left = _sign_changes(seq, None, -1) if lo is None else _sign_changes(seq, Fraction(lo))
    right = _sign_changes(seq, None, 1) if hi is None else _sign_changes(seq, Fraction(hi))
    return left - right


def count_real_roots_with_multiplicity(p: IntPolynomial, lo, hi) -> int:
    return sum(m * count_real_roots(f, lo, hi) for f, m in p.squarefree_decomposition())


@dataclass(frozen=True)
class UnitCircleCount:
    """Root counts of a reciprocal polynomial, with multiplicity."""

    outside_real_positive: int
    outside_other: int
    on_circle: int


def unit_circle_count(p: IntPolynomial) -> UnitCircleCount:
    """Exact counts via the trace polynomial of the non-cyclotomic part."""
    cyclo, rest = cyclotomic_part(p)
    if rest.degree == 0:
        return UnitCircleCount(0, 0, cyclo.degree)
    if rest.leading() < 0:
        rest = -rest
    if not is_reciprocal(rest) or rest.coefficients != tuple(reversed(rest.coefficients)) or rest.degree % 2:
        raise ValueError("unit circle count needs a reciprocal polynomial")
    q = trace_polynomial(rest)
    inside = count_real_roots_with_multiplicity(q, Fraction(-2), Fraction(2))
    above = count_real_roots_with_multiplicity(q, Fraction(2), None)
    below = count_real_roots_with_multiplicity(q, None, Fraction(-2))
    # each non-real root of q gives a pair t, 1/t with exactly one outside the disc
    nonreal = q.degree - inside - above - below
    return UnitCircleCount(above, below + nonreal, cyclo.degree + 2 * inside)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def _ball_outside_count(p: IntPolynomial, prec: int) -> tuple[int, int]:
    """(roots certified outside the closed disc, roots undecided), with multiplicity."""
    outside = undecided = 0
    for rb in isolate_roots(p, prec):
        lo, hi = rb.ball.abs_bounds()
        if lo > 1:
            outside += rb.multiplicity
        elif hi >= 1 and not (rb.ball.rad == 0 and hi == 1):
            undecided += rb.multiplicity
    return outside, undecided


def classify(p: IntPolynomial, precision: int | None = None) -> PolyClassification:
    """Tag p as CyclotomicProduct, Salem, QuadraticReciprocal or Other."""
    if p.is_zero() or p.coefficients[0] == 0:
        raise ValueError("classify needs a nonzero constant term")
    if abs(p.leading()) != 1:
        raise ValueError("classify needs a monic polynomial")
    prec = precision or default_precision()
    _, rest = cyclotomic_part(p)
    if rest.degree == 0:
        return PolyClassification(Tag.CYCLOTOMIC_PRODUCT, None)
    lead = spectral_radius(p, prec)
    if not is_reciprocal(p):
        return PolyClassification(Tag.OTHER, lead)
    counts = unit_circle_count(p)
    if p.degree == 2:
        tag = Tag.QUADRATIC_RECIPROCAL if counts.outside_real_positive == 1 else Tag.OTHER
        return PolyClassification(tag, lead)
    salem_like = (counts.outside_real_positive == 1 and counts.outside_other == 0
                  and counts.on_circle >= 1)
    current = prec
    while True:
        outside, undecided = _ball_outside_count(p, current)
        expected = counts.outside_real_positive + counts.outside_other
        if outside == expected:
            break
        if outside > expected or current >= MAX_PRECISION:
            raise PrecisionExhausted("root balls disagree with the exact unit circle count")
        current = min(2 * current, MAX_PRECISION)
    return PolyClassification(Tag.SALEM if salem_like else Tag.OTHER, lead)


def salem_number(p: IntPolynomial, precision: int | None = None) -> ComplexBall | None:
    c = classify(p, precision)
    return c.leading_root if c.tag in (Tag.SALEM, Tag.QUADRATIC_RECIPROCAL) else None


# ---------------------------------------------------------------------------
# Named families
# ---------------------------------------------------------------------------


def lehmer() -> IntPolynomial:
    """t^10 + t^9 - t^7 - t^6 - t^5 - t^4 - t^3 + t + 1."""
    return IntPolynomial((1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1))


def plastic() -> IntPolynomial:
    """t^3 - t - 1, whose real root is the plastic number."""
    return IntPolynomial((-1, -1, 0, 1))


def chi_bk(n: int) -> IntPolynomial:
    """t^{n+1}(t^3 - t - 1) + t^3 + t^2 - 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return T ** (n + 1) * plastic() + IntPolynomial((-1, 0, 1, 1))


def chi_bk3(n: int, k: int) -> IntPolynomial:
    """1 - k(x + ... + x^{n-1}) + x^n."""
    if n < 2 or k < 2:
        raise ValueError("chi_bk3 needs n >= 2 and k >= 2")
    return IntPolynomial((1,) + (-k,) * (n - 1) + (1,))


def chi_rot(n: int, m: int) -> IntPolynomial:
    """t(t^{nm} - 1)(t^n - 2t^{n-1} + 1) / ((t^n - 1)(t - 1)) + 1, divided exactly."""
    if n < 3 or m < 1:
        raise ValueError("chi_rot needs n >= 3 and m >= 1")
    num = T * (T ** (n * m) - ONE) * (T ** n - T ** (n - 1) * 2 + ONE)
    den = (T ** n - ONE) * (T - ONE)
    q, r = divmod(num, den)
    if not r.is_zero():
        raise NonDivisible(f"chi_rot({n}, {m}) numerator is not divisible")
    return q + ONE


def largest_real_root(p: IntPolynomial, precision: int | None = None) -> ComplexBall:
    """Ball around the largest real root."""
    prec = precision or default_precision()
    real = [rb.ball for rb in isolate_roots(p, prec) if rb.real]
    if not real:
        raise ValueError("no real root")
    return max(real, key=lambda b: b.mid_re)


def parse(text: str) -> IntPolynomial:
    """Parse "c0 + c1*t + ... + cd*t^d" or a JSON coefficient list."""
    stripped = text.strip()
    if stripped.startswith("["):
        data = json.loads(stripped)
        if not all(isinstance(c, int) for c in data):
            raise ValueError("coefficient list must hold integers")
        return IntPolynomial.from_json(data)
    return IntPolynomial.parse(stripped)
