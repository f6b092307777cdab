from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PROPERTY_EXAMPLES
from cremona_lab.arith import (
    ArithError,
    ComplexBall,
    DivisionByZero,
    GaussianRational,
    IntegerMatrix,
    IntPolynomial,
    char_poly,
    isolate_roots,
    spectral_radius,
)

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=100)
gaussian = st.builds(GaussianRational, fractions, fractions)
small_polys = st.lists(st.integers(-5, 5), min_size=2, max_size=7).filter(lambda c: c[-1] != 0 and c[0] != 0)
T = sympy.Symbol("t")


def test_parse_gaussian_rational():
    assert GaussianRational.parse("1/2 + 3/4*i") == GaussianRational(Fraction(1, 2), Fraction(3, 4))
    assert GaussianRational.parse("-i") == GaussianRational(0, -1)


def test_division_by_zero_raises():
    with pytest.raises(DivisionByZero):
        GaussianRational(0).inverse()


@settings(max_examples=PROPERTY_EXAMPLES)
@given(gaussian, gaussian)
def test_conjugate_is_multiplicative(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * a.conjugate()).im == 0 and (a * a.conjugate()).re == a.norm()


@settings(max_examples=PROPERTY_EXAMPLES)
@given(gaussian.filter(lambda a: a.im != 0 or a.re > 0))
def test_ball_square_root_encloses(a):
    ball = ComplexBall.exact(a)
    root = ball.sqrt()
    with mpmath.workprec(200):
        assert (root * root).contains(a)


@pytest.mark.parametrize("value", [0, -1, GaussianRational(-3, 0)])
def test_ball_square_root_refuses_branch_cut(value):
    with pytest.raises(ArithError):
        ComplexBall.exact(value).sqrt()


@settings(max_examples=200)
@given(small_polys)
def test_polynomial_evaluation_matches_sympy(coeffs):
    p = IntPolynomial.of(*coeffs)
    expr = sum(c * T ** k for k, c in enumerate(coeffs))
    for x in (-2, -1, 0, 1, 3):
        assert p(x) == expr.subs(T, x)


@settings(max_examples=200)
@given(small_polys, small_polys)
def test_polynomial_gcd_matches_sympy(a, b):
    g = IntPolynomial.of(*a).gcd(IntPolynomial.of(*b))
    expected = sympy.gcd(sympy.Poly(list(reversed(a)), T), sympy.Poly(list(reversed(b)), T)).primitive()[1]
    expected = [int(c) for c in reversed(expected.all_coeffs())]
    if expected[-1] < 0:
        expected = [-c for c in expected]
    assert list(g.coefficients) == expected


@settings(max_examples=100)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=4, max_size=4))
def test_char_poly_matches_sympy(rows):
    expected = sympy.Matrix(rows).charpoly(T).all_coeffs()
    assert list(char_poly(IntegerMatrix.from_rows(rows)).coefficients) == [int(c) for c in reversed(expected)]


@settings(max_examples=60)
@given(small_polys)
def test_isolated_roots_cover_every_root(coeffs):
    p = IntPolynomial.of(*coeffs)
    balls = isolate_roots(p)
    assert sum(rb.multiplicity for rb in balls) == p.degree
    assert all(a.ball.disjoint(b.ball) for i, a in enumerate(balls) for b in balls[i + 1:])
    mpmath.mp.dps = 30
    for root in mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=200):
        assert any(abs(rb.ball.mid - root) <= rb.ball.rad + mpmath.mpf(10) ** -15 for rb in balls)
    mpmath.mp.dps = 15


def test_rational_roots_are_exact():
    balls = isolate_roots(IntPolynomial.of(-2, 1) * IntPolynomial.of(1, 2) ** 2)
    exact = {(rb.ball.mid.real, rb.multiplicity) for rb in balls if rb.ball.rad == 0}
    assert exact == {(2, 1), (mpmath.mpf(-0.5), 2)}


def test_spectral_radius_of_fibonacci_matrix():
    ball = spectral_radius(IntegerMatrix.from_rows([[1, 1], [1, 0]]))
    with mpmath.workprec(200):
        golden = (1 + mpmath.sqrt(5)) / 2
        assert abs(ball.mid - golden) <= ball.rad
