import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona_lab import salem
from cremona_lab.arith import IntPolynomial
from oracles import FROZEN

T = sympy.Symbol("t")


@pytest.mark.parametrize("k", range(1, 31))
def test_cyclotomic_matches_sympy(k):
    expected = [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(k, T), T).all_coeffs())]
    assert list(salem.cyclotomic(k).coefficients) == expected
    assert salem.cyclotomic(k).degree == salem.euler_phi(k) == sympy.totient(k)


def test_cyclotomic_part_splits_products():
    p = salem.lehmer() * salem.cyclotomic(1) ** 2 * salem.cyclotomic(12)
    cyclo, rest = salem.cyclotomic_part(p)
    assert rest == salem.lehmer()
    assert salem.cyclotomic_factors(p) == {1: 2, 12: 1}


def test_classification_tags():
    assert salem.classify(salem.lehmer()).tag is salem.Tag.SALEM
    assert salem.classify(salem.cyclotomic(5) * salem.cyclotomic(2)).tag is salem.Tag.CYCLOTOMIC_PRODUCT
    assert salem.classify(IntPolynomial.of(1, -3, 1)).tag is salem.Tag.QUADRATIC_RECIPROCAL
    assert salem.classify(salem.plastic()).tag is salem.Tag.OTHER
    # reciprocal with two real roots outside the disc
    assert salem.classify(IntPolynomial.of(1, -3, 1) ** 2).tag is salem.Tag.OTHER


def test_classify_rejects_non_monic():
    with pytest.raises(ValueError):
        salem.classify(IntPolynomial.of(1, 0, 2))


@pytest.mark.parametrize("n", range(7, 21))
def test_chi_roots_match_frozen(n):
    ball = salem.largest_real_root(salem.chi_bk(n))
    with mpmath.workprec(256):
        assert abs(ball.mid - mpmath.mpf(FROZEN["chi_roots"][n])) <= ball.rad + mpmath.mpf(10) ** -25


def test_chi_7_is_lehmer_rest():
    assert FROZEN["chi_roots"][7] == FROZEN["lehmer_root"]


@settings(max_examples=300)
@given(st.lists(st.integers(1, 30), min_size=1, max_size=4))
def test_unit_circle_count_of_cyclotomic_products(indices):
    p = IntPolynomial.constant(1)
    for k in indices:
        p = p * salem.cyclotomic(k)
    if not salem.is_reciprocal(p) or p.coefficients != tuple(reversed(p.coefficients)):
        p = p * p.reverse()
    count = salem.unit_circle_count(p)
    assert (count.outside_real_positive, count.outside_other, count.on_circle) == (0, 0, p.degree)


def test_trace_polynomial_of_lehmer_counts():
    count = salem.unit_circle_count(salem.lehmer())
    assert (count.outside_real_positive, count.outside_other, count.on_circle) == (1, 0, 8)


def test_parse_polynomial_text():
    assert salem.parse("t^3 - t - 1") == salem.plastic()
