import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona_lab import weyl
from cremona_lab.arith import IntPolynomial, char_poly
from cremona_lab.picard import LatticeVector, canonical_class, inner_product, is_isometry, preserves_canonical
from oracles import FROZEN


@pytest.mark.parametrize("n", range(3, 13))
def test_simple_roots_are_minus_two_and_orthogonal_to_canonical(n):
    for alpha in weyl.simple_roots(n):
        assert inner_product(alpha, alpha) == -2
        assert inner_product(alpha, canonical_class(n)) == 0


@pytest.mark.parametrize("n", range(3, 15))
def test_coxeter_element_full_char_poly_matches_frozen(n):
    w = weyl.coxeter_element(weyl.WeylContext(n))
    assert is_isometry(w) and preserves_canonical(w)
    assert list(char_poly(w.matrix).coefficients) == FROZEN["coxeter_full"][n]


@pytest.mark.parametrize("n", range(4, 15))
def test_standard_element_shares_char_poly(n):
    ctx = weyl.WeylContext(n)
    assert char_poly(weyl.standard_element(ctx).matrix) == char_poly(weyl.coxeter_element(ctx).matrix)


def test_infinite_order_from_nine_points():
    with pytest.raises(weyl.InfiniteOrder):
        weyl.coxeter_order(9)
    with pytest.raises(weyl.InfiniteOrder):
        weyl.coxeter_order(10)


def test_too_small_context():
    with pytest.raises(weyl.TooSmall):
        weyl.WeylContext(2)
    with pytest.raises(weyl.TooSmall):
        weyl.standard_element(weyl.WeylContext(3))


@pytest.mark.parametrize("n", range(3, 13))
def test_adjacency_graph_from_roots(n):
    assert sorted(weyl.coxeter_graph_edges(n)) == sorted(weyl.edges_from_roots(n))
    ball = weyl.adjacency_spectral_radius(n)
    with mpmath.workprec(200):
        assert abs(ball.mid - mpmath.mpf(FROZEN["adjacency"][n])) < mpmath.mpf(10) ** -20


@pytest.mark.parametrize("n", range(3, 13))
def test_coherent_signs_make_simple_roots_coherent(n):
    signs = weyl.coherent_signs(n)
    for s, alpha in zip(signs, weyl.simple_roots(n)):
        assert weyl.is_sign_coherent(LatticeVector(tuple(s * c for c in alpha.coords)), n)


@settings(max_examples=300)
@given(st.integers(3, 10), st.data())
def test_reflection_matrix_is_involutive_isometry(n, data):
    k = data.draw(st.integers(0, n - 1))
    r = weyl.simple_reflection(n, k)
    assert is_isometry(r) and preserves_canonical(r)
    assert (r.matrix @ r.matrix).is_identity()
    assert char_poly(r.matrix) == IntPolynomial.of(-1, 1) ** n * IntPolynomial.of(1, 1)


def test_formula_degree():
    for n in range(3, 15):
        assert weyl.coxeter_char_poly_formula(n).degree == n
