from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona_lab import families, projmap
from cremona_lab.arith import GaussianRational
from oracles import FROZEN

x, y, z = sympy.symbols("x y z")


def sympy_components(f):
    return [sympy.sympify(projmap.format_mpoly(c).replace("^", "**")) for c in f.components]


def test_parse_and_format_round_trip():
    f = projmap.parse_map("(y*z : x*z : x*y)")
    assert f.degree == 2
    assert projmap.same_map(f, projmap.parse_map("(" + " : ".join(projmap.format_mpoly(c) for c in f.components) + ")"))


@pytest.mark.parametrize("text", ["y*z : x*z", "(x : y)", "(x^2 : y : z)", "(x + : y : z)"])
def test_parse_errors(text):
    with pytest.raises((projmap.MapParseError, ValueError)):
        projmap.parse_map(text)


def test_all_zero_components_rejected():
    with pytest.raises(projmap.MapParseError, match="vanish"):
        projmap.parse_map("(0 : 0 : 0)")
    with pytest.raises(projmap.NullComposition):
        projmap.remove_content([projmap.MPoly.zero(3)] * 3)


@pytest.mark.parametrize("name,maker,count", [
    ("sigma", lambda: families.make("Sigma"), 4),
    ("henon", families.henon_map, 6),
    ("f_alpha_beta_2_3", lambda: families.f_alpha_beta(2, 3), 8),
    ("linear", families.linear_growth_map, 8),
    ("bk_fab_3_5", lambda: families.make("BK_fab", {"a": 3, "b": 5}), 7),
])
def test_degree_sequences_match_frozen(name, maker, count):
    assert list(projmap.degree_sequence(maker(), count, 10 ** 6).degrees) == FROZEN["degrees"][name]


def test_degree_budget_truncates():
    seq = projmap.degree_sequence(families.henon_map(), 12, 20)
    assert seq.truncated and list(seq.degrees) == [2, 4, 8, 16]


def test_degree_budget_is_checked_before_composing():
    # deg f^n = 5^n with no cancellation: the degree-625 iterate must not be built
    f = families.make("BK_k", {"c": 1, "k": 4, "a_j": {2: 1}})
    seq = projmap.degree_sequence(f, 8, 200)
    assert seq.truncated and list(seq.degrees) == [5, 25, 125]


def test_composition_matches_sympy_substitution():
    f = families.make("BK_fab", {"a": 3, "b": 5})
    g = families.henon_map()
    fg = projmap.compose(f, g)
    fs, gs = sympy_components(f), sympy_components(g)
    raw = [sympy.expand(c.subs({x: gs[0], y: gs[1], z: gs[2]}, simultaneous=True)) for c in fs]
    common = sympy.gcd(sympy.gcd(raw[0], raw[1]), raw[2])
    expected = [sympy.cancel(r / common) for r in raw]
    got = sympy_components(fg)
    ratios = {sympy.simplify(g_ / e) for g_, e in zip(got, expected) if e != 0}
    assert len(ratios) == 1 and next(iter(ratios)).is_number


def test_involution_squares_to_identity():
    sigma = families.make("Sigma")
    assert projmap.same_map(projmap.compose(sigma, sigma), projmap.identity_map())


def test_stability_of_henon():
    report = projmap.stability_probe(families.henon_map(), 5)
    assert report.violated_at is None and report.stable_up_to == 5


@pytest.mark.parametrize("degrees,tag", [
    ([3] * 10, projmap.GrowthTag.BOUNDED),
    (list(range(2, 12)), projmap.GrowthTag.LINEAR),
    ([k * k for k in range(1, 11)], projmap.GrowthTag.QUADRATIC),
    ([2 ** k for k in range(1, 11)], projmap.GrowthTag.EXPONENTIAL),
])
def test_growth_class_of_model_sequences(degrees, tag):
    assert projmap.growth_class(degrees).tag is tag


def test_remove_content_strips_common_factor():
    f = projmap.parse_map("(x*y*z : x*x*z : x*y*y)")
    assert f.degree == 2
    g = projmap.HomogeneousMap.from_components(f.components, reduce=False)
    assert g.degree == 2


def test_remove_content_with_monomial_component_is_fast():
    f_m = families.monomial_map([[2, 1], [1, 1]])
    assert list(projmap.degree_sequence(f_m, 12, 10 ** 12).degrees)[:6] == [3, 8, 21, 55, 144, 377]


def test_evaluate_at_indeterminacy_point():
    sigma = families.make("Sigma")
    assert isinstance(projmap.evaluate(sigma, projmap.ProjectivePoint((1, 0, 0))), projmap.Indeterminate)
    image = projmap.evaluate(sigma, projmap.ProjectivePoint((1, 2, 3)))
    assert image == projmap.ProjectivePoint((6, 3, 2))


def test_indeterminacy_points_of_involution():
    result = projmap.indeterminacy_points(families.make("Sigma"))
    assert result.complete
    assert set(result.points) == {projmap.ProjectivePoint(p) for p in ((1, 0, 0), (0, 1, 0), (0, 0, 1))}


def test_jacobian_divisor_of_involution():
    divisor = projmap.jacobian_divisor(families.make("Sigma"))
    assert not divisor.unfactored
    assert sorted(m for _, m in divisor.factors) == [1, 1, 1]
    assert divisor.total_degree() == 3


def test_zero_jacobian_detected():
    with pytest.raises(projmap.ZeroJacobian):
        projmap.jacobian_divisor(projmap.parse_map("(x^2 : x*y : y^2)"))


points = st.tuples(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9)).filter(any)


@settings(max_examples=300)
@given(points, st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(bool))
def test_projective_points_ignore_scaling(coords, scale):
    p = projmap.ProjectivePoint(coords)
    q = projmap.ProjectivePoint(tuple(Fraction(c) * scale for c in coords))
    assert p == q


@settings(max_examples=300)
@given(points)
def test_composition_agrees_with_pointwise_evaluation(coords):
    f = families.make("BK_fab", {"a": 3, "b": 5})
    g = families.henon_map()
    p = projmap.ProjectivePoint(coords)
    gp = projmap.evaluate(g, p)
    if isinstance(gp, projmap.Indeterminate):
        return
    fgp = projmap.evaluate(f, gp)
    direct = projmap.evaluate(projmap.compose(f, g), p)
    if isinstance(fgp, projmap.Indeterminate) or isinstance(direct, projmap.Indeterminate):
        return
    assert fgp == direct


def test_gaussian_coefficients_survive_parsing():
    f = projmap.parse_map("(x*z + i*y^2 : y*z : z^2)")
    image = projmap.evaluate(f, projmap.ProjectivePoint((0, 1, 1)))
    assert image == projmap.ProjectivePoint((GaussianRational(0, 1), 1, 1))
