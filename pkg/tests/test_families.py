import io
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona_lab import families, projmap
from cremona_lab.arith import ComplexBall, GaussianRational
from oracles import FROZEN

gi = GaussianRational.parse
x, y, z, t_ = sympy.symbols("x y z t")


def test_make_families():
    assert families.make("Sigma").degree == 2
    assert families.make("DG_Phi", {"n": 3}).degree == 3
    assert families.make("BK_k", {"c": 1, "k": 4, "a_j": {2: 3}}).degree == 5
    assert families.make("DG_conic").degree == 3


def test_parameter_validation():
    with pytest.raises(ValueError):
        families.make("BK_fab", {"a": 1})
    with pytest.raises(ValueError):
        families.make("BK_k", {"c": 1, "k": 4, "a_j": {1: 3}})
    with pytest.raises(ValueError):
        families.make("DG_Phi", {"n": 2})


def test_degenerate_parameters_report_factor(monkeypatch):
    # components with the common factor x, as a degenerate member would produce
    raw = [c * projmap.parse_polynomial("x") for c in projmap.parse_map("(y : z : x)").components]
    monkeypatch.setattr(families, "_raw_components", lambda fid: raw)
    with pytest.raises(families.DegenerateParameters) as info:
        families.make("Sigma")
    assert info.value.factor.total_degree() == 1
    assert info.value.reduced.degree == 1
    reduced = families.make("Sigma", allow_degenerate=True)
    assert projmap.same_map(reduced, info.value.reduced)


@pytest.mark.parametrize("a,b", [(3, 5), (gi("1 + i"), Fraction(2, 7)), (-1, 4)])
def test_affine_chart_form_homogenizes_to_fab(a, b):
    assert projmap.same_map(families.make("BK_FAB", {"a": a, "b": b}),
                            families.make("BK_fab", {"a": a, "b": b}))


@pytest.mark.parametrize("a,b,hit", [(0, 0, 0), (1, 0, 1), (gi("1/2 + 1/2*i"), gi("i"), 2)])
def test_vn_membership(a, b, hit):
    assert families.vn_membership(a, b, 6).hit_index == hit


def test_vn_budget():
    record = families.vn_membership(3, 5, 4)
    assert record.hit_index is None and record.terminated_by is families.Termination.BUDGET


@pytest.mark.parametrize("j", [1, 2, 3])
def test_invariant_cubic_against_sympy(j):
    t = Fraction(2)
    a, b = families.phi_curve(j, t)
    f = families.make("BK_fab", {"a": a, "b": b}, allow_degenerate=True)
    cubic = sympy.sympify(projmap.format_mpoly(families.invariant_cubic(t, a, b)).replace("^", "**"))
    comps = [sympy.sympify(projmap.format_mpoly(c).replace("^", "**")) for c in f.components]
    pulled = sympy.expand(cubic.subs({x: comps[0], y: comps[1], z: comps[2]}, simultaneous=True))
    assert sympy.rem(sympy.Poly(pulled, x, y, z), sympy.Poly(cubic, x, y, z)) == 0 or \
        sympy.simplify(pulled / cubic).is_polynomial(x, y, z)


@pytest.mark.parametrize("t", [0, 1, -1])
def test_excluded_parameters(t):
    with pytest.raises(families.ExcludedParameter):
        families.phi_curve(1, t)


def test_mcmullen_solution_matches_frozen():
    sol = families.mcmullen_scan(10)
    assert sol is not None
    a_ref, b_ref = (mpmath.mpf(v) for v in FROZEN["mcmullen10"])
    assert abs(sol.a.mid - a_ref) <= sol.a.rad + 1e-25
    assert abs(sol.b.mid - b_ref) <= sol.b.rad + 1e-25
    assert families.mcmullen_orbit_check(sol.a, sol.b, 10)


def test_mcmullen_wild_seed_gives_none():
    assert families.mcmullen_solve(10, (1e6, 1e6)) is None


def test_mcmullen_trivial_case():
    sol = families.mcmullen_solve(3, (0, 0))
    assert sol.a.contains(0) and sol.b.contains(0)


def test_return_germ_jet_matches_frozen():
    jet = families.germ_jet(families.return_germ(2), projmap.ProjectivePoint((1, 0, 0)))
    assert {k: str(v) for k, v in jet.m.items()} == FROZEN["return_jet"]["m"]
    assert {k: str(v) for k, v in jet.n.items()} == FROZEN["return_jet"]["n"]


def test_pole_at_base():
    with pytest.raises(families.PoleAtBase):
        families.germ_jet(families.make("Sigma"), projmap.ProjectivePoint((0, 1, 1)))


def test_compose_jets_matches_composed_map():
    base = projmap.ProjectivePoint((1, 0, 0))
    lin = projmap.linear_map([[1, 0, 0], [0, 2, 1], [0, 1, 1]])
    g = projmap.parse_map("(x^2 : x*y + z^2 : x*z + y^2)")
    direct = families.germ_jet(projmap.compose(lin, g), base)
    composed = families.compose_jets(families.germ_jet(lin, base), families.germ_jet(g, base))
    assert direct == composed


@settings(max_examples=200)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=5).filter(bool),
       st.fractions(min_value=-5, max_value=5, max_denominator=5))
def test_gluing_accepts_well_formed_jets(t, m01):
    n20 = -3 * m01 * t / (2 * GaussianRational(0, 1))
    jet = families.Jet2x4.from_coefficients({(1, 0): t * t, (0, 1): m01},
                                            {(0, 1): GaussianRational(0, 1) * t ** 3, (2, 0): n20})
    verdict = families.gluing_check(jet)
    assert verdict.passed and t in verdict.witnesses


def test_projection_table_csv():
    table = families.orbit_projection_samples(gi("i"), Fraction(1, 2), (Fraction(1, 10), 1), 5)
    out = io.StringIO()
    table.write_csv(out)
    lines = out.getvalue().splitlines()
    assert lines[0] == ",".join(families.ProjectionTable.HEADER)
    assert len(lines) == 6 and all(len(line.split(",")) == 7 for line in lines)
    assert table.terminated_by == "complete"


def test_projection_table_pole():
    table = families.orbit_projection_samples(1, 1, (-1, 0), 3)
    assert table.terminated_by == "pole" and len(table) == 0


def test_projection_needs_positive_length():
    with pytest.raises(ValueError):
        families.orbit_projection_samples(1, 1, (0, 0), 0)
