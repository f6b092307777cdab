import mpmath
import pytest

from cremona_lab import picard, salem
from cremona_lab.arith import IntegerMatrix, IntPolynomial, char_poly
from cremona_lab.picard import LatticeVector, Verification
from oracles import FROZEN

EXPECTED_FLAGS = {
    "M_sigma": Verification.VERIFIED,
    "M_rho": Verification.FAILS_ISOMETRY,
    "M_tau": Verification.FAILS_ISOMETRY,
    "M_fabY": Verification.FAILS_ISOMETRY,
    "phi_Phi_16": Verification.UNCHECKED,
    "rot_13": Verification.UNCHECKED,
}


@pytest.mark.parametrize("name", sorted(EXPECTED_FLAGS))
def test_printed_catalog_flags(name):
    assert picard.lookup(name).verified is EXPECTED_FLAGS[name]


@pytest.mark.parametrize("name", sorted(FROZEN["charpoly"]))
def test_catalog_char_polys_match_frozen(name):
    assert list(char_poly(picard.lookup(name).matrix).coefficients) == FROZEN["charpoly"][name]


def test_every_verified_entry_is_an_isometry():
    for entry in picard.catalog().values():
        if entry.verified is Verification.VERIFIED:
            assert picard.is_isometry(entry.isometry)
            assert picard.preserves_canonical(entry.isometry)


def test_unknown_name():
    with pytest.raises(KeyError):
        picard.lookup("no_such_matrix")


def test_lattice_form_and_canonical_class():
    k = picard.canonical_class(9)
    assert picard.inner_product(k, k) == 0
    assert picard.inner_product(picard.canonical_class(6), picard.canonical_class(6)) == 3


def test_dimension_mismatch():
    with pytest.raises(picard.DimensionMismatch):
        picard.inner_product(LatticeVector((1, 0)), LatticeVector((1, 0, 0)))


@pytest.mark.parametrize("tower", [picard.sigma_tower, picard.rho_tower, picard.tau_tower])
def test_recomputed_towers_are_verified_involutions(tower):
    rec = picard.recompute_from_tower(tower())
    for iso in (rec.strict, rec.total):
        assert iso.verified is Verification.VERIFIED
        assert (iso.matrix @ iso.matrix).is_identity()
    assert char_poly(rec.total.matrix) == IntPolynomial.of(-1, 1) ** 3 * IntPolynomial.of(1, 1)


def test_entropy_of_finite_order_is_zero():
    ball = picard.entropy(picard.lookup("M_sigma").matrix)
    assert ball.mid == 0 and ball.rad == 0


def test_entropy_of_golden_square():
    ball = picard.entropy(IntegerMatrix.from_rows([[2, 1], [1, 1]]))
    with mpmath.workprec(200):
        assert abs(ball.mid - mpmath.log((3 + mpmath.sqrt(5)) / 2)) <= ball.rad


@pytest.mark.parametrize("n", range(1, 12))
def test_bedford_kim_matrix_char_poly(n):
    m = picard.bedford_kim_matrix(n)
    assert picard.is_isometry(m) and picard.preserves_canonical(m)
    p = char_poly(m.matrix)
    t = IntPolynomial.t()
    assert p == t ** (n + 1) * salem.plastic() + IntPolynomial.of(-1, 0, 1, 1)
    assert salem.cyclotomic_part(p)[1] == salem.cyclotomic_part(salem.chi_bk(n))[1]


def test_catalog_json_is_complete():
    rows = picard.catalog_json()
    assert {r["name"] for r in rows} == set(picard.catalog())
    assert all(r["size"] * r["size"] == len(r["entries"]) or len(r["entries"]) == r["size"] for r in rows)
