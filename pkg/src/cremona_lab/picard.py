"""The lattice Z^{1,n}, characteristic matrices, and the matrix catalog.

Matrices act on column vectors of coordinates in the basis e_0, ..., e_n:
column j holds the image of e_j under pullback.  The intersection form is
diag(1, -1, ..., -1) unless a matrix carries its own Gram matrix (used for
bases made of strict transforms of infinitely near exceptional curves).

The catalog stores printed matrices verbatim.  Where the chart data of a
blow-up tower is available, ``recompute_from_tower`` rebuilds the matrix
independently from valuations of the map along each exceptional divisor,
so any disagreement with the printed matrix shows up as data.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import ComplexBall, IntegerMatrix, char_poly, default_precision, spectral_radius
from .projmap import MPoly, X, Y, Z
from . import salem


class PicardError(Exception):
    pass


class DimensionMismatch(PicardError, ValueError):
    pass


class Verification(enum.Enum):
    VERIFIED = "Verified"
    FAILS_ISOMETRY = "FailsIsometry"
    UNCHECKED = "Unchecked"


# ---------------------------------------------------------------------------
# Lattice and vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PicardLattice:
    """Z^{1,n} with basis e_0 (line class) and e_1..e_n (exceptional classes)."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("lattice rank must be at least 1")

    @property
    def rank(self) -> int:
        return self.n + 1

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(f"e_{k}" for k in range(self.rank))

    def form(self) -> IntegerMatrix:
        return IntegerMatrix.diagonal([1] + [-1] * self.n)

    def basis(self, k: int) -> "LatticeVector":
        return LatticeVector(tuple(1 if j == k else 0 for j in range(self.rank)))

    def canonical(self) -> "LatticeVector":
        return LatticeVector((-3,) + (1,) * self.n)


@dataclass(frozen=True)
class LatticeVector:
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @staticmethod
    def of(*coords: int) -> "LatticeVector":
        return LatticeVector(tuple(coords))

    @property
    def lattice(self) -> PicardLattice:
        return PicardLattice(len(self.coords) - 1)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, k: int) -> int:
        return self.coords[k]

    def __iter__(self):
        return iter(self.coords)

    def _check(self, other: "LatticeVector") -> None:
        if len(self.coords) != len(other.coords):
            raise DimensionMismatch(f"vectors of rank {len(self.coords)} and {len(other.coords)}")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-a for a in self.coords))

    def __mul__(self, c: int) -> "LatticeVector":
        return LatticeVector(tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coords)

    def is_nonpositive(self) -> bool:
        return all(c <= 0 for c in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def inner_product(u: LatticeVector, v: LatticeVector) -> int:
    """u_0 v_0 - sum_{i>=1} u_i v_i."""
    u._check(v)
    if not u.coords:
        return 0
    return u.coords[0] * v.coords[0] - sum(a * b for a, b in zip(u.coords[1:], v.coords[1:]))


def canonical_class(n: int) -> LatticeVector:
    return PicardLattice(n).canonical()


# ---------------------------------------------------------------------------
# Isometries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeIsometry:
    """A characteristic matrix together with its verification flag.

    ``gram`` and ``canonical`` default to the diagonal form and
    (-3, 1, ..., 1); they are overridden for non-geometric bases.
    """

    matrix: IntegerMatrix
    verified: Verification = Verification.UNCHECKED
    gram: IntegerMatrix | None = None
    canonical: tuple[int, ...] | None = None

    @staticmethod
    def checked(matrix: IntegerMatrix, gram: IntegerMatrix | None = None,
                canonical: Sequence[int] | None = None) -> "LatticeIsometry":
        """Wrap ``matrix`` with the flag computed from exact checks."""
        iso = LatticeIsometry(matrix, Verification.UNCHECKED, gram,
                              tuple(canonical) if canonical is not None else None)
        ok = is_isometry(iso) and preserves_canonical(iso)
        flag = Verification.VERIFIED if ok else Verification.FAILS_ISOMETRY
        return LatticeIsometry(matrix, flag, gram, iso.canonical)

    @property
    def size(self) -> int:
        return self.matrix.nrows

    def form(self) -> IntegerMatrix:
        if self.gram is not None:
            return self.gram
        return PicardLattice(self.size - 1).form()

    def canonical_vector(self) -> tuple[int, ...]:
        if self.canonical is not None:
            return self.canonical
        return (-3,) + (1,) * (self.size - 1)

    def apply(self, v: LatticeVector) -> LatticeVector:
        if len(v) != self.matrix.ncols:
            raise DimensionMismatch("vector rank does not match the matrix")
        return LatticeVector(self.matrix.apply(v.coords))

    def __matmul__(self, other: "LatticeIsometry") -> "LatticeIsometry":
        if self.size != other.size:
            raise DimensionMismatch("isometries of different rank")
        both = (self.verified is Verification.VERIFIED and other.verified is Verification.VERIFIED
                and self.gram == other.gram)
        flag = Verification.VERIFIED if both else Verification.UNCHECKED
        return LatticeIsometry(self.matrix @ other.matrix, flag, self.gram, self.canonical)


def is_isometry(m: LatticeIsometry) -> bool:
    """True iff M^T G M = G exactly."""
    mat = m.matrix
    if not mat.is_square:
        return False
    g = m.form()
    if g.nrows != mat.nrows:
        raise DimensionMismatch("form and matrix sizes differ")
    return mat.transpose() @ g @ mat == g


def preserves_canonical(m: LatticeIsometry) -> bool:
    """True iff M K = K."""
    if not m.matrix.is_square:
        return False
    k = m.canonical_vector()
    return m.matrix.apply(k) == k


def entropy(m: "LatticeIsometry | IntegerMatrix", precision: int | None = None) -> ComplexBall:
    """Ball around log of the spectral radius; exactly 0 when every eigenvalue is a root of unity."""
    mat = m.matrix if isinstance(m, LatticeIsometry) else m
    prec = precision or default_precision()
    poly = char_poly(mat)
    _, rest = salem.cyclotomic_part(poly)
    if rest.degree == 0:
        return ComplexBall.exact(0, prec)
    return spectral_radius(rest, prec).log_real()


# ---------------------------------------------------------------------------
# Bedford-Kim block matrix
# ---------------------------------------------------------------------------


def bedford_kim_matrix(n: int) -> LatticeIsometry:
    """(n+4)x(n+4) action in the basis H, E_1, E_2, Q, f(Q), ..., f^n(Q).

    The first three columns are the images of H, E_1, E_2; the orbit of Q
    is shifted along, and the last column returns f^n(Q) to H - E_2 - Q.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    size = n + 4
    rows = [[0] * size for _ in range(size)]
    head = ([2, 1, 1], [-1, -1, -1], [-1, 0, -1], [-1, -1, 0])
    last = (1, 0, -1, -1)
    for i in range(4):
        rows[i][0:3] = head[i]
        rows[i][size - 1] = last[i]
    for k in range(n):
        rows[4 + k][3 + k] = 1
    return LatticeIsometry.checked(IntegerMatrix.from_rows(rows))


# ---------------------------------------------------------------------------
# Recomputation from blow-up chart data
# ---------------------------------------------------------------------------

R = MPoly.var(0, 2)
S = MPoly.var(1, 2)
ONE2 = MPoly.constant(1, 2)


@dataclass(frozen=True)
class ExceptionalChart:
    """An affine chart (x, y, z) = chart(u, v) of the tower in which one
    exceptional divisor is the zero locus of the variable ``divisor_var``."""

    label: str
    chart: tuple[MPoly, MPoly, MPoly]
    divisor_var: int

    def order_along(self, poly: MPoly) -> int:
        """Vanishing order of ``poly`` along the exceptional divisor."""
        pulled = poly.substitute(list(self.chart))
        if pulled.is_zero():
            raise PicardError(f"form vanishes identically on {self.label}")
        return min(e[self.divisor_var] for e in pulled.terms)


@dataclass(frozen=True)
class BlowupTower:
    """Chart data for a quadratic involution resolved by three blow-ups.

    ``images[k]`` is the image of the k-th exceptional divisor under the
    lifted map: either ("line", linear form) or ("exceptional", index).
    ``proximate[k]`` lists the divisors infinitely near to divisor k, which
    are subtracted when passing from total to strict transforms.
    """

    components: tuple[MPoly, MPoly, MPoly]
    charts: tuple[ExceptionalChart, ...]
    images: tuple[tuple[str, object], ...]
    proximate: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.charts) + 1

    def valuations(self) -> tuple[int, ...]:
        return tuple(min(ch.order_along(c) for c in self.components) for ch in self.charts)

    def strict_matrix(self) -> IntegerMatrix:
        """Pullback action in the basis H, strict transforms of E_1..E_k."""
        size = self.size
        cols = []
        degree = self.components[0].total_degree()
        cols.append([degree] + [-v for v in self.valuations()])
        for kind, data in self.images:
            if kind == "line":
                cols.append([1] + [-ch.order_along(data) for ch in self.charts])
            elif kind == "exceptional":
                col = [0] * size
                col[1 + data] = 1
                cols.append(col)
            else:
                raise PicardError(f"unknown image kind {kind!r}")
        return IntegerMatrix.from_rows([[cols[j][i] for j in range(size)] for i in range(size)])

    def change_of_basis(self) -> IntegerMatrix:
        """Columns: strict classes expressed in the total (geometric) basis."""
        size = self.size
        rows = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
        for k, near in self.proximate.items():
            for j in near:
                rows[1 + j][1 + k] -= 1
        return IntegerMatrix.from_rows(rows)


def integer_inverse(m: IntegerMatrix) -> IntegerMatrix:
    """Exact inverse of a unimodular matrix by Gauss-Jordan over Q."""
    n = m.nrows
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m.rows())]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise PicardError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise PicardError("matrix is not unimodular")
    return IntegerMatrix.from_rows([[int(x) for x in row] for row in inv])


@dataclass(frozen=True)
class Recomputation:
    strict: LatticeIsometry
    total: LatticeIsometry
    valuations: tuple[int, ...]


def recompute_from_tower(tower: BlowupTower) -> Recomputation:
    """Strict-basis and total-basis characteristic matrices of a tower.

    The strict basis carries the Gram matrix C^T J C and canonical class
    C^{-1} K, where C expresses strict classes in the geometric basis.
    """
    strict = tower.strict_matrix()
    c = tower.change_of_basis()
    c_inv = integer_inverse(c)
    j = PicardLattice(tower.size - 1).form()
    k = PicardLattice(tower.size - 1).canonical().coords
    gram = c.transpose() @ j @ c
    k_strict = c_inv.apply(k)
    total = c @ strict @ c_inv
    return Recomputation(
        LatticeIsometry.checked(strict, gram, k_strict),
        LatticeIsometry.checked(total),
        tower.valuations(),
    )


def _chart(x, y, z, label: str, var: int) -> ExceptionalChart:
    return ExceptionalChart(label, (x, y, z), var)


def sigma_tower() -> BlowupTower:
    """sigma = (yz : xz : xy) blown up at the three coordinate points."""
    return BlowupTower(
        (Y * Z, X * Z, X * Y),
        (
            _chart(ONE2, R * S, S, "E_1 over (1:0:0)", 1),
            _chart(R * S, ONE2, S, "E_2 over (0:1:0)", 1),
            _chart(R * S, S, ONE2, "E_3 over (0:0:1)", 1),
        ),
        (("line", X), ("line", Y), ("line", Z)),
    )


def rho_tower() -> BlowupTower:
    """rho = (xy : z^2 : yz); the third point is infinitely near the second."""
    return BlowupTower(
        (X * Y, Z * Z, Y * Z),
        (
            _chart(R * S, ONE2, S, "E over (0:1:0)", 1),
            _chart(ONE2, R * S, S, "F over (1:0:0)", 1),
            _chart(ONE2, R * S * S, S, "G infinitely near F", 1),
        ),
        (("line", Y), ("exceptional", 1), ("line", Z)),
        {1: (2,)},
    )


def tau_tower() -> BlowupTower:
    """tau = (x^2 : xy : y^2 - xz); three infinitely near points over (0:0:1)."""
    u, v = R, S
    return BlowupTower(
        (X * X, X * Y, Y * Y - X * Z),
        (
            _chart(R * S, S, ONE2, "E over (0:0:1)", 1),
            _chart(R * S * S, S, ONE2, "F infinitely near E", 1),
            _chart((u + 1) * (u * v) ** 2, u * v, ONE2, "G infinitely near F", 0),
        ),
        (("exceptional", 0), ("exceptional", 1), ("line", X)),
        {0: (1,), 1: (2,)},
    )


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    isometry: LatticeIsometry
    source_ref: str
    note: str = ""

    @property
    def matrix(self) -> IntegerMatrix:
        return self.isometry.matrix

    @property
    def verified(self) -> Verification:
        return self.isometry.verified

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "size": self.matrix.nrows,
            "entries": self.matrix.to_json(),
            "source_ref": self.source_ref,
            "verified": self.verified.value,
        }
        if self.isometry.gram is not None:
            out["gram"] = self.isometry.gram.to_json()
        if self.note:
            out["note"] = self.note
        return out


def _sparse(size: int, rows: Sequence[Sequence[tuple[int, int]]]) -> IntegerMatrix:
    out = [[0] * size for _ in range(size)]
    for i, row in enumerate(rows):
        for j, value in row:
            out[i][j] = value
    return IntegerMatrix.from_rows(out)


M_SIGMA = IntegerMatrix.from_rows([[2, 1, 1, 1], [-1, 0, -1, -1], [-1, -1, 0, -1], [-1, -1, -1, 0]])
M_RHO = IntegerMatrix.from_rows([[1, 1, 0, 1], [-1, 0, 0, -1], [-1, -1, 1, -1], [-2, -2, 0, -1]])
M_TAU = IntegerMatrix.from_rows([[1, 0, 0, 1], [-1, 1, 0, -1], [-2, 0, 1, -2], [-3, 0, 0, -2]])
M_FAB_Y = IntegerMatrix.from_rows([[2, 1, 1], [-1, -1, -1], [-1, 0, -1]])

PHI_PHI_16 = _sparse(16, [
    [(5, 1)], [(5, 1), (11, 1)], [(5, 2), (12, 1)], [(5, 3), (13, 1)],
    [(5, 3), (14, 1)], [(5, 3), (15, 1)], [(1, 1), (5, -1)], [(4, 1), (5, -2)],
    [(3, 1), (5, -3)], [(2, 1), (5, -3)], [(0, 1), (5, -3)],
] + [[(6 + k, 1)] for k in range(5)])

ROT_13 = _sparse(13, [
    [(3, 1)], [(3, 1), (10, 1)], [(3, 2), (11, 1)], [(3, 2), (12, 1)],
    [(1, 1), (3, -1)], [(2, 1), (3, -2)], [(0, 1), (3, -2)],
] + [[(4 + k, 1)] for k in range(6)])


def _unchecked(m: IntegerMatrix) -> LatticeIsometry:
    return LatticeIsometry(m, Verification.UNCHECKED)


_CATALOG: dict[str, CatalogEntry] | None = None


def _build_catalog() -> dict[str, CatalogEntry]:
    entries = [
        CatalogEntry("M_sigma", LatticeIsometry.checked(M_SIGMA), "printed:sigma",
                     "basis H, E_1, E_2, E_3"),
        CatalogEntry("M_rho", LatticeIsometry.checked(M_RHO), "printed:rho",
                     "verbatim; compare M_rho_strict_recomputed"),
        CatalogEntry("M_tau", LatticeIsometry.checked(M_TAU), "printed:tau",
                     "verbatim; compare M_tau_strict_recomputed"),
        CatalogEntry("M_fabY", LatticeIsometry.checked(M_FAB_Y), "printed:f_ab_on_Y",
                     "pushforward of a map that is not an automorphism of Y; not an isometry"),
        CatalogEntry("phi_Phi_16", _unchecked(PHI_PHI_16), "printed:phi_Phi_16x16",
                     "basis of curve components with an unstated form; isometry not checked"),
        CatalogEntry("rot_13", _unchecked(ROT_13), "printed:rotation_13x13",
                     "basis of curve components with an unstated form; isometry not checked"),
    ]
    for name, tower in (("sigma", sigma_tower()), ("rho", rho_tower()), ("tau", tau_tower())):
        rec = recompute_from_tower(tower)
        entries.append(CatalogEntry(f"M_{name}_strict_recomputed", rec.strict,
                                    f"recomputed:{name}",
                                    "basis H and strict transforms; Gram C^T J C"))
        entries.append(CatalogEntry(f"M_{name}_total_recomputed", rec.total,
                                    f"recomputed:{name}",
                                    "geometric basis H and total transforms"))
    return {e.name: e for e in entries}


def catalog() -> dict[str, CatalogEntry]:
    """All stored matrices by name; built once and shared."""
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build_catalog()
    return dict(_CATALOG)


def lookup(name: str) -> CatalogEntry:
    try:
        return catalog()[name]
    except KeyError:
        raise KeyError(f"no catalog entry named {name!r}") from None


def catalog_json() -> list[dict]:
    return [e.to_json() for e in catalog().values()]
