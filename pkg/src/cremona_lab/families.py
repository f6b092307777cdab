"""Concrete map families and the checks that realize them as automorphisms.

* ``make`` builds a content-free homogeneous representative of each family.
* ``vn_membership`` follows the orbit of q = (1:-a:0) under f_{a,b} until
  it reaches the indeterminacy point p_* = (1:-b:-a).
* ``cubic_invariance_check`` tests invariance of the cubic P_{t,a,b}.
* ``mcmullen_orbit_check`` and ``mcmullen_solve`` handle the orbit closing
  condition f^{n-3}(p_4) = p_1 for f(x, y) = (a + y, b + y/x).
* ``germ_jet`` and ``gluing_check`` extract order-4 jets and test the
  gluing conditions at a point.
* ``orbit_projection_samples`` samples orbits of f(x, y) = ((ax + y)/(x + 1), by).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath

from .arith import (
    I,
    ComplexBall,
    GaussianRational,
    default_precision,
    is_exact,
    simplify_scalar,
)
from .projmap import (
    HomogeneousMap,
    Indeterminate,
    MPoly,
    ProjectivePoint,
    X,
    Y,
    Z,
    compose,
    evaluate,
    form_gcd_with_cofactors,
    linear_map,
    remove_content,
)

JET_ORDER = 4
ORBIT_CAP = 1e12
BALL_TOLERANCE = 1e-10
MCMULLEN_DRIFT = 2.0


class FamilyError(Exception):
    pass


class DegenerateParameters(FamilyError):
    """The homogenized components share a factor; ``reduced`` has it removed."""

    def __init__(self, message: str, reduced: HomogeneousMap, factor: MPoly):
        super().__init__(message)
        self.reduced = reduced
        self.factor = factor


class ExcludedParameter(FamilyError, ValueError):
    pass


class IndeterminateOrbit(FamilyError):
    pass


class PoleAtBase(FamilyError):
    pass


# ---------------------------------------------------------------------------
# Family constructors
# ---------------------------------------------------------------------------


class Family(enum.Enum):
    SIGMA = "Sigma"
    RHO = "Rho"
    TAU = "Tau"
    BK_FAB = "BK_fab"
    BK_FAB_AFFINE = "BK_FAB"
    BK_K = "BK_k"
    BK_ROT = "BK_rot"
    MCMULLEN = "McMullen"
    DG_PHI = "DG_Phi"
    DG_PHI_ALPHA_PHI = "DG_phiAlphaPhi"
    DG_CONIC = "DG_conic"


REQUIRED_PARAMS: dict[Family, tuple[str, ...]] = {
    Family.SIGMA: (),
    Family.RHO: (),
    Family.TAU: (),
    Family.BK_FAB: ("a", "b"),
    Family.BK_FAB_AFFINE: ("a", "b"),
    Family.BK_K: ("c", "k"),
    Family.BK_ROT: ("delta", "c"),
    Family.MCMULLEN: ("a", "b"),
    Family.DG_PHI: ("n",),
    Family.DG_PHI_ALPHA_PHI: ("alpha",),
    Family.DG_CONIC: (),
}

OPTIONAL_PARAMS: dict[Family, tuple[str, ...]] = {Family.BK_K: ("a_j",)}


@dataclass(frozen=True)
class FamilyId:
    tag: Family
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        tag = self.tag if isinstance(self.tag, Family) else Family(self.tag)
        object.__setattr__(self, "tag", tag)
        required = set(REQUIRED_PARAMS[tag])
        allowed = required | set(OPTIONAL_PARAMS.get(tag, ()))
        given = set(self.params)
        if not required <= given or not given <= allowed:
            raise ValueError(f"{tag.value} takes parameters {sorted(required)}, got {sorted(given)}")


def _c(value):
    """Coerce a parameter to an exact scalar when possible."""
    if isinstance(value, ComplexBall):
        return value
    if isinstance(value, GaussianRational):
        return simplify_scalar(value)
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, str):
        return simplify_scalar(GaussianRational.parse(value))
    if isinstance(value, complex):
        return ComplexBall.exact(value)
    if isinstance(value, float):
        return ComplexBall.exact(value)
    raise TypeError(f"unsupported parameter {value!r}")


def phi_alpha_matrix(alpha) -> list[list]:
    a = _c(alpha)
    return [[a, 2 * (1 - a), 2 + a - a * a], [-1, 0, a + 1], [1, -2, 1 - a]]


def _raw_components(fid: FamilyId) -> list[MPoly]:
    p = {k: v for k, v in fid.params.items()}
    tag = fid.tag
    if tag is Family.SIGMA:
        return [Y * Z, X * Z, X * Y]
    if tag is Family.RHO:
        return [X * Y, Z * Z, Y * Z]
    if tag is Family.TAU:
        return [X * X, X * Y, Y * Y - X * Z]
    if tag is Family.BK_FAB:
        a, b = _c(p["a"]), _c(p["b"])
        return [X * (X.scale(b) + Y), Z * (X.scale(b) + Y), X * (X.scale(a) + Z)]
    if tag is Family.BK_FAB_AFFINE:
        # chart x = 1: (y, z) -> (z, (a + z)/(b + y)); multiply through by x(bx + y)
        a, b = _c(p["a"]), _c(p["b"])
        den = X.scale(b) + Y
        return [X * den, Z * den, X * (X.scale(a) + Z)]
    if tag is Family.BK_K:
        # chart x = 1: (y, z) -> (z, -y + cz + sum a_j / z^j + 1 / z^k)
        c, k = _c(p["c"]), int(p["k"])
        if k < 2:
            raise ValueError("BK_k needs k >= 2")
        coeffs = {int(j): _c(v) for j, v in dict(p.get("a_j") or {}).items()}
        if any(j % 2 or j < 1 or j > k - 2 for j in coeffs):
            raise ValueError("a_j is defined for even 1 <= j <= k - 2")
        zk = Z ** k
        third = -(Y * zk) + (Z * zk).scale(c) + X ** (k + 1)
        for j, aj in coeffs.items():
            third = third + (X ** (j + 1) * Z ** (k - j)).scale(aj)
        return [X * zk, Z * zk, third]
    if tag is Family.BK_ROT:
        # chart z = 1: (x, y) -> (y, -delta x + c y + 1/y); multiply by yz
        d, c = _c(p["delta"]), _c(p["c"])
        return [Y * Y, -(X * Y).scale(d) + (Y * Y).scale(c) + Z * Z, Y * Z]
    if tag is Family.MCMULLEN:
        # chart z = 1: (x, y) -> (a + y, b + y/x); multiply by xz
        a, b = _c(p["a"]), _c(p["b"])
        return [X * (Z.scale(a) + Y), (X * Z).scale(b) + Y * Z, X * Z]
    if tag is Family.DG_PHI:
        n = int(p["n"])
        if n < 3:
            raise ValueError("DG_Phi needs n >= 3")
        return [X * Z ** (n - 1) + Y ** n, Y * Z ** (n - 1), Z ** n]
    if tag is Family.DG_PHI_ALPHA_PHI:
        phi = _raw_components(FamilyId(Family.DG_PHI, {"n": 3}))
        m = phi_alpha_matrix(p["alpha"])
        return [sum((phi[j].scale(m[i][j]) for j in range(3)), MPoly.zero(3)) for i in range(3)]
    if tag is Family.DG_CONIC:
        q = X * Z + Y * Y
        return [Y * Y * Z, X * q, Y * q]
    raise FamilyError(f"unknown family {tag}")


def make(family: FamilyId | Family | str, params: Mapping[str, object] | None = None,
         allow_degenerate: bool = False) -> HomogeneousMap:
    """Content-free homogeneous representative of a family member.

    Raises DegenerateParameters when the components share a factor, unless
    ``allow_degenerate`` is set, in which case the reduced map is returned.
    """
    fid = family if isinstance(family, FamilyId) else FamilyId(Family(family) if isinstance(family, str) else family, dict(params or {}))
    comps = _raw_components(fid)
    if any(c.is_zero() for c in comps) and all(c.is_zero() for c in comps):
        raise FamilyError("all components vanish")
    if not all(c.is_exact() for c in comps):
        return HomogeneousMap(tuple(comps), comps[0].total_degree())
    g, quotients = form_gcd_with_cofactors(comps)
    if g.total_degree() > 0:
        reduced = HomogeneousMap.from_components(quotients)
        if allow_degenerate:
            return reduced
        raise DegenerateParameters(
            f"{fid.tag.value} with {dict(fid.params)} has common factor {g}", reduced, g)
    return HomogeneousMap.from_components(comps)


def f_alpha_beta(alpha, beta) -> HomogeneousMap:
    """(x, y) -> ((alpha x + y)/(x + 1), beta y) in the chart z = 1."""
    a, b = _c(alpha), _c(beta)
    return HomogeneousMap.from_components([(X.scale(a) + Y) * Z, Y.scale(b) * (X + Z), Z * (X + Z)])


def monomial_map(m: Sequence[Sequence[int]]) -> HomogeneousMap:
    """(x, y) -> (x^a y^b, x^c y^d) for a nonnegative 2x2 matrix [[a, b], [c, d]]."""
    (a, b), (c, d) = m
    if min(a, b, c, d) < 0:
        raise ValueError("monomial_map expects nonnegative exponents")
    deg = max(a + b, c + d)
    return HomogeneousMap.from_components([
        MPoly.monomial((a, b, deg - a - b)),
        MPoly.monomial((c, d, deg - c - d)),
        MPoly.monomial((0, 0, deg)),
    ])


def henon_map() -> HomogeneousMap:
    """(x, y) -> (y, y^2 - x) homogenized: (yz : y^2 - xz : z^2)."""
    return HomogeneousMap.from_components([Y * Z, Y * Y - X * Z, Z * Z])


def linear_growth_map() -> HomogeneousMap:
    """(xz : xy : z^2), whose degrees grow by one per iterate."""
    return HomogeneousMap.from_components([X * Z, X * Y, Z * Z])


# ---------------------------------------------------------------------------
# Orbit data V_n
# ---------------------------------------------------------------------------


class Termination(enum.Enum):
    HIT_TARGET = "HitTarget"
    INDETERMINATE = "Indeterminate"
    BUDGET = "Budget"


@dataclass(frozen=True)
class OrbitRecord:
    points: tuple[ProjectivePoint, ...]
    hit_index: int | None
    terminated_by: Termination

    def to_json(self) -> dict:
        return {
            "points": [str(p) for p in self.points],
            "hit_index": self.hit_index,
            "terminated_by": self.terminated_by.value,
        }


def _same_point(p: ProjectivePoint, q: ProjectivePoint, tol: float) -> bool:
    if p.is_exact and q.is_exact:
        return p == q
    return p.close_to(q, tol)


def vn_membership(a, b, n_max: int, tol: float = BALL_TOLERANCE) -> OrbitRecord:
    """Least j <= n_max with f_{a,b}^j(q) = p_*, following the plane orbit."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    a, b = _c(a), _c(b)
    f = make(FamilyId(Family.BK_FAB, {"a": a, "b": b}), allow_degenerate=True)
    q = ProjectivePoint((1, -a, 0))
    target = ProjectivePoint((1, -b, -a))
    points = [q]
    current = q
    for j in range(n_max + 1):
        if _same_point(current, target, tol):
            return OrbitRecord(tuple(points), j, Termination.HIT_TARGET)
        if j == n_max:
            break
        image = evaluate(f, current)
        if isinstance(image, Indeterminate):
            return OrbitRecord(tuple(points), None, Termination.INDETERMINATE)
        current = image
        points.append(current)
    return OrbitRecord(tuple(points), None, Termination.BUDGET)


# ---------------------------------------------------------------------------
# Invariant cubics
# ---------------------------------------------------------------------------


def _is_cube_root_of_unity(t) -> bool:
    if is_exact(t):
        return False  # primitive cube roots of unity are not in Q(i)
    return any(ComplexBall.exact(w).overlaps(t) if isinstance(t, ComplexBall) else abs(complex(t) - w) < 1e-12
               for w in (cmath.exp(2j * math.pi / 3), cmath.exp(-2j * math.pi / 3)))


def phi_curve(j: int, t) -> tuple:
    """The parameter curves phi_1, phi_2, phi_3 carrying invariant cubics."""
    t = _c(t)
    if isinstance(t, int):
        t = Fraction(t)
    if j not in (1, 2, 3):
        raise ValueError("j must be 1, 2 or 3")
    if (is_exact(t) and t in (0, 1, -1)) or _is_cube_root_of_unity(t):
        raise ExcludedParameter(f"t = {t} is excluded")
    try:
        if j == 1:
            a, b = (t - t ** 3 - t ** 4) / (1 + 2 * t + t ** 2), (1 - t ** 5) / (t ** 2 + t ** 3)
        elif j == 2:
            a, b = (t + t ** 2 + t ** 3) / (1 + 2 * t + t ** 2), (t ** 3 - 1) / (t + t ** 2)
        else:
            a, b = 1 + t, t - 1 / t
    except ZeroDivisionError as exc:
        raise ExcludedParameter(f"phi_{j} has a pole at t = {t}") from exc
    return (simplify_scalar(a), simplify_scalar(b)) if is_exact(t) else (a, b)


def invariant_cubic(t, a, b) -> MPoly:
    """P_{t,a,b}, the candidate invariant cubic of f_{a,b}."""
    t, a, b = _c(t), _c(a), _c(b)
    tm = t - 1
    return ((X ** 3).scale(a * tm * t ** 4)
            + (Y * Z * (Z + Y.scale(t))).scale(tm * t)
            + X * ((Y * Z).scale(2 * b * t ** 3) + (Y * Y).scale(tm * t ** 3) + (Z * Z).scale(tm * (1 + b * t)))
            + (X * X).scale(tm * t ** 3) * ((Y + Z.scale(t)).scale(a) + (Y + Z.scale(t - 2 * b)).scale(t)))


def cubic_invariance_check(j: int | None, t, a=None, b=None) -> bool:
    """True iff P_{t,a,b} divides P_{t,a,b} o f_{a,b} exactly.

    With ``j`` given, (a, b) = phi_j(t); otherwise (a, b) must be passed.
    """
    if j is not None:
        a, b = phi_curve(j, t)
    elif a is None or b is None:
        raise ValueError("pass j or both a and b")
    p = invariant_cubic(t, a, b)
    if p.is_zero():
        return False
    f = make(FamilyId(Family.BK_FAB, {"a": a, "b": b}), allow_degenerate=True)
    pulled = p.substitute(list(f.components))
    _, r = pulled.divmod(p)
    return r.is_zero()


# ---------------------------------------------------------------------------
# McMullen orbit condition
# ---------------------------------------------------------------------------

P1 = ProjectivePoint((0, 0, 1))
P2 = ProjectivePoint((0, 1, 0))
P3 = ProjectivePoint((1, 0, 0))


def _on_triangle(p: ProjectivePoint) -> bool:
    """True when p may lie on one of the lines x = 0, y = 0, z = 0."""
    for c in p.coords:
        if isinstance(c, ComplexBall):
            if c.contains_zero():
                return True
        elif c == 0:
            return True
    return False


def mcmullen_orbit_check(a, b, n: int, tol: float = BALL_TOLERANCE) -> bool:
    """p_4 = (a:b:1), p_{i+4} = f^i(p_4): no p_i (4 <= i <= n) on the
    triangle and p_{n+1} = p_1."""
    if n < 3:
        raise ValueError("n must be at least 3")
    a, b = _c(a), _c(b)
    f = make(FamilyId(Family.MCMULLEN, {"a": a, "b": b}), allow_degenerate=True)
    p = ProjectivePoint((a, b, 1))
    for _ in range(4, n + 1):
        if _on_triangle(p):
            return False
        image = evaluate(f, p)
        if isinstance(image, Indeterminate):
            raise IndeterminateOrbit(f"orbit meets an indeterminacy point at {p}")
        p = image
    return _same_point(p, P1, tol)


class _Dual:
    """Value with partial derivatives in two variables."""

    __slots__ = ("v", "da", "db")

    def __init__(self, v, da, db):
        self.v, self.da, self.db = v, da, db

    def __add__(self, o):
        if isinstance(o, _Dual):
            return _Dual(self.v + o.v, self.da + o.da, self.db + o.db)
        return _Dual(self.v + o, self.da, self.db)

    __radd__ = __add__

    def __truediv__(self, o: "_Dual"):
        q = self.v / o.v
        return _Dual(q, (self.da - q * o.da) / o.v, (self.db - q * o.db) / o.v)


def _mcmullen_residual(a, b, n: int, zero, one):
    """Affine f^{n-3}(a, b) as dual numbers in (a, b)."""
    x = _Dual(a, one, zero)
    y = _Dual(b, zero, one)
    for _ in range(n - 3):
        x, y = _Dual(a + y.v, one + y.da, y.db), _Dual(b, zero, one) + y / x
    return x, y


@dataclass(frozen=True)
class McMullenSolution:
    a: ComplexBall
    b: ComplexBall
    n: int


def _newton(n: int, a, b, prec: int, drift: float, iterations: int = 80):
    with mpmath.workprec(prec + 20):
        a, b = mpmath.mpc(a), mpmath.mpc(b)
        a0, b0 = a, b
        zero, one = mpmath.mpc(0), mpmath.mpc(1)
        tiny = mpmath.ldexp(1, -(prec - 8))
        for _ in range(iterations):
            try:
                x, y = _mcmullen_residual(a, b, n, zero, one)
                det = x.da * y.db - x.db * y.da
                if det == 0:
                    return None
                sa = (-x.v * y.db + y.v * x.db) / det
                sb = (-y.v * x.da + x.v * y.da) / det
            except ZeroDivisionError:
                return None
            a, b = a + sa, b + sb
            if abs(a - a0) + abs(b - b0) > drift:
                return None
            if abs(sa) + abs(sb) <= tiny * (1 + abs(a) + abs(b)):
                return a, b
        return None


def _krawczyk(n: int, a, b, prec: int) -> McMullenSolution | None:
    """Certify a unique zero near (a, b) by a Krawczyk contraction test."""
    with mpmath.workprec(prec):
        radius = mpmath.ldexp(1, -(prec // 3))
        zero, one = mpmath.mpc(0), mpmath.mpc(1)
        x, y = _mcmullen_residual(a, b, n, zero, one)
        det = x.da * y.db - x.db * y.da
        if det == 0:
            return None
        # Y approximates the inverse Jacobian at the midpoint
        y11, y12, y21, y22 = y.db / det, -x.db / det, -y.da / det, x.da / det
    ex = lambda v: ComplexBall.exact(v, prec)
    bz, bo = ex(0), ex(1)
    am, bm = ex(a), ex(b)
    try:
        fx, fy = _mcmullen_residual(am, bm, n, bz, bo)
        box_a = ComplexBall.from_mid_rad(a, radius, prec)
        box_b = ComplexBall.from_mid_rad(b, radius, prec)
        jx, jy = _mcmullen_residual(box_a, box_b, n, bz, bo)
    except ZeroDivisionError:
        return None
    Y11, Y12, Y21, Y22 = ex(y11), ex(y12), ex(y21), ex(y22)
    da = ComplexBall.from_mid_rad(0, radius, prec)
    db = ComplexBall.from_mid_rad(0, radius, prec)
    m11 = bo - (Y11 * jx.da + Y12 * jy.da)
    m12 = bz - (Y11 * jx.db + Y12 * jy.db)
    m21 = bz - (Y21 * jx.da + Y22 * jy.da)
    m22 = bo - (Y21 * jx.db + Y22 * jy.db)
    ka = am - (Y11 * fx.v + Y12 * fy.v) + m11 * da + m12 * db
    kb = bm - (Y21 * fx.v + Y22 * fy.v) + m21 * da + m22 * db

    def inside(k: ComplexBall, box: ComplexBall) -> bool:
        with mpmath.workprec(prec):
            return abs(k.mid - box.mid) + k.rad < box.rad

    if inside(ka, box_a) and inside(kb, box_b):
        return McMullenSolution(ka, kb, n)
    return None


def mcmullen_solve(n: int, seed, precision: int | None = None,
                   drift: float = MCMULLEN_DRIFT) -> McMullenSolution | None:
    """Newton on (a, b) -> f^{n-3}(a, b) = (0, 0), certified by Krawczyk.

    The search is local: iterates leaving the ``drift`` neighbourhood of the
    seed count as divergence.  ``n = 3`` returns (0, 0) directly.  Returns
    None when Newton diverges, the contraction test fails, or the certified
    point breaks the orbit conditions.
    """
    prec = precision or default_precision()
    if n == 3:
        return McMullenSolution(ComplexBall.exact(0, prec), ComplexBall.exact(0, prec), 3)
    if n < 7:
        raise ValueError("the solver is meant for n >= 7")
    a0, b0 = seed
    found = _newton(n, complex(a0), complex(b0), prec, drift)
    if found is None:
        return None
    sol = _krawczyk(n, found[0], found[1], prec)
    if sol is None:
        return None
    try:
        if not mcmullen_orbit_check(sol.a, sol.b, n):
            return None
    except IndeterminateOrbit:
        return None
    return sol


def mcmullen_grid_seeds(n: int, extent: float = 1.0, steps: int = 9, keep: int = 12) -> list[tuple[complex, complex]]:
    """Real grid points in [-extent, extent]^2 ordered by residual size."""
    scored = []
    for i in range(steps):
        for j in range(steps):
            a = -extent + 2 * extent * i / (steps - 1)
            b = -extent + 2 * extent * j / (steps - 1)
            try:
                x, y = _mcmullen_residual(complex(a), complex(b), n, 0j, 1 + 0j)
                r = abs(x.v) + abs(y.v)
            except ZeroDivisionError:
                continue
            scored.append((r, complex(a), complex(b)))
    scored.sort(key=lambda s: s[0])
    return [(a, b) for _, a, b in scored[:keep]]


def mcmullen_scan(n: int, precision: int | None = None, **grid) -> McMullenSolution | None:
    """First certified solution from the grid seeds, or None."""
    for seed in mcmullen_grid_seeds(n, **grid):
        sol = mcmullen_solve(n, seed, precision)
        if sol is not None:
            return sol
    return None


# ---------------------------------------------------------------------------
# Jets and gluing conditions
# ---------------------------------------------------------------------------

Series = dict  # (i, j) -> coefficient, total degree <= JET_ORDER


def _truncate(p: MPoly, order: int) -> Series:
    return {e: c for e, c in p.terms.items() if sum(e) <= order}


def _series_mul(a: Series, b: Series, order: int) -> Series:
    out: Series = {}
    for (i, j), c in a.items():
        for (k, l), d in b.items():
            if i + j + k + l <= order:
                key = (i + k, j + l)
                out[key] = out[key] + c * d if key in out else c * d
    return out


def _series_inverse(a: Series, order: int) -> Series:
    c0 = a.get((0, 0), 0)
    if isinstance(c0, ComplexBall) and c0.contains_zero() or (not isinstance(c0, ComplexBall) and c0 == 0):
        raise PoleAtBase("denominator vanishes at the base point")
    inv0 = 1 / (Fraction(c0) if isinstance(c0, int) else c0)
    h = {k: -v * inv0 for k, v in a.items() if k != (0, 0)}
    out: Series = {(0, 0): 1}
    power: Series = {(0, 0): 1}
    for _ in range(order):
        power = _series_mul(power, h, order)
        for k, v in power.items():
            out[k] = out[k] + v if k in out else v
    return {k: v * inv0 for k, v in out.items()}


def _series_as_mpoly(s: Series) -> MPoly:
    return MPoly(2, s)


@dataclass(frozen=True)
class Jet2x4:
    """Order-4 jet (sum m_ij y^i z^j, sum n_ij y^i z^j) of a germ at the origin."""

    m: Mapping[tuple[int, int], object]
    n: Mapping[tuple[int, int], object]

    @staticmethod
    def from_coefficients(m: Mapping[tuple[int, int], object], n: Mapping[tuple[int, int], object]) -> "Jet2x4":
        keep = lambda d: {k: simplify_scalar(v) if is_exact(v) else v
                          for k, v in d.items() if sum(k) <= JET_ORDER and not (is_exact(v) and v == 0)}
        return Jet2x4(keep(m), keep(n))

    def mc(self, i: int, j: int):
        return self.m.get((i, j), 0)

    def nc(self, i: int, j: int):
        return self.n.get((i, j), 0)

    def to_json(self) -> dict:
        fmt = lambda d: {f"{i},{j}": str(v) for (i, j), v in sorted(d.items())}
        return {"m": fmt(self.m), "n": fmt(self.n)}


def _chart_point(base: ProjectivePoint, chart: int) -> tuple:
    c = base.coords[chart]
    if is_exact(c) and c == 0 or isinstance(c, ComplexBall) and c.contains_zero():
        raise PoleAtBase(f"base point has zero coordinate in chart {chart}")
    if isinstance(c, int):
        c = Fraction(c)
    return tuple(simplify_scalar(v / c) if is_exact(v) and is_exact(c) else v / c for v in base.coords)


def germ_jet(f: HomogeneousMap, base: ProjectivePoint, chart: int = 0, order: int = JET_ORDER,
             target: ProjectivePoint | None = None, target_chart: int | None = None) -> Jet2x4:
    """Taylor coefficients to ``order`` of f near ``base``.

    Source coordinates are the two non-chart coordinates minus those of
    ``base``; target coordinates are taken in ``target_chart`` (default the
    same chart) relative to ``target`` (default ``base`` itself, so a germ
    fixing the base has zero constant terms).
    """
    tchart = chart if target_chart is None else target_chart
    b = _chart_point(base, chart)
    tgt = _chart_point(target if target is not None else base, tchart)
    others = [k for k in range(3) if k != chart]
    subs = []
    u = MPoly.var(0, 2)
    v = MPoly.var(1, 2)
    local = {others[0]: u, others[1]: v}
    for k in range(3):
        const = MPoly.constant(b[k], 2)
        subs.append(const + local[k] if k in local else const)
    comps = [_truncate(c.substitute(subs), order) for c in f.components]
    inv = _series_inverse(comps[tchart], order)
    touts = [k for k in range(3) if k != tchart]
    series = []
    for k in touts:
        s = _series_mul(comps[k], inv, order)
        s[(0, 0)] = s.get((0, 0), 0) - tgt[k]
        series.append(s)
    return Jet2x4.from_coefficients(series[0], series[1])


def compose_jets(outer: Jet2x4, inner: Jet2x4, order: int = JET_ORDER) -> Jet2x4:
    """Jet of outer o inner; inner must fix the origin."""
    if inner.mc(0, 0) != 0 or inner.nc(0, 0) != 0:
        raise ValueError("the inner jet must send the origin to the origin")
    u = _series_as_mpoly(dict(inner.m))
    v = _series_as_mpoly(dict(inner.n))
    m = _truncate(_series_as_mpoly(dict(outer.m)).substitute([u, v]), order)
    n = _truncate(_series_as_mpoly(dict(outer.n)).substitute([u, v]), order)
    return Jet2x4.from_coefficients(m, n)


@dataclass(frozen=True)
class GluingVerdict:
    passed: bool
    witnesses: tuple

    def to_json(self) -> dict:
        return {"pass": self.passed, "witnesses": [str(t) for t in self.witnesses]}


def _is_zero(value, tol: float) -> bool:
    if isinstance(value, ComplexBall):
        return value.contains_zero() or abs(complex(value)) <= tol
    return value == 0


def gluing_check(jet: Jet2x4, tol: float = BALL_TOLERANCE) -> GluingVerdict:
    """m00 = n00 = 0, n10 = 0, m10 = t^2, n01 = i t^3 and 3 m01 t + 2i n20 = 0.

    From m10 = t^2 and n01 = i t^3 the witness is t = n01 / (i m10);
    t = 0 is the only option when m10 = 0.
    """
    m00, n00, n10 = jet.mc(0, 0), jet.nc(0, 0), jet.nc(1, 0)
    m10, n01, m01, n20 = jet.mc(1, 0), jet.nc(0, 1), jet.mc(0, 1), jet.nc(2, 0)
    if not (_is_zero(m00, tol) and _is_zero(n00, tol) and _is_zero(n10, tol)):
        return GluingVerdict(False, ())
    if _is_zero(m10, tol):
        candidates = [0] if _is_zero(n01, tol) else []
    else:
        candidates = [n01 / (I * m10)]
    witnesses = []
    for t in candidates:
        if (_is_zero(t * t - m10, tol) and _is_zero(I * t ** 3 - n01, tol)
                and _is_zero(3 * m01 * t + 2 * I * n20, tol)):
            witnesses.append(simplify_scalar(t) if is_exact(t) else t)
    return GluingVerdict(bool(witnesses), tuple(witnesses))


def return_germ(alpha) -> HomogeneousMap:
    """(phi_alpha Phi)^2 phi_alpha, the composition returning to (1:0:0)."""
    phi = linear_map(phi_alpha_matrix(alpha))
    big_phi = make(FamilyId(Family.DG_PHI, {"n": 3}))
    g = phi
    for _ in range(2):
        g = compose(phi, compose(big_phi, g))
    return g


# ---------------------------------------------------------------------------
# Orbit projections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionTable:
    rows: tuple[tuple[float, ...], ...]
    terminated_by: str  # "complete", "overflow" or "pole"
    y_modulus_range: tuple[float, float]

    HEADER = ("n", "om1_a", "om1_b", "om1_c", "om2_a", "om2_b", "om2_c")

    def __len__(self) -> int:
        return len(self.rows)

    def write_csv(self, stream) -> None:
        import csv
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(self.HEADER)
        for k, row in enumerate(self.rows, start=1):
            w.writerow([k] + [repr(v) for v in row])


def orbit_projection_samples(alpha, beta, m0: Sequence, n: int, cap: float = ORBIT_CAP) -> ProjectionTable:
    """Rows (Re x, Im x, Im y, Re x, Re y, Im y) for f^k(m0), k = 1..n."""
    if n < 1:
        raise ValueError("N must be at least 1")
    a, b = complex(alpha), complex(beta)
    x, y = complex(m0[0]), complex(m0[1])
    rows = []
    status = "complete"
    lo, hi = math.inf, 0.0
    for _ in range(n):
        den = x + 1
        if den == 0:
            status = "pole"
            break
        x, y = (a * x + y) / den, b * y
        if not (abs(x) <= cap and abs(y) <= cap):
            status = "overflow"
            break
        ay = abs(y)
        lo, hi = min(lo, ay), max(hi, ay)
        rows.append((x.real, x.imag, y.imag, x.real, y.real, y.imag))
    if not rows:
        lo = hi = 0.0
    return ProjectionTable(tuple(rows), status, (lo, hi))


def parameter_list(values: Iterable) -> list:
    return [_c(v) for v in values]
