"""Weyl groups W_n acting on Z^{1,n}.

Simple roots are alpha_0 = e_0 - e_1 - e_2 - e_3 and alpha_j = e_{j+1} - e_j.
Their Coxeter graph is the chain s_1 - s_2 - ... - s_{n-1} with s_0 attached
to s_3, so W_3, ..., W_8 are the finite groups A_2 x A_1, A_4, D_5, E_6, E_7,
E_8 and W_9 is affine.

A Coxeter element fixes the canonical class K, which is orthogonal to every
root, so its characteristic polynomial on Z^{1,n} is (t - 1) times its
characteristic polynomial on the root sublattice.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .arith import (
    ComplexBall,
    IntegerMatrix,
    IntPolynomial,
    NonDivisible,
    char_poly,
    default_precision,
    spectral_radius,
)
from .picard import LatticeIsometry, LatticeVector, PicardLattice, Verification, inner_product

ORDER_CAP = 1000


class WeylError(Exception):
    pass


class NotMinusTwo(WeylError, ValueError):
    pass


class TooSmall(WeylError, ValueError):
    pass


class InfiniteOrder(WeylError):
    pass


class Inconclusive(WeylError):
    pass


@dataclass(frozen=True)
class WeylContext:
    n: int

    def __post_init__(self) -> None:
        if self.n < 3:
            raise TooSmall("Weyl groups W_n need n >= 3")

    @property
    def lattice(self) -> PicardLattice:
        return PicardLattice(self.n)

    @property
    def simple_roots(self) -> tuple[LatticeVector, ...]:
        return simple_roots(self.n)

    def reflection(self, k: int) -> LatticeIsometry:
        return simple_reflection(self.n, k)


@lru_cache(maxsize=None)
def simple_roots(n: int) -> tuple[LatticeVector, ...]:
    size = n + 1
    roots = [LatticeVector((1, -1, -1, -1) + (0,) * (size - 4))]
    for j in range(1, n):
        c = [0] * size
        c[j + 1], c[j] = 1, -1
        roots.append(LatticeVector(tuple(c)))
    return tuple(roots)


@dataclass(frozen=True)
class CoxeterWord:
    """A permutation of the generator indices 0..n-1."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        order = tuple(int(k) for k in self.order)
        if sorted(order) != list(range(len(order))):
            raise ValueError("a Coxeter word uses every generator exactly once")
        object.__setattr__(self, "order", order)

    @staticmethod
    def standard(n: int) -> "CoxeterWord":
        return CoxeterWord(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.order)


def reflect(v: LatticeVector, alpha: LatticeVector) -> LatticeVector:
    """x + (x . alpha) alpha."""
    return v + alpha * inner_product(v, alpha)


def reflection(ctx: WeylContext, alpha: LatticeVector) -> LatticeIsometry:
    """Matrix of x -> x + (x . alpha) alpha; requires alpha . alpha = -2."""
    if len(alpha) != ctx.n + 1:
        raise ValueError("root rank does not match the context")
    if inner_product(alpha, alpha) != -2:
        raise NotMinusTwo(f"{alpha} has self-intersection {inner_product(alpha, alpha)}")
    cols = [reflect(ctx.lattice.basis(j), alpha).coords for j in range(ctx.n + 1)]
    rows = [[cols[j][i] for j in range(ctx.n + 1)] for i in range(ctx.n + 1)]
    return LatticeIsometry.checked(IntegerMatrix.from_rows(rows))


@lru_cache(maxsize=None)
def simple_reflection(n: int, k: int) -> LatticeIsometry:
    return reflection(WeylContext(n), simple_roots(n)[k])


def coxeter_element(ctx: WeylContext, word: CoxeterWord | Sequence[int] | None = None) -> LatticeIsometry:
    """R_{w_0} R_{w_1} ... R_{w_{n-1}} for the given word (standard order by default)."""
    if word is None:
        word = CoxeterWord.standard(ctx.n)
    elif not isinstance(word, CoxeterWord):
        word = CoxeterWord(tuple(word))
    if len(word) != ctx.n:
        raise ValueError("word length must equal n")
    m = IntegerMatrix.identity(ctx.n + 1)
    for k in word.order:
        m = m @ simple_reflection(ctx.n, k).matrix
    return LatticeIsometry(m, Verification.VERIFIED)


def standard_element(ctx: WeylContext) -> LatticeIsometry:
    """The explicit Coxeter element

        e_0 -> 2e_0 - e_2 - e_3 - e_4,   e_1 -> e_0 - e_3 - e_4,
        e_2 -> e_0 - e_2 - e_4,          e_3 -> e_0 - e_2 - e_3,
        e_j -> e_{j+1} (4 <= j < n),     e_n -> e_1.
    """
    n = ctx.n
    if n < 4:
        raise TooSmall("the standard element needs n >= 4")
    size = n + 1
    images = [[0] * size for _ in range(size)]
    for j, img in enumerate(([2, 0, -1, -1, -1], [1, 0, 0, -1, -1], [1, 0, -1, 0, -1], [1, 0, -1, -1, 0])):
        images[j][:5] = img
    for j in range(4, n):
        images[j][j + 1] = 1
    images[n][1] = 1
    rows = [[images[j][i] for j in range(size)] for i in range(size)]
    return LatticeIsometry.checked(IntegerMatrix.from_rows(rows))


def coxeter_char_poly_formula(n: int) -> IntPolynomial:
    """(t^{n-2}(t^3 - t - 1) + t^3 + t^2 - 1) / (t - 1), divided exactly."""
    if n < 3:
        raise TooSmall("the formula needs n >= 3")
    t = IntPolynomial.t()
    num = t ** (n - 2) * IntPolynomial((-1, -1, 0, 1)) + IntPolynomial((-1, 0, 1, 1))
    q, r = divmod(num, IntPolynomial((-1, 1)))
    if not r.is_zero():
        raise NonDivisible(f"remainder {r} for n = {n}")
    return q


def root_coordinates(v: LatticeVector, n: int) -> tuple[Fraction, ...]:
    """Coefficients of v in the simple-root basis; raises when v is outside their span."""
    roots = simple_roots(n)
    size = n + 1
    aug = [[Fraction(roots[j][i]) for j in range(n)] + [Fraction(v[i])] for i in range(size)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, size) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][col]
        aug[row] = [x / p for x in aug[row]]
        for r in range(size):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    if any(aug[r][n] != 0 for r in range(row, size)):
        raise ValueError(f"{v} is not in the span of the simple roots")
    coords = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        coords[col] = aug[r][n]
    return tuple(coords)


def restrict_to_roots(m: LatticeIsometry, n: int) -> IntegerMatrix:
    """Matrix of m on the root sublattice, in the simple-root basis."""
    cols = []
    for alpha in simple_roots(n):
        coords = root_coordinates(m.apply(alpha), n)
        if any(c.denominator != 1 for c in coords):
            raise ValueError("image of a root is not an integral root combination")
        cols.append([int(c) for c in coords])
    return IntegerMatrix.from_rows([[cols[j][i] for j in range(n)] for i in range(n)])


def matrix_order(m: IntegerMatrix, cap: int = ORDER_CAP) -> int | None:
    """Least k <= cap with m^k = I, or None."""
    power = m
    for k in range(1, cap + 1):
        if power.is_identity():
            return k
        power = power @ m
    return None


def coxeter_order(n: int, cap: int = ORDER_CAP) -> int:
    """Multiplicative order of the Coxeter element of W_n."""
    ctx = WeylContext(n)
    m = standard_element(ctx) if n >= 4 else coxeter_element(ctx)
    order = matrix_order(m.matrix, cap)
    if order is None:
        raise InfiniteOrder(f"no power up to {cap} is the identity for n = {n}")
    return order


# ---------------------------------------------------------------------------
# Coxeter graph and adjacency spectrum
# ---------------------------------------------------------------------------


def coxeter_graph_edges(n: int) -> tuple[tuple[int, int], ...]:
    """Chain s_1 - ... - s_{n-1} plus the branch s_0 - s_3."""
    edges = [(i, i + 1) for i in range(1, n - 1)]
    if n >= 4:
        edges.append((0, 3))
    return tuple(sorted(edges))


def edges_from_roots(n: int) -> tuple[tuple[int, int], ...]:
    """Edges read off the lattice: |alpha_i . alpha_j| = 1 means m_ij = 3."""
    roots = simple_roots(n)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            d = abs(inner_product(roots[i], roots[j]))
            if d == 1:
                out.append((i, j))
            elif d != 0:
                raise WeylError(f"unexpected product {d} between simple roots")
    return tuple(out)


def adjacency_matrix(n: int) -> IntegerMatrix:
    rows = [[0] * n for _ in range(n)]
    for i, j in coxeter_graph_edges(n):
        rows[i][j] = rows[j][i] = 1
    return IntegerMatrix.from_rows(rows)


def bilinear_form(n: int) -> IntegerMatrix:
    """B_n(alpha_i, alpha_j) = -2 cos(pi / m_ij), integral for simply laced graphs."""
    return IntegerMatrix.identity(n).scale(2) - adjacency_matrix(n)


def adjacency_spectral_radius(n: int, precision: int | None = None) -> ComplexBall:
    """Ball around the spectral radius of A(Gamma_n) = 2 Id - B_n."""
    if n < 3:
        raise TooSmall("adjacency spectra need n >= 3")
    a = IntegerMatrix.identity(n).scale(2) - bilinear_form(n)
    return spectral_radius(a, precision or default_precision())


class Kind(enum.Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class BipartiteRestriction:
    """w on the 2-plane spanned by the bipartite eigenvectors."""

    n: int
    lam: ComplexBall
    matrix: tuple[tuple[ComplexBall, ComplexBall], tuple[ComplexBall, ComplexBall]]
    trace: ComplexBall
    kind: Kind
    leading_eigenvalue: ComplexBall | None

    def entries(self) -> list[list[ComplexBall]]:
        return [list(r) for r in self.matrix]


def bipartite_restriction(n: int, precision: int | None = None) -> BipartiteRestriction:
    """[[lam^2 - 1, -lam], [lam, -1]] with lam the adjacency spectral radius.

    Its determinant is 1 and its trace lam^2 - 2, so the type is read off
    by comparing the trace with 2.
    """
    prec = precision or default_precision()
    lam = adjacency_spectral_radius(n, prec)
    if lam.rad == 0:
        # rational spectral radius: keep every entry exact
        man, exp = lam.mid_re.man_exp
        q = Fraction(man) * Fraction(2) ** exp
        sq = ComplexBall.exact(q * q, prec)
        trace = ComplexBall.exact(q * q - 2, prec)
    else:
        sq = lam * lam
        trace = sq - 2
    mat = ((sq - 1, -lam), (lam, ComplexBall.exact(-1, prec)))
    lo, hi = trace.real_bounds()
    if trace.rad == 0 and trace.mid_re == 2:
        kind = Kind.PARABOLIC
    elif hi < 2 and lo > -2:
        kind = Kind.ELLIPTIC
    elif lo > 2:
        kind = Kind.HYPERBOLIC
    else:
        raise Inconclusive(f"trace ball {trace} does not separate from 2 for n = {n}")
    leading = None
    if kind is Kind.HYPERBOLIC:
        leading = (trace + (trace * trace - 4).sqrt()) / 2
    return BipartiteRestriction(n, lam, mat, trace, kind, leading)


# ---------------------------------------------------------------------------
# Roots
# ---------------------------------------------------------------------------


def roots_up_to_length(ctx: WeylContext, length: int) -> list[LatticeVector]:
    """Distinct images of simple roots under words of length <= ``length``."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    roots = simple_roots(ctx.n)
    seen = dict.fromkeys(roots)
    frontier = list(roots)
    for _ in range(length):
        nxt = []
        for v in frontier:
            for alpha in roots:
                w = reflect(v, alpha)
                if w not in seen:
                    seen[w] = None
                    nxt.append(w)
        frontier = nxt
    return list(seen)


@lru_cache(maxsize=None)
def coherent_signs(n: int) -> tuple[int, ...]:
    """Signs eps_i making eps_i eps_j (alpha_i . alpha_j) >= 0 for all i != j.

    With alpha_j = e_{j+1} - e_j the chain products are +1 but
    alpha_0 . alpha_3 = -1, so the roots as given are not a simple system
    for positivity; flipping signs along the (tree-shaped) graph fixes that
    without changing any reflection.
    """
    roots = simple_roots(n)
    signs = [0] * n
    signs[1 if n > 1 else 0] = 1
    stack = [1 if n > 1 else 0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and signs[j] == 0:
                d = inner_product(roots[i], roots[j])
                if d:
                    signs[j] = signs[i] * (1 if d > 0 else -1)
                    stack.append(j)
    return tuple(s or 1 for s in signs)


def is_sign_coherent(v: LatticeVector, n: int) -> bool:
    """True when v is a nonnegative or nonpositive combination of the
    sign-corrected simple roots eps_i alpha_i."""
    coords = [c * s for c, s in zip(root_coordinates(v, n), coherent_signs(n))]
    return all(c >= 0 for c in coords) or all(c <= 0 for c in coords)


def periodic_roots(m: LatticeIsometry, roots: Iterable[LatticeVector], max_steps: int = 200) -> list[LatticeVector]:
    """Roots r with m^k r = r for some 1 <= k <= max_steps."""
    out = []
    for r in roots:
        v = r
        for _ in range(max_steps):
            v = m.apply(v)
            if v == r:
                out.append(r)
                break
    return out


def coxeter_catalog_json(ns: Iterable[int]) -> list[dict]:
    """Standard Coxeter elements in the catalog JSON layout."""
    out = []
    for n in ns:
        ctx = WeylContext(n)
        m = standard_element(ctx) if n >= 4 else coxeter_element(ctx)
        out.append({
            "name": f"w_{n}",
            "size": m.size,
            "entries": m.matrix.to_json(),
            "source_ref": f"coxeter:W_{n}",
            "verified": m.verified.value,
        })
    return out
