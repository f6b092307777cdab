"""Reference values computed independently with sympy and mpmath.

``FROZEN`` holds the values used by the tests.  ``compute_all`` rebuilds
them from scratch without touching cremona_lab (except to read the stored
catalog matrices) and ``test_oracles.py`` checks that the two agree.
"""

import mpmath
import sympy as sp
from sympy import Matrix

t, x, y, z, u, v = sp.symbols("t x y z u v")

FROZEN = {'adjacency': {3: '1.0',
               4: '1.618033988749894848204587',
               5: '1.847759065022573512256366',
               6: '1.931851652578136573499486',
               7: '1.969615506024416118733486',
               8: '1.989043790736546673845384',
               9: '2.0',
               10: '2.006593618346016732650516',
               11: '2.010756304383370281221273',
               12: '2.013481351239715326952473'},
 'charpoly': {'M_fabY': [-1, -1, 0, 1],
              'M_rho': [1, -1, 0, -1, 1],
              'M_rho_strict_recomputed': [-1, 2, 0, -2, 1],
              'M_rho_total_recomputed': [-1, 2, 0, -2, 1],
              'M_sigma': [-1, 2, 0, -2, 1],
              'M_sigma_strict_recomputed': [-1, 2, 0, -2, 1],
              'M_sigma_total_recomputed': [-1, 2, 0, -2, 1],
              'M_tau': [1, -1, 0, -1, 1],
              'M_tau_strict_recomputed': [-1, 2, 0, -2, 1],
              'M_tau_total_recomputed': [-1, 2, 0, -2, 1],
              'phi_Phi_16': [1, -3, 0, 1, 5, 0, -6, 2, 0, 2, -6, 0, 5, 1, 0, -3, 1],
              'rot_13': [-1, 2, 0, 0, 0, -3, 0, 0, 3, 0, 0, 0, -2, 1]},
 'chi41_root': '1.72208380573904224502706921215',
 'chi_roots': {7: '1.17628081825991750654407033847',
               8: '1.23039143440722470279017793898',
               9: '1.26123096113713885194667150307',
               10: '1.28063815626775759670190253271',
               11: '1.29348595312545410651990988379',
               12: '1.30226880509433446296424086463',
               13: '1.3084090062132574786389043186',
               14: '1.31277323952613836021354433461',
               15: '1.31591443192594722666059677036',
               16: '1.3181975044316906975361527973',
               17: '1.31986966188347058216393347939',
               18: '1.32110184825931608766933697213',
               19: '1.32201423961763679668484054363',
               20: '1.32269245790333023668758392558'},
 'coxeter_full': {3: [-1, -1, 0, 1, 1],
                  4: [-1, 0, 0, 0, 0, 1],
                  5: [-1, 0, 1, 0, -1, 0, 1],
                  6: [-1, 0, 1, 1, -1, -1, 0, 1],
                  7: [-1, 0, 1, 1, 0, -1, -1, 0, 1],
                  8: [-1, 0, 1, 1, 0, 0, -1, -1, 0, 1],
                  9: [-1, 0, 1, 1, 0, 0, 0, -1, -1, 0, 1],
                  10: [-1, 0, 1, 1, 0, 0, 0, 0, -1, -1, 0, 1],
                  11: [-1, 0, 1, 1, 0, 0, 0, 0, 0, -1, -1, 0, 1],
                  12: [-1, 0, 1, 1, 0, 0, 0, 0, 0, 0, -1, -1, 0, 1],
                  13: [-1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, -1, -1, 0, 1],
                  14: [-1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, 0, 1]},
 'degrees': {'bk_fab_3_5': [2, 2, 3, 4, 5, 7, 9],
             'f_alpha_beta_2_3': [2, 2, 3, 3, 4, 4, 5, 5],
             'henon': [2, 4, 8, 16, 32, 64],
             'linear': [2, 3, 4, 5, 6, 7, 8, 9],
             'sigma': [2, 1, 2, 1]},
 'lehmer_root': '1.17628081825991750654407033847',
 'mcmullen10': ['0.0837358229759429727208048271992', '-0.499496509742646501264693846024'],
 'plastic_root': '1.32471795724474602596090885448',
 'return_jet': {'m': {(0, 1): '4',
                      (0, 2): '-20',
                      (0, 3): '-134',
                      (0, 4): '1370',
                      (1, 0): '-1',
                      (1, 1): '36',
                      (1, 2): '-20',
                      (1, 3): '-3962',
                      (2, 0): '-13',
                      (2, 1): '170',
                      (2, 2): '2616',
                      (3, 0): '-69',
                      (3, 1): '-98',
                      (4, 0): '-219'},
                'n': {(0, 1): '-1',
                      (0, 2): '26',
                      (0, 3): '-24',
                      (0, 4): '-1232',
                      (1, 1): '-25',
                      (1, 2): '262',
                      (1, 3): '1700',
                      (2, 0): '6',
                      (2, 1): '-241',
                      (2, 2): '492',
                      (3, 0): '58',
                      (3, 1): '-1237',
                      (4, 0): '356'}}}


def coeffs(p) -> list[int]:
    """Ascending integer coefficients of a polynomial in t."""
    return [int(a) for a in sp.Poly(sp.expand(p), t).all_coeffs()[::-1]]


def minkowski(n: int) -> Matrix:
    return sp.diag(1, *([-1] * n))


def simple_roots(n: int) -> list[Matrix]:
    roots = [Matrix([1, -1, -1, -1] + [0] * (n - 3))]
    for j in range(1, n):
        r = [0] * (n + 1)
        r[j + 1], r[j] = 1, -1
        roots.append(Matrix(r))
    return roots


def reflection(n: int, a: Matrix) -> Matrix:
    return sp.eye(n + 1) + a * (a.T * minkowski(n))


def coxeter_matrix(n: int) -> Matrix:
    w = sp.eye(n + 1)
    for a in simple_roots(n):
        w = w * reflection(n, a)
    return w


def charpoly(m: Matrix) -> list[int]:
    return coeffs((t * sp.eye(m.rows) - m).det(method="berkowitz"))


def largest_real_root(c_asc: list[int]) -> mpmath.mpf:
    roots = mpmath.polyroots(c_asc[::-1], maxsteps=400, extraprec=400)
    return max(q.real for q in roots if abs(q.imag) < mpmath.mpf(10) ** -25)


def chi_coeffs(n: int) -> list[int]:
    c = [0] * (n + 5)
    c[n + 4] += 1
    c[n + 2] -= 1
    c[n + 1] -= 1
    c[3] += 1
    c[2] += 1
    c[0] -= 1
    return c


def adjacency(n: int) -> mpmath.matrix:
    roots, j = simple_roots(n), minkowski(n)
    a = mpmath.zeros(n)
    for p in range(n):
        for q in range(n):
            if p != q:
                a[p, q] = abs(int((roots[p].T * j * roots[q])[0]))
    return a


def taylor(expr, order: int = 4) -> dict:
    s = sp.series(sp.series(expr, u, 0, order + 1).removeO(), v, 0, order + 1).removeO()
    poly = sp.Poly(sp.expand(s), u, v)
    return {(i, j): str(c) for (i, j), c in poly.terms() if i + j <= order}


def return_jet(alpha: int = 2) -> dict:
    phi = Matrix([[alpha, 2 * (1 - alpha), 2 + alpha - alpha ** 2], [-1, 0, alpha + 1], [1, -2, 1 - alpha]])
    def big_phi(p):
        a, b, c = p
        return [a * c ** 2 + b ** 3, b * c ** 2, c ** 3]
    p = list(phi * Matrix([1, u, v]))
    for _ in range(2):
        p = list(phi * Matrix(big_phi(p)))
    return {"m": taylor(p[1] / p[0]), "n": taylor(p[2] / p[0])}


def mcmullen10() -> list[str]:
    def residual(a, b, n=10):
        xx, yy = a, b
        for _ in range(n - 3):
            xx, yy = a + yy, b + yy / xx
        return [xx, yy]
    sol = mpmath.findroot(lambda a, b: residual(a, b), (mpmath.mpf("0.08"), mpmath.mpf("-0.5")))
    return [mpmath.nstr(sol[0], 30), mpmath.nstr(sol[1], 30)]


def degree_sequence(f: list, n: int) -> list[int]:
    """deg f, deg f^2, ... with the common factor removed at every step."""
    cur, degs = list(f), []
    for k in range(n):
        g = sp.gcd(sp.gcd(cur[0], cur[1]), cur[2])
        cur = [sp.expand(sp.cancel(c / g)) for c in cur]
        degs.append(max(sp.Poly(c, x, y, z).total_degree() for c in cur if c != 0))
        if k < n - 1:
            cur = [sp.expand(c.subs({x: cur[0], y: cur[1], z: cur[2]}, simultaneous=True)) for c in f]
    return degs


def compute_all(catalog_rows: dict) -> dict:
    """Recompute FROZEN; ``catalog_rows`` maps catalog names to integer rows."""
    mpmath.mp.dps = 40
    out = {"charpoly": {name: charpoly(Matrix(rows)) for name, rows in catalog_rows.items()}}
    out["coxeter_full"] = {n: charpoly(coxeter_matrix(n)) for n in range(3, 15)}
    out["lehmer_root"] = mpmath.nstr(largest_real_root([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]), 30)
    out["plastic_root"] = mpmath.nstr(largest_real_root([-1, -1, 0, 1]), 30)
    out["chi_roots"] = {n: mpmath.nstr(largest_real_root(chi_coeffs(n)), 30) for n in range(7, 21)}
    out["chi41_root"] = mpmath.nstr(largest_real_root([1, -1, -1, -1, 1]), 30)
    out["adjacency"] = {n: mpmath.nstr(max(mpmath.eig(adjacency(n))[0], key=lambda q: q.real).real, 25)
                        for n in range(3, 13)}
    out["return_jet"] = return_jet()
    out["mcmullen10"] = mcmullen10()
    out["degrees"] = {
        "sigma": degree_sequence([y * z, x * z, x * y], 4),
        "henon": degree_sequence([y * z, y ** 2 - x * z, z ** 2], 6),
        "f_alpha_beta_2_3": degree_sequence([(2 * x + y) * z, 3 * y * (x + z), z * (x + z)], 8),
        "linear": degree_sequence([x * z, x * y, z ** 2], 8),
        "bk_fab_3_5": degree_sequence([x * (5 * x + y), z * (5 * x + y), x * (3 * x + z)], 7),
    }
    return out
