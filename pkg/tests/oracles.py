"""Reference computations that share no code with the package.

Scalars here are plain Python ints reduced mod p, or Fractions for Q.
Polynomial expansion goes through sympy.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import sympy


class Arith:
    """Field arithmetic on ints mod p (p > 0) or on Fractions (p == 0)."""

    def __init__(self, p: int):
        self.p = p

    def norm(self, x):
        if self.p:
            x = Fraction(x)
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return Fraction(x)

    def inv(self, x):
        return pow(int(x), -1, self.p) if self.p else 1 / Fraction(x)


def rref(rows, ncols, p):
    """Reduced row echelon form: (rows, pivots)."""
    A = Arith(p)
    M = [[A.norm(x) for x in r] for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = A.inv(M[r][c])
        M[r] = [A.norm(x * inv) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [A.norm(a - f * b) for a, b in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    return M[:r], piv


def kernel(rows, ncols, p):
    R, piv = rref(rows, ncols, p)
    A = Arith(p)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [A.norm(0)] * ncols
        v[f] = A.norm(1)
        for row, c in zip(R, piv):
            v[c] = A.norm(-row[f])
        out.append(v)
    return out


def intersect(U, V, ncols, p):
    """Basis of span(U) ∩ span(V) via the null space of [U^T | -V^T]."""
    if not U or not V:
        return []
    A = Arith(p)
    cols = len(U) + len(V)
    system = [[U[i][k] for i in range(len(U))] + [A.norm(-V[j][k]) for j in range(len(V))] for k in range(ncols)]
    out = []
    for sol in kernel(system, cols, p):
        w = [A.norm(sum(sol[i] * U[i][k] for i in range(len(U)))) for k in range(ncols)]
        out.append(w)
    R, _ = rref(out, ncols, p)
    return R


def monomials(n, d):
    """Exponent vectors of degree d, descending lex."""
    out = [e for e in itertools.product(range(d, -1, -1), repeat=n) if sum(e) == d]
    return sorted(out, reverse=True)


@lru_cache(maxsize=None)
def _local_conditions(point: tuple, t: int, m: int, p: int) -> tuple:
    """Rows expressing "order >= m at point" on degree-t forms, by Taylor expansion.

    The point is given with a coordinate equal to 1; substitute x = point + y
    in the other coordinates and read off the coefficients of y-monomials of
    degree < m.
    """
    n = len(point)
    k = point.index(1)
    ys = sympy.symbols(f"y0:{n}")
    subs = [sympy.Integer(1) if i == k else sympy.Rational(point[i]) + ys[i] for i in range(n)]
    others = [ys[i] for i in range(n) if i != k]
    lows = [e for s in range(m) for e in monomials(n - 1, s)]
    mons = monomials(n, t)
    table = []
    for mono in mons:
        expr = sympy.Integer(1)
        for base, e in zip(subs, mono):
            expr *= base**e
        poly = sympy.Poly(sympy.expand(expr), *others)
        coeffs = {tuple(mon): Fraction(int(c.p), int(c.q)) for mon, c in poly.terms()}
        table.append([coeffs.get(tuple(e), 0) for e in lows])
    return tuple(tuple(table[j][i] for j in range(len(mons))) for i in range(len(lows)))


def point_component(point, t, m, p):
    """Degree-t forms vanishing to order >= m at one point (basis rows)."""
    ncols = len(monomials(len(point), t))
    point = tuple(Fraction(c) for c in point)
    if m <= 0:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    return kernel(list(_local_conditions(tuple(point), t, m, p)), ncols, p)


def symbolic_component(points, t, p):
    """Intersection over (point, mult) of the single-point components, as an RREF basis."""
    n = len(points[0][0])
    ncols = len(monomials(n, t))
    acc = None
    for P, mult in points:
        W = point_component(P, t, mult, p)
        if acc is None:
            acc, _ = rref(W, ncols, p)
        else:
            acc = intersect(acc, W, ncols, p)
        if not acc:
            return []
    return acc


def normalize_point(coords, p):
    """Representative whose first nonzero coordinate is 1 (ints mod p or Fractions)."""
    A = Arith(p)
    cs = [A.norm(c) for c in coords]
    k = next(i for i, c in enumerate(cs) if c != 0)
    inv = A.inv(cs[k])
    return tuple(A.norm(c * inv) for c in cs)
