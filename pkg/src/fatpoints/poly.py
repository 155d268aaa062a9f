"""Sparse homogeneous forms in ``x_0, ..., x_N`` over an exact field."""

from __future__ import annotations

import ast
import math
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .scalar import Field, _udivmod, _ugcd, _umul, _utrim

__all__ = [
    "Form",
    "monomials",
    "monomial_index",
    "num_monomials",
    "shift_map",
    "hasse_derivative",
    "evaluate",
    "substitute_powers",
    "common_divisor",
    "vanishing_order",
    "parse_form",
    "multi_indices",
]

Monomial = tuple


# ---------------------------------------------------------------------------
# monomial bookkeeping
# ---------------------------------------------------------------------------


def num_monomials(nvars: int, d: int) -> int:
    if d < 0:
        return 0
    return math.comb(d + nvars - 1, nvars - 1)


@lru_cache(maxsize=None)
def monomials(nvars: int, d: int) -> tuple:
    """Degree-d monomials in descending lexicographic order (x0^d first)."""
    if d < 0:
        return ()
    if nvars == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        for rest in monomials(nvars - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, d: int) -> dict:
    return {m: i for i, m in enumerate(monomials(nvars, d))}


@lru_cache(maxsize=None)
def exponent_array(nvars: int, d: int) -> np.ndarray:
    arr = np.array(monomials(nvars, d), dtype=np.int64).reshape(-1, nvars)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=4096)
def shift_map(nvars: int, d: int, mono: Monomial) -> np.ndarray:
    """Column index in degree d+|mono| of ``mono * m`` for each degree-d monomial m."""
    target = monomial_index(nvars, d + sum(mono))
    idx = np.fromiter(
        (target[tuple(a + b for a, b in zip(m, mono))] for m in monomials(nvars, d)),
        dtype=np.int64,
        count=num_monomials(nvars, d),
    )
    idx.setflags(write=False)
    return idx


@lru_cache(maxsize=None)
def multi_indices(nvars: int, below: int) -> tuple:
    """All exponent vectors in ``nvars`` variables of total degree < below, by degree."""
    out = []
    for s in range(below):
        out.extend(reversed(monomials(nvars, s)) if nvars else [()])
    return tuple(out)


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------


class Form:
    """A homogeneous form; ``terms`` maps exponent tuples to nonzero scalars."""

    __slots__ = ("field", "nvars", "degree", "terms", "_hash")

    def __init__(self, field: Field, nvars: int, degree: int, terms: Mapping | None = None):
        self.field = field
        self.nvars = nvars
        self.degree = degree
        clean = {}
        for m, c in (terms or {}).items():
            if len(m) != nvars:
                raise ValueError(f"monomial {m} has wrong number of variables (expected {nvars})")
            if sum(m) != degree:
                raise ValueError(f"monomial {m} is not of degree {degree}")
            if not field.is_zero(c):
                clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, field, nvars, degree=0):
        return cls(field, nvars, degree, {})

    @classmethod
    def constant(cls, field, nvars, c=None):
        c = field.one if c is None else field(c) if isinstance(c, int) else c
        return cls(field, nvars, 0, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, 1, {tuple(e): field.one})

    @classmethod
    def monomial(cls, field, exps, c=None):
        exps = tuple(exps)
        c = field.one if c is None else c
        return cls(field, len(exps), sum(exps), {exps: c})

    @classmethod
    def linear(cls, field, coeffs):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(field, n, 1, terms)

    @classmethod
    def from_vector(cls, field, nvars, degree, vec, coded=False):
        mons = monomials(nvars, degree)
        terms = {}
        for m, c in zip(mons, vec):
            c = field.decode(int(c)) if coded else c
            if not field.is_zero(c):
                terms[m] = c
        return cls(field, nvars, degree, terms)

    # basic queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def leading_monomial(self):
        return max(self.terms) if self.terms else None

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()] if self.terms else self.field.zero

    def monic(self) -> "Form":
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.leading_coefficient()))

    def to_vector(self, coded=False):
        F = self.field
        idx = monomial_index(self.nvars, self.degree)
        if coded:
            v = np.zeros(len(idx), dtype=np.int64)
            for m, c in self.terms.items():
                v[idx[m]] = F.code(c)
            return v
        v = [F.zero] * len(idx)
        for m, c in self.terms.items():
            v[idx[m]] = c
        return v

    # arithmetic ------------------------------------------------------------
    def _check(self, other: "Form"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")
        if self.field != other.field:
            raise ValueError("field mismatch")

    def _lift(self, other):
        if isinstance(other, Form):
            return other
        if isinstance(other, int) or not isinstance(other, Form):
            return Form.constant(self.field, self.nvars, self.field(other) if isinstance(other, int) else other)
        raise TypeError(other)

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degrees {self.degree} and {other.degree}")
        F = self.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = F.add(terms[m], c) if m in terms else c
        return Form(F, self.nvars, self.degree, terms)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Form(F, self.nvars, self.degree, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        F = self.field
        if F.is_zero(c):
            return Form(F, self.nvars, self.degree, {})
        return Form(F, self.nvars, self.degree, {m: F.mul(c, v) for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Form):
            c = self.field(other) if isinstance(other, int) else other
            return self.scale(c)
        self._check(other)
        F = self.field
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = F.mul(c1, c2)
                terms[m] = F.add(terms[m], v) if m in terms else v
        return Form(F, self.nvars, self.degree + other.degree, terms)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = Form.constant(self.field, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if self.nvars != other.nvars or self.field != other.field:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.degree, frozenset(self.terms.items())))
        return self._hash

    def is_proportional(self, other: "Form") -> bool:
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.monic() == other.monic()

    def exact_divide(self, d: "Form") -> "Form":
        """Quotient of an exact division; raises ValueError when d does not divide self."""
        q, r = _divide(self, d)
        if r:
            raise ValueError("division is not exact")
        return q

    def __repr__(self):
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
            cs = F.to_json(c)
            cs = str(cs) if not isinstance(cs, list) else "(" + ",".join(map(str, cs)) + ")"
            if mono and cs == "1":
                parts.append(mono)
            else:
                parts.append(cs + ("*" + mono if mono else ""))
        return " + ".join(parts)

    # serialization ---------------------------------------------------------
    def to_json(self):
        F = self.field
        return {
            "nvars": self.nvars,
            "degree": self.degree,
            "terms": [[list(m), F.to_json(c)] for m, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, field, obj):
        terms = {}
        for m, c in obj["terms"]:
            terms[tuple(m)] = field.from_json(c)
        return cls(field, obj["nvars"], obj["degree"], terms)


def _divide(f: Form, d: Form):
    """Multivariate division by a single form using the lex order; exact when remainder is zero."""
    if d.is_zero():
        raise ZeroDivisionError("division by zero form")
    F = f.field
    lm, lc = d.leading_monomial(), d.leading_coefficient()
    inv = F.inv(lc)
    rem = dict(f.terms)
    q: dict = {}
    out_rem: dict = {}
    while rem:
        m = max(rem)
        c = rem.pop(m)
        if all(a >= b for a, b in zip(m, lm)):
            qm = tuple(a - b for a, b in zip(m, lm))
            qc = F.mul(c, inv)
            q[qm] = qc
            for dm, dc in d.terms.items():
                if dm == lm:
                    continue
                tm = tuple(a + b for a, b in zip(qm, dm))
                v = F.neg(F.mul(qc, dc))
                nv = F.add(rem[tm], v) if tm in rem else v
                if F.is_zero(nv):
                    rem.pop(tm, None)
                else:
                    rem[tm] = nv
        else:
            out_rem[m] = c
    qdeg = f.degree - d.degree
    return Form(F, f.nvars, max(qdeg, 0), q), Form(F, f.nvars, f.degree, out_rem)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def hasse_derivative(f: Form, alpha: Sequence[int]) -> Form:
    """D^alpha x^beta = prod_i binom(beta_i, alpha_i) x^(beta - alpha), extended linearly."""
    alpha = tuple(alpha)
    if len(alpha) != f.nvars:
        raise ValueError("multi-index length does not match the number of variables")
    F = f.field
    terms: dict = {}
    for m, c in f.terms.items():
        if any(b < a for a, b in zip(alpha, m)):
            continue
        coeff = 1
        for a, b in zip(alpha, m):
            coeff *= math.comb(b, a)
        v = F.mul(F(coeff), c)
        if F.is_zero(v):
            continue
        terms[tuple(b - a for a, b in zip(alpha, m))] = v
    return Form(F, f.nvars, f.degree - sum(alpha), terms)


def evaluate(f: Form, point) -> object:
    """Value of f at the stored representative of ``point`` (a Point or coordinate sequence)."""
    coords = getattr(point, "coords", point)
    if len(coords) != f.nvars:
        raise ValueError("point dimension does not match the form")
    F = f.field
    acc = F.zero
    powers = [dict() for _ in coords]
    for m, c in f.terms.items():
        v = c
        for i, e in enumerate(m):
            if e:
                pw = powers[i].get(e)
                if pw is None:
                    pw = powers[i][e] = F.pow(coords[i], e)
                v = F.mul(v, pw)
                if F.is_zero(v):
                    break
        acc = F.add(acc, v)
    return acc


def substitute_powers(f: Form, e: int) -> Form:
    """Replace every x_i by x_i^e."""
    if e < 1:
        raise ValueError("exponent must be >= 1")
    return Form(f.field, f.nvars, f.degree * e, {tuple(a * e for a in m): c for m, c in f.terms.items()})


def vanishing_order(f: Form, point, cap: int | None = None) -> int:
    """Order of vanishing of f at a projective point, via Hasse derivatives.

    Dehomogenizes at a coordinate where the point is nonzero and looks for the
    least |alpha| with D^alpha f nonzero there.  Returns ``cap`` (default
    ``deg f + 1``) when every derivative up to that order vanishes.
    """
    coords = list(getattr(point, "coords", point))
    F = f.field
    k = next(i for i, c in enumerate(coords) if not F.is_zero(c))
    inv = F.inv(coords[k])
    aff = [F.mul(c, inv) for c in coords]
    if f.is_zero():
        return cap if cap is not None else f.degree + 1
    limit = f.degree if cap is None else min(cap - 1, f.degree)
    others = [i for i in range(f.nvars) if i != k]
    for s in range(limit + 1):
        for a in monomials(len(others), s) if others else [()]:
            alpha = [0] * f.nvars
            for i, ai in zip(others, a):
                alpha[i] = ai
            # derivative of the dehomogenized polynomial = derivative of f in the
            # other variables followed by x_k = 1
            if not F.is_zero(evaluate(hasse_derivative(f, alpha), aff)):
                return s
    return limit + 1 if cap is None else cap


# ---------------------------------------------------------------------------
# gcd of trivariate forms
# ---------------------------------------------------------------------------
# A bivariate polynomial in (y, z) is stored as a list indexed by the z-degree
# whose entries are univariate polynomials in y (coefficient lists).


def _bi_trim(F, a):
    a = [_utrim(F, c) for c in a]
    while a and not a[-1]:
        a.pop()
    return a


def _bi_content(F, a):
    g: list = []
    for c in a:
        if c:
            g = _ugcd(F, g, c) if g else _umonic_local(F, c)
            if len(g) == 1:
                break
    return g


def _umonic_local(F, c):
    inv = F.inv(c[-1])
    return [F.mul(x, inv) for x in c]


def _bi_divide_scalar_poly(F, a, c):
    out = []
    for x in a:
        q, r = _udivmod(F, x, c)
        assert not r
        out.append(q)
    return out


def _bi_prem(F, a, b):
    """Pseudo-remainder of a by b in K[y][z]."""
    a = _bi_trim(F, a)
    b = _bi_trim(F, b)
    lb = b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        la = a[-1]
        s = len(a) - 1 - db
        new = [_umul(F, lb, x) for x in a]
        for i, y in enumerate(b):
            prod = _umul(F, la, y)
            new[s + i] = _utrim(F, [F.sub(u, v) for u, v in _zip_pad(F, new[s + i], prod)])
        a = _bi_trim(F, new)
    return a


def _zip_pad(F, a, b):
    n = max(len(a), len(b))
    a = list(a) + [F.zero] * (n - len(a))
    b = list(b) + [F.zero] * (n - len(b))
    return zip(a, b)


def _bi_gcd(F, a, b):
    a, b = _bi_trim(F, a), _bi_trim(F, b)
    if not a:
        return b
    if not b:
        return a
    ca, cb = _bi_content(F, a), _bi_content(F, b)
    c = _ugcd(F, ca, cb)
    a = _bi_divide_scalar_poly(F, a, ca)
    b = _bi_divide_scalar_poly(F, b, cb)
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        r = _bi_prem(F, a, b)
        if not r:
            break
        a, b = b, _bi_divide_scalar_poly(F, r, _bi_content(F, r))
    if len(b) == 1:  # z-free: gcd of primitive parts is 1
        g = [[F.one]]
    else:
        g = b
    return [_umul(F, c, x) for x in g]


def _form_to_bi(f: Form):
    """Dehomogenize at x0: x1 -> y, x2 -> z."""
    F = f.field
    out: list = []
    for (_, b, c), v in f.terms.items():
        while len(out) <= c:
            out.append([])
        row = out[c]
        while len(row) <= b:
            row.append(F.zero)
        row[b] = F.add(row[b], v)
    return _bi_trim(F, out)


def _bi_to_form(F, g, extra: Sequence[int]) -> Form:
    terms = {}
    deg = 0
    for c, row in enumerate(g):
        for b, v in enumerate(row):
            if not F.is_zero(v):
                deg = max(deg, b + c)
    for c, row in enumerate(g):
        for b, v in enumerate(row):
            if not F.is_zero(v):
                terms[(deg - b - c + extra[0], b + extra[1], c + extra[2])] = v
    return Form(F, 3, deg + sum(extra), terms)


def common_divisor(basis: Iterable[Form]) -> Form:
    """Monic greatest common divisor of trivariate forms.

    Common powers of each variable are stripped first, the remainders are
    dehomogenized at x0 and combined with a primitive pseudo-remainder
    sequence in K[x1][x2], and the result is rehomogenized.
    """
    basis = [f for f in basis if not f.is_zero()]
    if not basis:
        raise ValueError("common_divisor needs a nonempty basis of nonzero forms")
    F = basis[0].field
    if any(f.nvars != 3 for f in basis):
        raise ValueError("common_divisor is only defined for forms in 3 variables")
    shared = [min(min(m[i] for m in f.terms) for f in basis) for i in range(3)]
    g = None
    for f in basis:
        stripped = Form(F, 3, f.degree - sum(shared), {tuple(a - s for a, s in zip(m, shared)): c for m, c in f.terms.items()})
        bi = _form_to_bi(stripped)
        g = bi if g is None else _bi_gcd(F, g, bi)
        if _bi_is_constant(g):
            break
    result = _bi_to_form(F, g, shared)
    return result.monic()


def _bi_is_constant(g) -> bool:
    return len(g) == 1 and len(g[0]) == 1


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def parse_form(text: str, field: Field, nvars: int) -> Form:
    """Parse an expression in x0..xN (``^`` or ``**`` for powers); ``t`` is the
    generator of an extension field."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    gens = {f"x{i}": Form.variable(field, nvars, i) for i in range(nvars)}
    if getattr(field, "generator", None) is not None:
        gens["t"] = Form.constant(field, nvars, field.generator)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return _as_form(left) + _as_form(right)
            if isinstance(node.op, ast.Sub):
                return _as_form(left) - _as_form(right)
            if isinstance(node.op, ast.Mult):
                return _as_form(left) * _as_form(right)
            if isinstance(node.op, ast.Pow):
                if not isinstance(right, int):
                    raise ValueError("exponents must be integer literals")
                return _as_form(left) ** right
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = _as_form(ev(node.operand))
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name) and node.id in gens:
            return gens[node.id]
        raise ValueError(f"unsupported syntax in form {text!r}")

    def _as_form(v):
        return v if isinstance(v, Form) else Form.constant(field, nvars, field(v))

    return _as_form(ev(tree))
