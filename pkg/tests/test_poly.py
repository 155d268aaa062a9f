import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fatpoints.geometry import Point
from fatpoints.poly import (
    Form,
    common_divisor,
    evaluate,
    hasse_derivative,
    monomial_index,
    monomials,
    multi_indices,
    num_monomials,
    parse_form,
    substitute_powers,
    vanishing_order,
)
from fatpoints.scalar import cyclotomic_field, finite_field, prime_field, rational_field

F7 = prime_field(7)
Q = rational_field()
X = sympy.symbols("x0:4")


def random_form(F, nvars, degree, rng, density=0.6):
    terms = {m: F.random_element(rng) for m in monomials(nvars, degree) if rng.random() < density}
    return Form(F, nvars, degree, terms)


def to_sympy(f: Form):
    expr = sympy.Integer(0)
    for m, c in f.terms.items():
        c = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
        term = c
        for v, e in zip(X, m):
            term *= v**e
        expr += term
    return expr


def test_monomial_enumeration():
    for n in range(1, 5):
        for d in range(6):
            mons = monomials(n, d)
            assert len(mons) == num_monomials(n, d) == math.comb(n + d - 1, d)
            assert list(mons) == oracles.monomials(n, d)
            assert all(monomial_index(n, d)[m] == i for i, m in enumerate(mons))


def test_multi_indices_below():
    got = set(multi_indices(3, 3))
    want = {a for a in itertools.product(range(3), repeat=3) if sum(a) < 3}
    assert got == want


def test_vector_roundtrip():
    rng = np.random.default_rng(1)
    f = random_form(F7, 3, 5, rng)
    assert Form.from_vector(F7, 3, 5, f.to_vector()) == f
    assert Form.from_vector(F7, 3, 5, f.to_vector(coded=True), coded=True) == f


def test_arithmetic_matches_sympy():
    rng = np.random.default_rng(2)
    for _ in range(20):
        f, g = random_form(Q, 3, 3, rng), random_form(Q, 3, 2, rng)
        h = random_form(Q, 3, 3, rng)
        assert sympy.expand(to_sympy(f * g) - to_sympy(f) * to_sympy(g)) == 0
        assert sympy.expand(to_sympy(f + h) - to_sympy(f) - to_sympy(h)) == 0
        assert sympy.expand(to_sympy(f**3) - to_sympy(f) ** 3) == 0


def test_mismatched_degrees_do_not_add():
    with pytest.raises(ValueError):
        Form.variable(F7, 3, 0) + Form.variable(F7, 3, 0) ** 2


def _hasse_split(gamma):
    return itertools.product(*[range(g + 1) for g in gamma])


@pytest.mark.property
@settings(max_examples=100)
@given(seed=st.integers(0, 2**32 - 1), field=st.sampled_from(["F7", "F9", "Q"]))
def test_hasse_product_rule(seed, field):
    F = {"F7": F7, "F9": finite_field(3, 2), "Q": Q}[field]
    rng = np.random.default_rng(seed)
    f = random_form(F, 3, int(rng.integers(0, 5)), rng)
    g = random_form(F, 3, int(rng.integers(0, 5)), rng)
    gamma = tuple(int(x) for x in rng.integers(0, 3, size=3))
    lhs = hasse_derivative(f * g, gamma)
    acc = Form.zero(F, 3, lhs.degree)
    for a in _hasse_split(gamma):
        b = tuple(gi - ai for gi, ai in zip(gamma, a))
        if sum(a) > f.degree or sum(b) > g.degree:
            continue
        acc = acc + hasse_derivative(f, a) * hasse_derivative(g, b)
    assert lhs == acc


def test_hasse_matches_scaled_derivative_in_char_zero():
    rng = np.random.default_rng(5)
    for _ in range(10):
        f = random_form(Q, 3, 4, rng)
        alpha = tuple(int(x) for x in rng.integers(0, 3, size=3))
        want = sympy.diff(to_sympy(f), *[(v, a) for v, a in zip(X, alpha) if a]) if any(alpha) else to_sympy(f)
        want = want / math.prod(math.factorial(a) for a in alpha)
        assert sympy.expand(to_sympy(hasse_derivative(f, alpha)) - want) == 0


def test_hasse_nonzero_where_ordinary_derivative_vanishes():
    # d^p/dx^p kills x^p in characteristic p; the Hasse derivative does not
    x = Form.variable(F7, 2, 0)
    assert hasse_derivative(x**7, (7, 0)) == Form.constant(F7, 2)


def _oracle_order(f: Form, point, p):
    """Least m with some Taylor coefficient of degree m nonzero, via sympy expansion."""
    P = oracles.normalize_point(point, p)
    n = len(P)
    k = P.index(1)
    ys = sympy.symbols(f"y0:{n}")
    subs = {X[i]: (1 if i == k else sympy.Integer(int(P[i])) + ys[i]) for i in range(n)}
    expr = sympy.expand(to_sympy(f).subs(subs))
    others = [ys[i] for i in range(n) if i != k]
    poly = sympy.Poly(expr, *others)
    orders = [sum(m) for m, c in poly.terms() if (int(c) % p if p else c) != 0]
    return min(orders) if orders else None


def test_vanishing_order_matches_taylor_expansion():
    rng = np.random.default_rng(8)
    pts = [(1, 2, 3), (0, 1, 4), (0, 0, 1), (1, 1, 1)]
    for _ in range(25):
        P = pts[int(rng.integers(0, len(pts)))]
        base = [Form.linear(F7, [F7(int(c)) for c in v]) for v in ([P[1], -P[0], 0] if P[:2] != (0, 0) else [1, 0, 0], [P[2], 0, -P[0]] if P[0] else [0, P[2], -P[1]])]
        # build forms through products of lines through P and random junk
        e1, e2 = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        junk = random_form(F7, 3, int(rng.integers(0, 3)), rng)
        if junk.is_zero():
            continue
        f = base[0] ** e1 * base[1] ** e2 * junk if e1 + e2 else junk
        want = _oracle_order(f, P, 7)
        got = vanishing_order(f, Point(F7, list(P)))
        assert want is not None and got == want


def test_vanishing_order_cap_and_zero():
    z = Form.zero(F7, 3, 4)
    assert vanishing_order(z, Point(F7, [1, 0, 0])) == 5
    assert vanishing_order(z, Point(F7, [1, 0, 0]), cap=2) == 2
    f = Form.variable(F7, 3, 1) ** 3
    assert vanishing_order(f, Point(F7, [1, 0, 0]), cap=2) == 2


def test_evaluate_and_substitute_powers():
    f = parse_form("x0^2 + 3*x1*x2", F7, 3)
    assert evaluate(f, [1, 2, 3]) == (1 + 18) % 7
    g = substitute_powers(f, 3)
    assert g.degree == 6 and evaluate(g, [1, 2, 3]) == (1 + 3 * 8 * 27) % 7


def test_parse_form_extension_generator_and_errors():
    K = cyclotomic_field(3)
    f = parse_form("x0 - t*x1", K, 2)
    assert f.terms[(0, 1)] == K.neg(K.generator)
    with pytest.raises(ValueError):
        parse_form("x0 ** x1", F7, 2)
    with pytest.raises(ValueError):
        parse_form("open('x')", F7, 2)


def test_exact_divide():
    rng = np.random.default_rng(11)
    f, g = random_form(F7, 3, 3, rng), random_form(F7, 3, 2, rng)
    assert (f * g).exact_divide(g) == f
    with pytest.raises(ValueError):
        (f * g + Form.variable(F7, 3, 0) ** 5).exact_divide(Form.variable(F7, 3, 1) ** 2 + Form.variable(F7, 3, 2) ** 2)


@pytest.mark.parametrize("F,p", [(Q, 0), (F7, 7)])
def test_common_divisor_matches_sympy(F, p):
    rng = np.random.default_rng(13)
    for _ in range(8):
        g = random_form(F, 3, int(rng.integers(1, 3)), rng)
        if g.is_zero():
            continue
        fs = [g * random_form(F, 3, int(rng.integers(0, 3)), rng) for _ in range(3)]
        fs = [f for f in fs if not f.is_zero()]
        if not fs:
            continue
        got = common_divisor(fs)
        kw = {"modulus": p} if p else {"domain": "QQ"}
        want = sympy.Poly(to_sympy(fs[0]), *X[:3], **kw)
        for f in fs[1:]:
            want = sympy.gcd(want, sympy.Poly(to_sympy(f), *X[:3], **kw))
        assert got.degree == want.total_degree()
        # the gcd divides every input and has the sympy gcd's degree
        for f in fs:
            f.exact_divide(got)


def test_proportional_and_monic():
    f = parse_form("3*x0*x1 + x2^2", F7, 3)
    assert f.is_proportional(f.scale(F7(5)))
    assert f.monic().leading_coefficient() == F7.one
    assert not f.is_proportional(parse_form("x0*x1", F7, 3))


def test_json_roundtrip():
    K = cyclotomic_field(3)
    f = parse_form("x0^2 - t*x1*x2 + 5*x2^2", K, 3)
    assert Form.from_json(K, f.to_json()) == f
