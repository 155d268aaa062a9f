from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fatpoints import asymptotics as A
from fatpoints import engine as E
from fatpoints.geometry import FatScheme, Point, all_but_one, line_product_avoiding
from fatpoints.scalar import prime_field

F3 = prime_field(3)
Q3 = Point(F3, [1, 0, 0])


def _brute_schedule(c, d, a, b, N):
    """Pairs (r, m) with a/b <= m/r < min(N, (c/d)(1 + j/r)), scanning r far past the bound."""
    out = []
    for r in range(1, 400):
        j = (-r) % d
        top = min(Fraction(N), Fraction(c, d) * (1 + Fraction(j, r)))
        for m in range(1, 3 * r + 1):
            if Fraction(a, b) <= Fraction(m, r) < top:
                out.append((r, m))
    return out


@pytest.mark.parametrize("params", [(6, 4, 8, 5, 2), (3, 2, 5, 3, 2), (6, 4, 7, 4, 2), (4, 3, 3, 2, 2), (5, 3, 7, 4, 3)])
def test_schedule_matches_brute_force(params):
    c, d, a, b, N = params
    assert A.resurgence_schedule(c, d, a, b, N) == _brute_schedule(c, d, a, b, N)


def test_fermat_schedule_contents():
    pairs = A.resurgence_schedule(6, 4, 8, 5)
    pruned = A.prune_schedule(pairs)
    for p in [(3, 5), (5, 8), (6, 10), (9, 15), (10, 16), (33, 53)]:
        assert p in pairs
    assert [p for p in pruned if p[0] <= 10] == [(3, 5), (5, 8), (6, 10), (9, 15), (10, 16)]
    assert max(r for r, _ in pairs) == 33
    # pruning keeps the least m for each r and nothing else
    assert len(pruned) == len({r for r, _ in pairs})


@given(st.integers(1, 8), st.integers(1, 5), st.integers(1, 12), st.integers(1, 8))
def test_schedule_pairs_respect_bounds(c, d, a, b):
    if Fraction(a, b) <= Fraction(c, d):
        with pytest.raises(ValueError):
            A.resurgence_schedule(c, d, a, b)
        return
    for r, m in A.resurgence_schedule(c, d, a, b):
        j = (-r) % d
        assert Fraction(a, b) <= Fraction(m, r) < min(2, Fraction(c, d) * (1 + Fraction(j, r)))


def test_schedule_rejects_nonpositive():
    with pytest.raises(ValueError):
        A.resurgence_schedule(0, 1, 2, 1)


def test_target_at_least_N_needs_nothing():
    assert A.resurgence_schedule(6, 4, 2, 1) == []


def test_waldschmidt_bch_and_single_point():
    S = all_but_one(2, F3, Q3)
    w = A.waldschmidt(S, [1, 2, 3])
    assert (w.upper, w.exact) == (3, 3)
    single = FatScheme(F3, 3, [Q3])
    assert A.waldschmidt(single, [1, 2, 3])[:2] == (1, 1)
    with pytest.raises(ValueError):
        A.waldschmidt(S, [])


def test_family_lower_bound_bch():
    S = all_but_one(2, F3, Q3)
    cert = A.family_lower_bound(S, line_product_avoiding(F3, Q3), 3, Q3)
    assert cert.holds
    assert cert.details["limit"] == "5/3" and cert.details["least_nonvanishing_degree"] == 5


def test_family_with_bad_witness_is_inconclusive():
    S = all_but_one(2, F3, Q3)
    cert = A.family_lower_bound(S, line_product_avoiding(F3, Q3), 4, Q3)
    assert cert.verdict == "inconclusive"


def test_resurgence_bounds_bch():
    S = all_but_one(2, F3, Q3)
    gens = E.ideal_generators(E.symbolic(S, 1))
    c = E.contains(E.symbolic(S, 3), E.power(gens, 2))
    fam = A.family_lower_bound(S, line_product_avoiding(F3, Q3), 3, Q3)
    rep = A.resurgence_bounds(S, [c], family=fam)
    assert rep.lower == Fraction(3, 2) and rep.upper == Fraction(5, 3)
    assert rep.family_limit == Fraction(5, 3) and rep.value == Fraction(5, 3)
    js = rep.to_json()
    assert js["lower"] == "3/2" and js["upper"] == "5/3"
    assert js["upper_method"].startswith("reg/gamma")


def test_incomplete_schedule_gives_no_upper_bound():
    S = all_but_one(2, F3, Q3)
    rep = A.resurgence_bounds(S, schedule_params=(6, 4, 8, 5), schedule_certificates=[], waldschmidt_m=[1])
    assert rep.upper is None


def test_report_rejects_crossed_bounds():
    with pytest.raises(ValueError):
        A.ResurgenceReport(lower=Fraction(2), upper=Fraction(1))


def test_fraction_json():
    assert A.fraction_json(Fraction(10, 4)) == "5/2"
    assert A.fraction_json(Fraction(3)) == "3/1"
    assert A.fraction_json(None) is None
