"""Waldschmidt constants, resurgence bounds and finite containment schedules.

All ratios are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import engine
from .engine import Certificate
from .geometry import FatScheme, Point
from .poly import Form, evaluate

__all__ = [
    "WaldschmidtResult",
    "ResurgenceReport",
    "waldschmidt",
    "resurgence_schedule",
    "prune_schedule",
    "run_schedule",
    "family_lower_bound",
    "resurgence_bounds",
    "fraction_json",
]


def fraction_json(x: Fraction | None):
    """Exact rational as a "numerator/denominator" string."""
    return None if x is None else f"{x.numerator}/{x.denominator}"


class WaldschmidtResult(NamedTuple):
    upper: Fraction
    exact: Fraction | None
    certificate: Certificate


def waldschmidt(scheme: FatScheme, m_list: Sequence[int]) -> WaldschmidtResult:
    """Upper bound min α(I^(m))/m over ``m_list``, exact when some m has α·β = m²·n.

    For a reduced plane scheme of n points, α(I^(m))·β(I^(m)) = m²·n forces
    I^(mt) = (I^(m))^t for all t, so α(I^(mt)) = t·α(I^(m)) and the ratio is
    the limit.  The exactness test is only attempted in that setting.
    """
    if not m_list:
        raise ValueError("m_list must be nonempty")
    start = time.perf_counter()
    n = len(scheme)
    plane_reduced = scheme.nvars == 3 and scheme.is_reduced
    rows = []
    upper = None
    exact = None
    for m in sorted(set(m_list)):
        a = engine.alpha(scheme, m)
        ratio = Fraction(a, m)
        row = {"m": m, "alpha": a}
        if upper is None or ratio < upper:
            upper = ratio
        if plane_reduced:
            b = engine.beta(scheme, m)
            row["beta"] = b
            if a * b == m * m * n and exact is None:
                exact = ratio
        rows.append(row)
    cert = Certificate(
        {"kind": "waldschmidt", "m_list": sorted(set(m_list)), "points": n},
        "holds" if exact is not None else "inconclusive",
        checked_degrees=[r["alpha"] for r in rows],
        details={"rows": rows, "upper": fraction_json(upper), "exact": fraction_json(exact)},
        timings={"seconds": time.perf_counter() - start},
    )
    return WaldschmidtResult(upper, exact, cert)


# ---------------------------------------------------------------------------
# schedules
# ---------------------------------------------------------------------------


def _remainder_gap(r: int, d: int) -> int:
    i = r % d
    return 0 if i == 0 else d - i


def resurgence_schedule(c: int, d: int, a: int, b: int, N: int = 2) -> list:
    """Pairs (r, m) still to check so that I^(c) ⊆ I^d yields I^(m) ⊆ I^r whenever m/r ≥ a/b.

    Given I^(ct) = (I^(c))^t for all t and I^(c) ⊆ I^d, writing r = d·t + i
    with 0 ≤ i < d and j = (d - i) mod d, every m/r ≥ (c/d)(1 + j/r) gives a
    containment; so does every m/r ≥ N.  The pairs left over satisfy
    a/b ≤ m/r < min(N, (c/d)(1 + j/r)), which needs r·(a/b - c/d) < (d-1)·c/d.
    """
    if min(c, d, a, b) < 1 or N < 1:
        raise ValueError("c, d, a, b and N must be positive")
    target = Fraction(a, b)
    base = Fraction(c, d)
    if target <= base:
        raise ValueError(f"need a/b > c/d, got {target} <= {base}")
    if target >= N:
        return []
    eps = target - base
    bound = (d - 1) * base / eps
    out = []
    r = 1
    while r < bound:
        j = _remainder_gap(r, d)
        top = min(Fraction(N), base * (1 + Fraction(j, r)))
        m = math.ceil(target * r)
        while Fraction(m, r) < top:
            out.append((r, m))
            m += 1
        r += 1
    return out


def prune_schedule(pairs) -> list:
    """Keep the least m for each r; I^(m') ⊆ I^(m) for m' > m makes the rest redundant."""
    best: dict = {}
    for r, m in pairs:
        if r not in best or m < best[r]:
            best[r] = m
    return sorted(best.items())


def run_schedule(
    scheme: FatScheme,
    pairs,
    generators: Sequence[Form] | None = None,
    jobs: int = 1,
    degree_cap: int | None = None,
) -> list:
    """Decide I^(m) ⊆ I^r for each (r, m) of the pruned schedule.

    When a containment fails at (r, m), larger m for the same r are checked in
    turn until one holds or the pairs for that r run out.  Certificates come
    back ordered by (r, m).
    """
    gens = list(generators) if generators is not None else engine.ideal_generators(engine.symbolic(scheme, 1))
    by_r: dict = {}
    for r, m in sorted(set(pairs)):
        by_r.setdefault(r, []).append(m)

    def check_r(r):
        certs = []
        for m in by_r[r]:
            cert = engine.contains(engine.symbolic(scheme, m), engine.power(gens, r), degree_cap)
            cert.claim.update({"m": m, "r": r})
            certs.append(cert)
            if cert.holds:
                break
        return certs

    rs = sorted(by_r)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(check_r, rs))
    else:
        results = [check_r(r) for r in rs]
    return [c for group in results for c in group]


def _schedule_complete(pairs, certs) -> bool:
    """Every r of the schedule has a holding containment at some scheduled m."""
    held = {(c.claim.get("r"), c.claim.get("m")) for c in certs if c.holds}
    need: dict = {}
    for r, m in pairs:
        need.setdefault(r, set()).add(m)
    for r, ms in need.items():
        # the least scheduled m must hold, otherwise the range for r is not covered
        if (r, min(ms)) not in held:
            return False
    return True


# ---------------------------------------------------------------------------
# families and reports
# ---------------------------------------------------------------------------


def family_lower_bound(scheme: FatScheme, witness: Form, m: int, q: Point) -> Certificate:
    """Lower bound ρ ≥ m·n/deg(F) from one form F ∈ I^(m) with F(q) ≠ 0.

    Here n is the least degree of a form in I not vanishing at q.  F^k lies in
    I^(mk), while every element of I^r of degree < n·r vanishes at q, so
    I^(mk) ⊄ I^r for r = ⌊k·deg F / n⌋ + 1.  The ratios mk/r tend to
    m·n/deg F as k grows.
    """
    start = time.perf_counter()
    member = engine.membership(witness, engine.symbolic(scheme, m))
    nonzero = not scheme.field.is_zero(evaluate(witness, q))
    n = engine.least_nonvanishing_degree(engine.symbolic(scheme, 1), q)
    limit = Fraction(m * n, witness.degree)
    ok = member and nonzero
    return Certificate(
        {"kind": "noncontainment-family", "m": m, "point": q.to_json(), "witness_degree": witness.degree},
        "holds" if ok else "inconclusive",
        witness=witness,
        witness_degree=witness.degree,
        details={
            "in_symbolic_power": member,
            "nonzero_at_point": nonzero,
            "least_nonvanishing_degree": n,
            "limit": fraction_json(limit),
        },
        timings={"seconds": time.perf_counter() - start},
    )


def _claim_ratio(cert: Certificate) -> Fraction | None:
    claim = cert.claim
    m = claim.get("m", claim.get("left", {}).get("m"))
    r = claim.get("r", claim.get("right", {}).get("r"))
    if m is None or r is None:
        return None
    return Fraction(m, r)


@dataclass
class ResurgenceReport:
    lower: Fraction | None = None
    lower_method: str | None = None
    upper: Fraction | None = None
    upper_method: str | None = None
    family_limit: Fraction | None = None
    value: Fraction | None = None
    evidence: list = dc_field(default_factory=list)

    def __post_init__(self):
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    def to_json(self) -> dict:
        return {
            "lower": fraction_json(self.lower),
            "lower_method": self.lower_method,
            "upper": fraction_json(self.upper),
            "upper_method": self.upper_method,
            "family_limit": fraction_json(self.family_limit),
            "value": fraction_json(self.value),
            "evidence": [c.to_json() for c in self.evidence],
        }


def resurgence_bounds(
    scheme: FatScheme,
    noncontainments: Sequence[Certificate] = (),
    schedule_params: tuple | None = None,
    schedule_certificates: Sequence[Certificate] = (),
    waldschmidt_m: Sequence[int] | None = None,
    family: Certificate | None = None,
) -> ResurgenceReport:
    """Combine certified facts into exact bounds on the resurgence.

    lower: the largest m/r among failed containments.
    upper: the smaller of reg(I)/γ(I), when γ is known exactly, and a/b from
    ``schedule_params`` = (c, d, a, b[, N]) once ``schedule_certificates``
    cover every scheduled r.
    A holding ``family`` certificate contributes its limit; when that limit
    meets the upper bound the value is recorded.
    """
    evidence = []
    lower = None
    for cert in noncontainments:
        ratio = _claim_ratio(cert)
        if cert.fails and ratio is not None:
            evidence.append(cert)
            if lower is None or ratio > lower:
                lower = ratio

    upper, method = None, None
    if waldschmidt_m is None:
        waldschmidt_m = [1, 2, 3] if scheme.nvars == 3 else [1]
    if scheme.nvars == 3:
        w = waldschmidt(scheme, waldschmidt_m)
        evidence.append(w.certificate)
        if w.exact is not None:
            reg = engine.regularity(scheme, 1)
            upper, method = Fraction(reg) / w.exact, f"reg/gamma = {reg}/{w.exact}"

    if schedule_params is not None:
        c, d, a, b, *rest = schedule_params
        pairs = prune_schedule(resurgence_schedule(c, d, a, b, *rest))
        certs = list(schedule_certificates)
        evidence.extend(certs)
        if _schedule_complete(pairs, certs):
            bound = Fraction(a, b)
            if upper is None or bound < upper:
                upper, method = bound, f"schedule ({c},{d}) -> {a}/{b}"

    limit, value = None, None
    if family is not None and family.holds:
        evidence.append(family)
        limit = Fraction(family.details["limit"])
        if upper is not None and limit == upper:
            value = limit
    if lower is not None and upper is not None and lower == upper:
        value = lower
    return ResurgenceReport(
        lower=lower,
        lower_method="max m/r over failed containments" if lower is not None else None,
        upper=upper,
        upper_method=method,
        family_limit=limit,
        value=value,
        evidence=evidence,
    )
