"""Points, fat point schemes, and the special configurations and forms."""

from __future__ import annotations

import itertools
import math
from functools import reduce
from typing import Iterable, Sequence

from .poly import Form, monomials, substitute_powers
from .scalar import Field, FieldError, prime_field, root_of_unity

__all__ = [
    "Point",
    "FatScheme",
    "enumerate_projective_points",
    "fermat_config",
    "all_but_one",
    "coordinate_point",
    "q_form",
    "g_form",
    "f_form",
    "line_product_avoiding",
    "fermat_witness",
    "fermat_generators",
    "bch_generators",
    "ehs_monomials",
    "affine_chart_points",
    "hyperplane_points",
]


class Point:
    """A point of projective space over ``field``.

    ``coords`` is the stored representative; by default it is normalized so
    the first nonzero coordinate is 1.  Equality and hashing always use the
    normalized coordinates, so different representatives of the same point
    compare equal.
    """

    __slots__ = ("field", "coords", "key", "chart")

    def __init__(self, field: Field, coords: Sequence, normalize: bool = True):
        cs = tuple(field(c) if isinstance(c, int) else field.coerce(c) for c in coords)
        nz = [i for i, c in enumerate(cs) if not field.is_zero(c)]
        if not nz:
            raise ValueError("the zero vector is not a projective point")
        k = nz[0]
        inv = field.inv(cs[k])
        self.field = field
        self.chart = k
        self.key = tuple(field.mul(inv, c) for c in cs)
        self.coords = self.key if normalize else cs

    @property
    def nvars(self) -> int:
        return len(self.key)

    def scaled(self, lam) -> "Point":
        """Same point, stored with the representative ``lam * coords``."""
        F = self.field
        return Point(F, [F.mul(lam, c) for c in self.coords], normalize=False)

    def apply(self, automorphism) -> "Point":
        return Point(self.field, [automorphism(c) for c in self.key])

    def __eq__(self, other):
        return isinstance(other, Point) and self.field == other.field and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def to_json(self):
        return [self.field.to_json(c) for c in self.coords]

    @classmethod
    def from_json(cls, field: Field, obj, path: str = "point") -> "Point":
        if not isinstance(obj, list) or not obj:
            raise ValueError(f"{path}: expected a nonempty coordinate list")
        try:
            return cls(field, [field.from_json(c) for c in obj])
        except (ValueError, FieldError, TypeError) as exc:
            raise ValueError(f"{path}: {exc}") from exc

    def __repr__(self):
        F = self.field

        def show(c):
            j = F.to_json(c)
            return str(j) if not isinstance(j, list) else "(" + ",".join(map(str, j)) + ")"

        return "[" + ":".join(show(c) for c in self.coords) + "]"


def coordinate_point(field: Field, nvars: int, i: int) -> Point:
    e = [0] * nvars
    e[i] = 1
    return Point(field, e)


class FatScheme:
    """Distinct points of P^N with multiplicities."""

    def __init__(self, field: Field, nvars: int, points: Iterable):
        pts = []
        for item in points:
            if isinstance(item, Point):
                P, mult = item, 1
            else:
                P, mult = item
            if P.field != field:
                raise ValueError("point lies over a different field")
            if P.nvars != nvars:
                raise ValueError(f"point {P!r} has {P.nvars} coordinates, expected {nvars}")
            if int(mult) < 1:
                raise ValueError("multiplicities must be >= 1")
            pts.append((P, int(mult)))
        if len({P for P, _ in pts}) != len(pts):
            raise ValueError("points must be pairwise distinct")
        self.field = field
        self.nvars = nvars
        self.points = tuple(pts)
        self._stable = None

    @property
    def dim(self) -> int:
        return self.nvars - 1

    def __len__(self):
        return len(self.points)

    @property
    def is_reduced(self) -> bool:
        return all(m == 1 for _, m in self.points)

    def fat_degree(self, m: int = 1) -> int:
        N = self.dim
        return sum(math.comb(m * mult + N - 1, N) for _, mult in self.points)

    def orders(self, m: int = 1) -> list:
        return [m * mult for _, mult in self.points]

    def galois_stable(self) -> bool:
        """True when the field has known automorphisms and they permute the scheme."""
        if self._stable is None:
            autos = self.field.galois_automorphisms()
            if autos is None:
                self._stable = False
            else:
                table = {P: mult for P, mult in self.points}
                self._stable = all(table.get(P.apply(s)) == mult for s in autos for P, mult in self.points)
        return self._stable

    def with_points(self, points: Iterable) -> "FatScheme":
        return FatScheme(self.field, self.nvars, points)

    def to_json(self):
        return {
            "nvars": self.nvars,
            "points": [{"coords": P.to_json(), "mult": m} for P, m in self.points],
        }

    @classmethod
    def from_json(cls, field: Field, obj, path: str = "points") -> "FatScheme":
        if not isinstance(obj, dict) or "points" not in obj:
            raise ValueError(f"{path}: expected an object with 'points'")
        items = []
        for i, entry in enumerate(obj["points"]):
            where = f"{path}.points[{i}]"
            if isinstance(entry, dict):
                P = Point.from_json(field, entry.get("coords"), where + ".coords")
                mult = entry.get("mult", 1)
            else:
                P, mult = Point.from_json(field, entry, where), 1
            if not isinstance(mult, int) or mult < 1:
                raise ValueError(f"{where}.mult: expected a positive integer")
            items.append((P, mult))
        nvars = obj.get("nvars", items[0][0].nvars if items else None)
        if nvars is None:
            raise ValueError(f"{path}: empty scheme needs 'nvars'")
        return cls(field, nvars, items)

    def __repr__(self):
        return f"FatScheme({len(self.points)} points in P^{self.dim} over {self.field!r})"


# ---------------------------------------------------------------------------
# configurations
# ---------------------------------------------------------------------------


def enumerate_projective_points(N: int, field: Field) -> list:
    """All points of P^N over a finite field.

    Ordered by the position of the first nonzero coordinate, then by element
    codes of the remaining coordinates.
    """
    if not field.is_finite:
        raise FieldError("cannot enumerate points over an infinite field")
    q = field.cardinality
    elems = [field.decode(c) for c in range(q)]
    out = []
    for k in range(N + 1):
        for tail in itertools.product(range(q), repeat=N - k):
            coords = [field.zero] * k + [field.one] + [elems[c] for c in tail]
            out.append(Point(field, coords))
    return out


def fermat_config(j: int, field: Field) -> FatScheme:
    """The j^2 points [1:a:b] with a^j = b^j = 1 plus the three coordinate points."""
    if j < 3:
        raise ValueError("j must be >= 3")
    if field.characteristic == 2:
        raise FieldError("characteristic 2 is excluded")
    z = root_of_unity(field, j)
    roots = [field.pow(z, e) for e in range(j)]
    pts = [Point(field, [field.one, a, b]) for a in roots for b in roots]
    pts += [coordinate_point(field, 3, i) for i in range(3)]
    return FatScheme(field, 3, pts)


def all_but_one(N: int, field: Field, excluded: Point) -> FatScheme:
    """Every point of P^N over the finite field except ``excluded``."""
    pts = enumerate_projective_points(N, field)
    if excluded not in pts:
        raise ValueError(f"{excluded!r} is not a point of P^{N} over {field!r}")
    return FatScheme(field, N + 1, [P for P in pts if P != excluded])


def affine_chart_points(N: int, field: Field, excluded: Point | None = None) -> FatScheme:
    """Points with x0 != 0, optionally without one of them."""
    pts = [P for P in enumerate_projective_points(N, field) if P.chart == 0 and P != excluded]
    return FatScheme(field, N + 1, pts)


def hyperplane_points(N: int, field: Field) -> FatScheme:
    """All points of P^(N-1), thought of as the hyperplane x0 = 0 in P^N."""
    return FatScheme(field, N, enumerate_projective_points(N - 1, field))


# ---------------------------------------------------------------------------
# special forms
# ---------------------------------------------------------------------------


def _var(field, nvars, i):
    return Form.variable(field, nvars, i)


def _check_char(p: int, field: Field):
    if field.characteristic != p:
        raise FieldError(f"{field!r} does not have characteristic {p}")


def q_form(p: int, N: int, field: Field) -> Form:
    """Degree p-1 part of ((x_0+1)...(x_N+1))^(p-1): sum over |b| = p-1 of prod binom(p-1, b_i) x^b."""
    _check_char(p, field)
    if N > p:
        raise ValueError(f"need N <= p, got N={N}, p={p}")
    terms = {}
    for b in monomials(N + 1, p - 1):
        c = math.prod(math.comb(p - 1, e) for e in b)
        terms[b] = field.from_int(c)
    return Form(field, N + 1, p - 1, terms)


def g_form(p: int, field: Field) -> Form:
    """The degree p^2 form in N+1 = (p+3)/2 variables that avoids [1:0:...:0]."""
    _check_char(p, field)
    if p % 2 == 0:
        raise FieldError("p must be odd")
    N = (p + 1) // 2
    n = N + 1
    x = [_var(field, n, i) for i in range(n)]
    e = p - 1
    middle = x[0] ** e * field.from_int(N)
    for i in range(1, N):
        middle = middle + x[i] ** e
    Q = substitute_powers(q_form(p, N, field), e)
    return x[0] * (x[0] ** e - x[N] ** e) * middle * Q


def f_form(p: int, N: int, field: Field) -> Form:
    """x0^(N-1) * prod_i (x0^(p-1) - x_i^(p-1)) * Q(x^(p-1)), of degree p(p+N-2)."""
    _check_char(p, field)
    if N > p:
        raise ValueError(f"need N <= p, got N={N}, p={p}")
    n = N + 1
    x = [_var(field, n, i) for i in range(n)]
    e = p - 1
    out = x[0] ** (N - 1) if N > 1 else Form.constant(field, n)
    for i in range(1, n):
        out = out * (x[0] ** e - x[i] ** e)
    return out * substitute_powers(q_form(p, N, field), e)


def line_product_avoiding(field: Field, excluded: Point, N: int = 2) -> Form:
    """Product of the lines of the plane over the finite field that miss ``excluded``."""
    if N != 2:
        raise ValueError("only the plane case is supported")
    F = field
    lines = []
    for L in enumerate_projective_points(2, F):
        pairing = reduce(F.add, (F.mul(a, b) for a, b in zip(L.key, excluded.key)), F.zero)
        if not F.is_zero(pairing):
            lines.append(Form.linear(F, list(L.key)))
    return reduce(lambda a, b: a * b, lines)


def fermat_witness(j: int, field: Field) -> Form:
    """(x1^j - x2^j)(x0^j - x2^j)(x0^j - x1^j)."""
    x = [_var(field, 3, i) for i in range(3)]
    return (x[1] ** j - x[2] ** j) * (x[0] ** j - x[2] ** j) * (x[0] ** j - x[1] ** j)


def fermat_generators(j: int, field: Field) -> list:
    """x0(x1^j - x2^j), x1(x0^j - x2^j), x2(x0^j - x1^j)."""
    x = [_var(field, 3, i) for i in range(3)]
    return [
        x[0] * (x[1] ** j - x[2] ** j),
        x[1] * (x[0] ** j - x[2] ** j),
        x[2] * (x[0] ** j - x[1] ** j),
    ]


def bch_generators(field: Field | None = None) -> list:
    """Three quartics and a quintic cutting out the F_3-points of the plane other than [1:0:0]."""
    F = field or prime_field(3)
    x = [_var(F, 3, i) for i in range(3)]

    def sq(i):
        return x[i] ** 2

    return [
        x[0] * x[1] * (sq(0) - sq(1)),
        x[0] * x[2] * (sq(0) - sq(2)),
        x[1] * x[2] * (sq(1) - sq(2)),
        x[0] * (sq(0) - sq(1)) * (sq(0) - sq(2)),
    ]


def ehs_monomials() -> list:
    """Exponent vectors of x0^2 x1, x1^2 x2, x2^2 x0, x0 x1 x2."""
    return [(2, 1, 0), (0, 2, 1), (1, 0, 2), (1, 1, 1)]
