"""Exact scalar fields: Q, prime fields F_p and quotient extensions F[t]/(m(t)).

Elements are plain immutable Python values and all arithmetic goes through a
field handle:

* rational field: :class:`fractions.Fraction`
* prime field: ``int`` residue in ``[0, p)``
* extension field: ``tuple`` of base elements of length ``deg m`` (coefficients
  of ``1, t, ..., t^(d-1)``)

Finite fields additionally expose an integer *code* for every element, used by
the array kernels.  Codes ``0..p-1`` are always the prime subfield, so an
integer ``n`` embeds as code ``n % p`` in every finite field.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterator, Sequence

import numpy as np

__all__ = [
    "FieldSpec",
    "Field",
    "RationalField",
    "PrimeField",
    "ExtensionField",
    "FieldError",
    "field_make",
    "rational_field",
    "prime_field",
    "finite_field",
    "cyclotomic_field",
    "cyclotomic_polynomial",
    "find_irreducible",
    "root_of_unity",
    "multiplicative_order",
    "is_prime",
]


class FieldError(ValueError):
    """Raised for invalid field data (non-prime modulus, reducible modulus, ...)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# FieldSpec: the serializable description of a field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    kind: str  # "rational" | "prime" | "extension"
    p: int | None = None
    base: "FieldSpec | None" = None
    modulus: tuple | None = None  # serialized base scalars, low degree first

    def to_json(self) -> dict:
        if self.kind == "rational":
            return {"kind": "rational"}
        if self.kind == "prime":
            return {"kind": "prime", "p": self.p}
        return {"kind": "extension", "base": self.base.to_json(), "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: Any, path: str = "field") -> "FieldSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise FieldError(f"{path}: expected an object with a 'kind' key")
        kind = obj["kind"]
        if kind == "rational":
            return cls("rational")
        if kind == "prime":
            p = obj.get("p")
            if not isinstance(p, int) or isinstance(p, bool):
                raise FieldError(f"{path}.p: expected an integer")
            return cls("prime", p=p)
        if kind == "extension":
            if "base" not in obj or "modulus" not in obj:
                raise FieldError(f"{path}: extension needs 'base' and 'modulus'")
            base = cls.from_json(obj["base"], path + ".base")
            mod = obj["modulus"]
            if not isinstance(mod, list) or len(mod) < 2:
                raise FieldError(f"{path}.modulus: expected a coefficient list of length >= 2")
            return cls("extension", base=base, modulus=_freeze(mod))
        raise FieldError(f"{path}.kind: unknown field kind {kind!r}")


def _freeze(obj):
    if isinstance(obj, list):
        return tuple(_freeze(x) for x in obj)
    return obj


# ---------------------------------------------------------------------------
# univariate polynomials over a field (coefficient lists, low degree first)
# ---------------------------------------------------------------------------


def _utrim(F: "Field", a: list) -> list:
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return a


def _uadd(F, a, b):
    n = max(len(a), len(b))
    out = [F.add(a[i] if i < len(a) else F.zero, b[i] if i < len(b) else F.zero) for i in range(n)]
    return _utrim(F, out)


def _usub(F, a, b):
    return _uadd(F, a, [F.neg(x) for x in b])


def _umul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _utrim(F, out)


def _udivmod(F, a, b):
    b = _utrim(F, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = _utrim(F, a)
    q = [F.zero] * max(len(a) - len(b) + 1, 0)
    inv_lc = F.inv(b[-1])
    while len(a) >= len(b):
        c = F.mul(a[-1], inv_lc)
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = F.sub(a[s + i], F.mul(c, y))
        a = _utrim(F, a[:-1]) if F.is_zero(a[-1]) else _utrim(F, a)
    return _utrim(F, q), a


def _umonic(F, a):
    a = _utrim(F, a)
    if not a:
        return a
    inv = F.inv(a[-1])
    return [F.mul(x, inv) for x in a]


def _ugcd(F, a, b):
    a, b = _utrim(F, a), _utrim(F, b)
    while b:
        a, b = b, _udivmod(F, a, b)[1]
    return _umonic(F, a)


def _upowmod(F, a, e, m):
    result = [F.one]
    base = _udivmod(F, a, m)[1]
    while e:
        if e & 1:
            result = _udivmod(F, _umul(F, result, base), m)[1]
        base = _udivmod(F, _umul(F, base, base), m)[1]
        e >>= 1
    return result


def _uxgcd_inverse(F, a, m):
    """Inverse of a modulo m (m irreducible) by the extended Euclidean algorithm."""
    r0, r1 = _utrim(F, m), _utrim(F, a)
    s0, s1 = [], [F.one]
    while r1:
        q, r = _udivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _usub(F, s0, _umul(F, q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    c = F.inv(r0[0])
    return [F.mul(c, x) for x in s0]


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------


class Field:
    """Common interface of the exact scalar domains."""

    kind: str
    characteristic: int
    cardinality: int | None
    zero: Any
    one: Any

    @property
    def is_finite(self) -> bool:
        return self.cardinality is not None

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def from_int(self, n: int):
        raise NotImplementedError

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction, or an element) into the field."""
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.from_int(x)
        return self.coerce(x)

    def coerce(self, x):
        raise NotImplementedError

    # finite fields ---------------------------------------------------------
    def code(self, a) -> int:
        raise FieldError(f"{self} is not finite")

    def decode(self, c: int):
        raise FieldError(f"{self} is not finite")

    def elements(self) -> Iterator:
        if not self.is_finite:
            raise FieldError(f"{self} is infinite")
        return (self.decode(c) for c in range(self.cardinality))

    # serialization ---------------------------------------------------------
    def to_json(self, a):
        raise NotImplementedError

    def from_json(self, obj):
        raise NotImplementedError

    def random_element(self, rng):
        raise NotImplementedError

    def galois_automorphisms(self) -> list | None:
        """Automorphisms over Q (as callables), or None when unknown/not applicable."""
        return None

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)


class RationalField(Field):
    kind = "rational"
    characteristic = 0
    cardinality = None
    zero = Fraction(0)
    one = Fraction(1)

    @property
    def spec(self) -> FieldSpec:
        return FieldSpec("rational")

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / b

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x)
        raise FieldError(f"cannot coerce {x!r} into Q")

    def to_json(self, a):
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def from_json(self, obj):
        if isinstance(obj, bool):
            raise FieldError(f"bad rational {obj!r}")
        if isinstance(obj, int):
            return Fraction(obj)
        if isinstance(obj, str):
            try:
                return Fraction(obj)
            except ValueError as exc:
                raise FieldError(f"bad rational {obj!r}") from exc
        raise FieldError(f"bad rational {obj!r}")

    def random_element(self, rng):
        return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    kind = "prime"
    zero = 0
    one = 1

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.cardinality = p

    @property
    def spec(self) -> FieldSpec:
        return FieldSpec("prime", p=self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return -a % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        return pow(a, e, self.p)

    def from_int(self, n):
        return n % self.p

    def coerce(self, x):
        if isinstance(x, Fraction):
            return self.div(self.from_int(x.numerator), self.from_int(x.denominator))
        raise FieldError(f"cannot coerce {x!r} into F_{self.p}")

    def code(self, a):
        return a

    def decode(self, c):
        return c

    def to_json(self, a):
        return a

    def from_json(self, obj):
        if not isinstance(obj, int) or isinstance(obj, bool):
            raise FieldError(f"bad F_{self.p} element {obj!r}")
        return obj % self.p

    def random_element(self, rng):
        return int(rng.integers(0, self.p))

    def __repr__(self):
        return f"GF({self.p})"


class ExtensionField(Field):
    """The quotient ``base[t]/(modulus)``; ``modulus`` monic and irreducible."""

    kind = "extension"

    def __init__(self, base: Field, modulus: Sequence, check: bool = True):
        mod = [base(c) if isinstance(c, int) else c for c in modulus]
        mod = _utrim(base, mod)
        if len(mod) < 2:
            raise FieldError("extension modulus must have degree >= 1")
        if mod[-1] != base.one:
            raise FieldError("extension modulus must be monic")
        self.base = base
        self.modulus = tuple(mod)
        self.degree = len(mod) - 1
        self.characteristic = base.characteristic
        self.cardinality = base.cardinality**self.degree if base.is_finite else None
        self.zero = tuple([base.zero] * self.degree)
        self.one = tuple([base.one] + [base.zero] * (self.degree - 1))
        self.cyclotomic_order = None
        if base.kind == "rational":
            self.cyclotomic_order = _detect_cyclotomic(self.modulus)
        if check and not _is_irreducible(base, list(self.modulus), self.cyclotomic_order):
            raise FieldError(f"modulus {list(self.modulus)} is reducible over {base}")

    @property
    def spec(self) -> FieldSpec:
        return FieldSpec("extension", base=self.base.spec, modulus=tuple(_freeze(self.base.to_json(c)) for c in self.modulus))

    @property
    def generator(self):
        """The class of t."""
        if self.degree == 1:
            return (self.base.neg(self.modulus[0]),)
        return tuple([self.base.zero, self.base.one] + [self.base.zero] * (self.degree - 2))

    def _pad(self, a: list):
        a = list(a) + [self.base.zero] * (self.degree - len(a))
        return tuple(a)

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        B = self.base
        d = self.degree
        prod = [B.zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not B.is_zero(y):
                    prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        mod = self.modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if B.is_zero(c):
                continue
            s = k - d
            for i in range(d):
                prod[s + i] = B.sub(prod[s + i], B.mul(c, mod[i]))
        return tuple(prod[:d])

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self._pad(_uxgcd_inverse(self.base, list(a), list(self.modulus)))

    def from_int(self, n):
        return self.embed(self.base.from_int(n))

    def embed(self, b):
        return tuple([b] + [self.base.zero] * (self.degree - 1))

    def coerce(self, x):
        if isinstance(x, tuple) and len(x) == self.degree:
            return tuple(self.base(c) if isinstance(c, (int, Fraction)) else c for c in x)
        return self.embed(self.base(x))

    def in_base(self, a) -> bool:
        return all(self.base.is_zero(c) for c in a[1:])

    def code(self, a):
        qb = self.base.cardinality
        if qb is None:
            raise FieldError(f"{self} is not finite")
        c = 0
        for x in reversed(a):
            c = c * qb + self.base.code(x)
        return c

    def decode(self, c):
        qb = self.base.cardinality
        out = []
        for _ in range(self.degree):
            c, r = divmod(c, qb)
            out.append(self.base.decode(r))
        return tuple(out)

    def to_json(self, a):
        return [self.base.to_json(x) for x in a]

    def from_json(self, obj):
        if not isinstance(obj, list):
            return self.embed(self.base.from_json(obj))
        if len(obj) > self.degree:
            raise FieldError(f"extension element {obj!r} too long")
        return self._pad([self.base.from_json(x) for x in obj])

    def random_element(self, rng):
        return tuple(self.base.random_element(rng) for _ in range(self.degree))

    def galois_automorphisms(self):
        n = self.cyclotomic_order
        if n is None:
            return None
        autos = []
        for k in range(2, n):
            if math.gcd(k, n) == 1:
                tk = self.pow(self.generator, k)
                autos.append(_make_substitution(self, tk))
        return autos

    def __repr__(self):
        return f"{self.base!r}[t]/({_upoly_str(self.base, self.modulus)})"


def _make_substitution(K: ExtensionField, image):
    def apply(a):
        acc = K.zero
        power = K.one
        for c in a:
            if not K.base.is_zero(c):
                acc = K.add(acc, K.mul(K.embed(c), power))
            power = K.mul(power, image)
        return acc

    return apply


def _upoly_str(F, coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if F.is_zero(c):
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        cs = str(F.to_json(c))
        if mono and cs == "1":
            terms.append(mono)
        else:
            terms.append(cs + ("*" + mono if mono else ""))
    return " + ".join(terms) or "0"


# ---------------------------------------------------------------------------
# irreducibility
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    Q = RationalField()
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _udivmod(Q, num, [Fraction(c) for c in cyclotomic_polynomial(d)])
            assert not rem
    return tuple(int(c) for c in num)


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _detect_cyclotomic(modulus: tuple) -> int | None:
    d = len(modulus) - 1
    for n in range(1, 4 * d * d + 8):
        if _totient(n) == d and tuple(Fraction(c) for c in cyclotomic_polynomial(n)) == modulus:
            return n
    return None


def _is_irreducible(base: Field, m: list, cyclotomic_order=None) -> bool:
    d = len(m) - 1
    if d == 1:
        return True
    if base.is_finite:
        # Ben-Or: no irreducible factor of degree <= d/2
        q = base.cardinality
        x = [base.zero, base.one]
        xq = x
        for _ in range(d // 2):
            xq = _upowmod(base, xq, q, m)
            g = _ugcd(base, m, _usub(base, xq, x))
            if len(g) > 1:
                return False
        return True
    if base.kind == "rational":
        if cyclotomic_order is not None:
            return True
        import sympy

        t = sympy.Symbol("t")
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(m)], t, domain="QQ")
        return bool(poly.is_irreducible)
    raise FieldError("irreducibility test over this base field is not supported")


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

_FIELD_CACHE: dict = {}


def field_make(spec: FieldSpec) -> Field:
    """Build (and memoize) the field described by ``spec``."""
    if spec in _FIELD_CACHE:
        return _FIELD_CACHE[spec]
    if spec.kind == "rational":
        F: Field = RationalField()
    elif spec.kind == "prime":
        if spec.p is None:
            raise FieldError("prime field needs p")
        F = PrimeField(spec.p)
    elif spec.kind == "extension":
        if spec.base is None or spec.modulus is None:
            raise FieldError("extension field needs base and modulus")
        base = field_make(spec.base)
        F = ExtensionField(base, [base.from_json(c) for c in spec.modulus])
    else:
        raise FieldError(f"unknown field kind {spec.kind!r}")
    _FIELD_CACHE[spec] = F
    return F


def rational_field() -> RationalField:
    return field_make(FieldSpec("rational"))


def prime_field(p: int) -> PrimeField:
    return field_make(FieldSpec("prime", p=p))


@lru_cache(maxsize=None)
def find_irreducible(p: int, s: int) -> tuple:
    """Least monic irreducible polynomial of degree s over F_p.

    Candidates ``t^s + c_{s-1} t^{s-1} + ... + c_0`` are scanned with
    ``(c_{s-1}, ..., c_0)`` in lexicographic order.  Coefficients are returned
    low degree first.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if s < 1:
        raise FieldError("degree must be >= 1")
    F = prime_field(p)
    for tail in itertools.product(range(p), repeat=s):
        coeffs = list(reversed(tail)) + [1]
        if _is_irreducible(F, coeffs):
            return tuple(coeffs)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def finite_field(p: int, s: int = 1) -> Field:
    """F_p for s == 1, otherwise F_p[t]/(find_irreducible(p, s))."""
    if s == 1:
        return prime_field(p)
    return field_make(FieldSpec("extension", base=FieldSpec("prime", p=p), modulus=find_irreducible(p, s)))


def cyclotomic_field(j: int) -> ExtensionField:
    """Q(zeta_j) = Q[t]/(Phi_j)."""
    Phi = cyclotomic_polynomial(j)
    if len(Phi) == 2:
        raise FieldError(f"Phi_{j} has degree 1; use the rational field")
    return field_make(FieldSpec("extension", base=FieldSpec("rational"), modulus=tuple(str(c) for c in Phi)))


def multiplicative_order(F: Field, a, bound: int | None = None) -> int:
    if F.is_zero(a):
        raise ZeroDivisionError("zero has no multiplicative order")
    x = a
    k = 1
    limit = bound if bound is not None else (F.cardinality or 10**6)
    while x != F.one:
        x = F.mul(x, a)
        k += 1
        if k > limit:
            return 0
    return k


def _has_exact_order(F: Field, a, j: int) -> bool:
    if F.pow(a, j) != F.one:
        return False
    for ell in range(2, j + 1):
        if j % ell == 0 and _is_prime_small(ell) and F.pow(a, j // ell) == F.one:
            return False
    return True


def _is_prime_small(n: int) -> bool:
    return is_prime(n)


def root_of_unity(F: Field, j: int):
    """Deterministic element of exact multiplicative order j."""
    if j < 1:
        raise FieldError("order must be >= 1")
    if j == 1:
        return F.one
    if F.is_finite:
        if (F.cardinality - 1) % j != 0:
            raise FieldError(f"{j} does not divide |{F}*| = {F.cardinality - 1}")
        for c in range(1, F.cardinality):
            a = F.decode(c)
            if _has_exact_order(F, a, j):
                return a
        raise AssertionError("unreachable: cyclic group has elements of every order dividing its size")
    if j == 2:
        return F.neg(F.one)
    n = getattr(F, "cyclotomic_order", None)
    if n is not None:
        # t has order n; -t has order 2n when n is odd
        if n % j == 0:
            return F.pow(F.generator, n // j)
        if n % 2 == 1 and (2 * n) % j == 0:
            return F.pow(F.neg(F.generator), (2 * n) // j)
    raise FieldError(f"{F} has no element of order {j}")


def random_nonzero(F: Field, rng):
    while True:
        a = F.random_element(rng)
        if not F.is_zero(a):
            return a


def field_tables(F: Field):
    """Addition/multiplication/negation/inverse tables over element codes."""
    return _field_tables(F.spec)


@lru_cache(maxsize=32)
def _field_tables(spec: FieldSpec):
    F = field_make(spec)
    q = F.cardinality
    elems = [F.decode(c) for c in range(q)]
    add = np.empty((q, q), dtype=np.int64)
    mul = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(a, q):
            s = F.code(F.add(elems[a], elems[b]))
            m = F.code(F.mul(elems[a], elems[b]))
            add[a, b] = add[b, a] = s
            mul[a, b] = mul[b, a] = m
    neg = np.array([F.code(F.neg(e)) for e in elems], dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    for c in range(1, q):
        inv[c] = F.code(F.inv(elems[c]))
    for t in (add, mul, neg, inv):
        t.setflags(write=False)
    return add, mul, neg, inv
