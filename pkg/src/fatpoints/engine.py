"""Graded components of ideals of fat points and of ordinary powers.

Ideals are handled one degree at a time.  A symbolic power of a fat point
scheme is the kernel of a matrix of Hasse-derivative conditions; an ordinary
power (optionally multiplied by a power of the irrelevant ideal) is the span of
products of generators.  Components are memoized per view and, when a store is
installed with :func:`set_store`, persisted across runs.
"""

from __future__ import annotations

import hashlib
import json
import math
import threading
import time
from collections import Counter, OrderedDict
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .geometry import FatScheme, Point, affine_chart_points, hyperplane_points
from .linalg import HAVE_FLINT, TABLE_LIMIT, Codec, IntegerEchelon, _int_rows, _lcm_den, make_echelon, modular_rank
from .poly import Form, common_divisor, exponent_array, monomials, multi_indices, num_monomials, shift_map
from ._kernels import MAX_PRIME
from .scalar import Field, field_tables

try:
    import flint
except ImportError:  # pragma: no cover
    flint = None

__all__ = [
    "GradedBasis",
    "Certificate",
    "DegreeCapExceeded",
    "IdealView",
    "SymbolicPower",
    "PowerFamily",
    "PowerIdeal",
    "MonomialIdeal",
    "symbolic",
    "symbolic_component",
    "hilbert_function",
    "fat_degree",
    "h_vector",
    "regularity",
    "alpha",
    "beta",
    "minimal_generators",
    "ideal_generators",
    "power_component",
    "scaled_power_component",
    "least_nonvanishing_degree",
    "membership",
    "contains",
    "verify_certificate",
    "equals_power_symbolic",
    "power_vanishes_at",
    "monomial_symbolic",
    "basic_double_link",
    "linkage_data",
    "set_store",
    "get_store",
    "STATS",
]


class DegreeCapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# persistence hooks and counters
# ---------------------------------------------------------------------------


class Stats:
    """Counts of derived (computed) versus loaded items, by item kind."""

    def __init__(self):
        self._lock = threading.Lock()
        self.computed: Counter = Counter()
        self.loaded: Counter = Counter()

    def record(self, kind: str, loaded: bool):
        with self._lock:
            (self.loaded if loaded else self.computed)[kind] += 1

    def reset(self):
        with self._lock:
            self.computed.clear()
            self.loaded.clear()

    def snapshot(self) -> dict:
        with self._lock:
            return {"computed": dict(self.computed), "loaded": dict(self.loaded)}


STATS = Stats()
_STORE = None


def set_store(store) -> None:
    """Install a persistence backend with ``load(key)`` / ``save(key, payload)``, or None."""
    global _STORE
    _STORE = store


def get_store():
    return _STORE


def _digest(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _int_payload(n: int) -> dict:
    return {"meta": {"value": int(n)}}


def _int_from_payload(payload) -> int:
    v = payload["meta"]["value"]
    if not isinstance(v, int):
        raise ValueError("bad integer payload")
    return v


# ---------------------------------------------------------------------------
# arithmetic on native row blocks
# ---------------------------------------------------------------------------


def _integral_modulus(field: Field) -> bool:
    return all(Fraction(c).denominator == 1 for c in field.modulus)


def _mode_for(field: Field, rational_data: bool) -> str:
    """Representation used for rows over ``field``.

    ``rational_data`` says the rows of interest are defined over Q even when
    the field is an extension of Q (a Galois-stable point set, or generators
    with rational coefficients); such rows are handled as integer rows.
    """
    if field.kind == "prime" and field.p < MAX_PRIME:
        return "prime"
    if field.is_finite and field.cardinality <= TABLE_LIMIT:
        return "table"
    if HAVE_FLINT and rational_data:
        if field.kind == "rational":
            return "integer"
        if field.kind == "extension" and field.base.kind == "rational" and _integral_modulus(field):
            return "integer"
    return "scalar"


class _Arith:
    """Row-block arithmetic for one field in one representation.

    ``prime`` and ``table`` rows are int64 element codes.  ``integer`` rows
    are object arrays of integers standing for rational vectors up to scale;
    a vector over an extension of Q is represented by its coefficient parts,
    which is exact for spaces defined over Q.  ``scalar`` rows are lists of
    field elements.
    """

    def __init__(self, field: Field, mode: str):
        self.field = field
        self.mode = mode
        if mode == "prime":
            self.p = field.p
        elif mode == "table":
            self.add_t, self.mul_t, self.neg_t, self.inv_t = field_tables(field)
        self.codec = Codec(field, mode={"prime": "coded", "table": "coded"}.get(mode, mode))
        self.array = mode != "scalar"
        self.dtype = object if mode == "integer" else np.int64

    # conversions -------------------------------------------------------
    def _rational_parts(self, vec) -> list:
        F = self.field
        if F.kind == "extension":
            parts = [[x[j] for x in vec] for j in range(F.degree)]
        else:
            parts = [list(vec)]
        return [p for p in parts if any(x != 0 for x in p)]

    def vector_rows(self, vec):
        """Native rows whose joint membership in a space is equivalent to that of ``vec``."""
        if self.mode in ("prime", "table"):
            return self.codec.encode(vec)[None, :]
        if self.mode == "integer":
            parts = self._rational_parts(vec)
            if not parts:
                return np.zeros((0, len(vec)), dtype=object)
            return np.array(_int_rows(parts), dtype=object).reshape(len(parts), len(vec))
        return [list(vec)]

    def form_rows(self, f: Form):
        if self.mode in ("prime", "table"):
            return f.to_vector(coded=True)[None, :]
        return self.vector_rows(f.to_vector())

    def row_form(self, row, nvars: int, t: int) -> Form:
        F = self.field
        if self.mode in ("prime", "table"):
            return Form.from_vector(F, nvars, t, row, coded=True)
        if self.mode == "integer":
            return Form.from_vector(F, nvars, t, [F(int(x)) for x in row])
        return Form.from_vector(F, nvars, t, row)

    def rational(self, c) -> Fraction:
        return c[0] if self.field.kind == "extension" else c

    def echelon(self, ncols: int, galois_stable: bool = False):
        if self.mode == "integer":
            return IntegerEchelon(self.field, ncols)
        return make_echelon(self.field, ncols, galois_stable=galois_stable)

    # row blocks -----------------------------------------------------------
    def emul(self, a, b):
        """Elementwise product of code arrays."""
        if self.mode == "prime":
            return a * b % self.p
        return self.mul_t[a, b]

    def block(self, rows, ncols: int):
        if self.array:
            return np.asarray(rows, dtype=self.dtype).reshape(-1, ncols)
        return [list(r) for r in rows]

    def empty(self, ncols: int):
        return np.zeros((0, ncols), dtype=self.dtype) if self.array else []

    def identity(self, n: int):
        if self.array:
            out = np.zeros((n, n), dtype=self.dtype)
            out[np.arange(n), np.arange(n)] = 1
            return out
        F = self.field
        return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]

    def concat(self, blocks, ncols: int):
        if self.array:
            blocks = [b for b in blocks if len(b)]
            return np.vstack(blocks) if blocks else self.empty(ncols)
        out = []
        for b in blocks:
            out.extend(b)
        return out

    def multiply_rows(self, g: Form, rows, nvars: int, s: int):
        """Rows of g*h, h running over ``rows`` (vectors in degree s)."""
        t = s + g.degree
        n_t = num_monomials(nvars, t)
        if self.mode == "prime":
            out = np.zeros((rows.shape[0], n_t), dtype=np.int64)
            for count, (mono, c) in enumerate(g.terms.items()):
                out[:, shift_map(nvars, s, mono)] += self.field.code(c) * rows
                if count % 1024 == 1023:
                    np.mod(out, self.p, out=out)
            np.mod(out, self.p, out=out)
            return out
        if self.mode == "table":
            out = np.zeros((rows.shape[0], n_t), dtype=np.int64)
            for mono, c in g.terms.items():
                idx = shift_map(nvars, s, mono)
                out[:, idx] = self.add_t[out[:, idx], self.mul_t[self.field.code(c), rows]]
            return out
        if self.mode == "integer":
            coeffs = {m: self.rational(c) for m, c in g.terms.items()}
            lam = _lcm_den(coeffs.values())
            out = np.zeros((rows.shape[0], n_t), dtype=object)
            for mono, c in coeffs.items():
                out[:, shift_map(nvars, s, mono)] += int(c * lam) * rows
            return out
        F = self.field
        terms = [(shift_map(nvars, s, mono), c) for mono, c in g.terms.items()]
        out = []
        for h in rows:
            o = [F.zero] * n_t
            nz = [(j, x) for j, x in enumerate(h) if not F.is_zero(x)]
            for idx, c in terms:
                for j, x in nz:
                    k = idx[j]
                    o[k] = F.add(o[k], F.mul(c, x))
            out.append(o)
        return out

    def shift_rows(self, rows, nvars: int, s: int, var: int):
        """Rows of x_var * h."""
        e = [0] * nvars
        e[var] = 1
        idx = shift_map(nvars, s, tuple(e))
        n_t = num_monomials(nvars, s + 1)
        if self.array:
            out = np.zeros((len(rows), n_t), dtype=self.dtype)
            out[:, idx] = rows
            return out
        F = self.field
        out = []
        for h in rows:
            o = [F.zero] * n_t
            for j, x in enumerate(h):
                o[idx[j]] = x
            out.append(o)
        return out

    def eval_nonzero(self, rows, values) -> bool:
        """True when some row, read as a form, is nonzero at the point with monomial values ``values``."""
        if len(rows) == 0:
            return False
        if self.mode == "prime":
            return bool(np.any((rows @ self.codec.encode(values)) % self.p))
        if self.mode == "table":
            v = self.codec.encode(values)
            acc = np.zeros(len(rows), dtype=np.int64)
            for j in np.flatnonzero(v):
                acc = self.add_t[acc, self.mul_t[rows[:, j], v[j]]]
            return bool(np.any(acc))
        if self.mode == "integer":
            return any(np.any(rows.dot(w) != 0) for w in self.vector_rows(values))
        F = self.field
        nz = [(j, x) for j, x in enumerate(values) if not F.is_zero(x)]
        for row in rows:
            acc = F.zero
            for j, x in nz:
                if not F.is_zero(row[j]):
                    acc = F.add(acc, F.mul(row[j], x))
            if not F.is_zero(acc):
                return True
        return False

    def annihilates(self, C, rows) -> bool:
        """True when C . r = 0 for every row r."""
        if len(C) == 0 or len(rows) == 0:
            return True
        if self.mode == "prime":
            return not np.any((C @ np.asarray(rows).T) % self.p)
        if self.mode == "integer":
            prod = flint.fmpz_mat(C.tolist()) * flint.fmpz_mat(np.asarray(rows).T.tolist())
            return prod.is_zero()
        if self.mode == "table":
            for r in rows:
                acc = np.zeros(len(C), dtype=np.int64)
                for j in np.flatnonzero(r):
                    acc = self.add_t[acc, self.mul_t[C[:, j], r[j]]]
                if np.any(acc):
                    return False
            return True
        F = self.field
        for r in rows:
            nz = [(j, x) for j, x in enumerate(r) if not F.is_zero(x)]
            for c in C:
                acc = F.zero
                for j, x in nz:
                    if not F.is_zero(c[j]):
                        acc = F.add(acc, F.mul(c[j], x))
                if not F.is_zero(acc):
                    return False
        return True

    # persistence ----------------------------------------------------------
    def rows_payload(self, rows) -> dict:
        if self.mode in ("prime", "table"):
            return {"array": np.asarray(rows, dtype=np.int64)}
        if self.mode == "integer":
            return {"rows": [[int(x) for x in r] for r in rows]}
        F = self.field
        return {"rows": [[F.to_json(x) for x in r] for r in rows]}

    def rows_from_payload(self, payload, ncols: int):
        if self.mode in ("prime", "table"):
            rows = payload["array"]
            if rows.dtype != np.int64 or rows.ndim != 2 or rows.shape[1] != ncols:
                raise ValueError("stored rows have the wrong shape")
            if rows.size and (rows.min() < 0 or rows.max() >= self.field.cardinality):
                raise ValueError("stored rows have out-of-range codes")
            return rows
        rows = payload["meta"]["rows"]
        if any(len(r) != ncols for r in rows):
            raise ValueError("stored rows have the wrong length")
        if self.mode == "integer":
            if not all(isinstance(x, int) for r in rows for x in r):
                raise ValueError("stored rows are not integral")
            return np.array(rows, dtype=object).reshape(len(rows), ncols)
        F = self.field
        return [[F.from_json(x) for x in r] for r in rows]


_ARITH: dict = {}


def _arith(field: Field, mode: str) -> _Arith:
    key = (field.spec, mode)
    a = _ARITH.get(key)
    if a is None:
        a = _ARITH[key] = _Arith(field, mode)
    return a


def monomial_values(point: Point, nvars: int, t: int, field: Field) -> list:
    """Values q^b for the degree-t monomials b, at the stored representative of q."""
    F = field
    pw = []
    for c in point.coords:
        row = [F.one]
        for _ in range(t):
            row.append(F.mul(row[-1], c))
        pw.append(row)
    vals = []
    for b in monomials(nvars, t):
        v = F.one
        for i, e in enumerate(b):
            if e:
                v = F.mul(v, pw[i][e])
        vals.append(v)
    return vals


# ---------------------------------------------------------------------------
# graded components
# ---------------------------------------------------------------------------


class GradedBasis:
    """Echelon basis of one graded component, as native rows."""

    def __init__(self, arith: _Arith, nvars: int, degree: int, rows, pivots=None, galois_stable: bool = False, echelon=None):
        self.arith = arith
        self.field = arith.field
        self.nvars = nvars
        self.degree = degree
        self.ncols = num_monomials(nvars, degree)
        self.rows = arith.block(rows, self.ncols)
        self.pivots = [int(p) for p in pivots] if pivots is not None else None
        self.galois_stable = galois_stable
        self._echelon = echelon
        self._forms = None
        self._lock = threading.Lock()

    @classmethod
    def from_echelon(cls, E, arith, nvars, degree, galois_stable=False):
        rows, piv = E.rref()
        return cls(arith, nvars, degree, rows, piv, galois_stable, echelon=E)

    @classmethod
    def from_span(cls, arith, nvars, degree, rows, galois_stable=False):
        E = arith.echelon(num_monomials(nvars, degree), galois_stable)
        if len(rows):
            E.extend(rows)
        return cls.from_echelon(E, arith, nvars, degree, galois_stable)

    @classmethod
    def empty(cls, arith, nvars, degree):
        return cls(arith, nvars, degree, arith.empty(num_monomials(nvars, degree)), [])

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def forms(self) -> list:
        if self._forms is None:
            self._forms = [self.arith.row_form(r, self.nvars, self.degree) for r in self.rows]
        return self._forms

    @property
    def echelon(self):
        with self._lock:
            if self._echelon is None:
                E = self.arith.echelon(self.ncols, self.galois_stable)
                if self.dim:
                    E.extend(self.rows)
                self._echelon = E
            return self._echelon

    def contains_rows(self, rows) -> bool:
        if len(rows) == 0 or self.dim == self.ncols:
            return True
        if self.dim == 0:
            return all(self.arith.codec.is_zero(r) for r in rows)
        E = self.echelon
        with self._lock:
            return E.contains_all(rows)

    def contains(self, f: Form) -> bool:
        if f.is_zero():
            return True
        if f.degree != self.degree:
            raise ValueError(f"form of degree {f.degree} tested against a degree-{self.degree} component")
        return self.contains_rows(self.arith.form_rows(f))

    def payload(self) -> dict:
        body = self.arith.rows_payload(self.rows)
        meta = {"degree": self.degree, "pivots": self.pivots, "dim": self.dim}
        if "rows" in body:
            meta["rows"] = body.pop("rows")
        return {"meta": meta, **body}

    @classmethod
    def from_payload(cls, arith, nvars, payload, galois_stable=False):
        meta = payload["meta"]
        degree = meta["degree"]
        rows = arith.rows_from_payload(payload, num_monomials(nvars, degree))
        if len(rows) != meta["dim"]:
            raise ValueError("stored component has the wrong dimension")
        return cls(arith, nvars, degree, rows, meta["pivots"], galois_stable)

    def __repr__(self):
        return f"GradedBasis(degree={self.degree}, dim={self.dim})"


# ---------------------------------------------------------------------------
# views
# ---------------------------------------------------------------------------


class IdealView:
    """A homogeneous ideal presented degree by degree, with memoized components."""

    kind = "abstract"

    def __init__(self, field: Field, nvars: int, key: dict, arith: _Arith):
        self.field = field
        self.nvars = nvars
        self.key = key
        self.digest = _digest(key)
        self.arith = arith
        self._cache: dict = {}
        self._item_locks: dict = {}
        self._lock = threading.RLock()

    # memoization -------------------------------------------------------
    def _memo(self, item: tuple, compute, encode, decode):
        with self._lock:
            if item in self._cache:
                return self._cache[item]
            lock = self._item_locks.setdefault(item, threading.RLock())
        with lock:
            with self._lock:
                if item in self._cache:
                    return self._cache[item]
            store = _STORE
            skey = None
            if store is not None:
                skey = _digest({"view": self.digest, "item": list(item)})
                payload = store.load(skey)
                if payload is not None:
                    try:
                        value = decode(payload)
                    except Exception:
                        value = None
                        store.discard(skey, "undecodable entry")
                    if value is not None:
                        STATS.record(item[0], loaded=True)
                        with self._lock:
                            self._cache[item] = value
                        return value
            value = compute()
            STATS.record(item[0], loaded=False)
            if store is not None:
                store.save(skey, encode(value))
            with self._lock:
                self._cache[item] = value
            return value

    def _memo_int(self, item, compute):
        return self._memo(item, compute, _int_payload, _int_from_payload)

    def _memo_basis(self, item, compute):
        return self._memo(
            item,
            compute,
            lambda gb: gb.payload(),
            lambda pl: GradedBasis.from_payload(self.arith, self.nvars, pl, self.galois_stable),
        )

    # interface ---------------------------------------------------------
    def ncols(self, t: int) -> int:
        return num_monomials(self.nvars, t)

    def component(self, t: int) -> GradedBasis:
        raise NotImplementedError

    def dim(self, t: int) -> int:
        return self.component(t).dim

    def contains_form(self, f: Form) -> bool:
        return self.component(f.degree).contains(f)

    def contains_rows(self, rows, t: int) -> bool:
        return self.component(t).contains_rows(rows)

    def describe(self) -> dict:
        return {"kind": self.kind}

    @property
    def galois_stable(self) -> bool:
        return False

    def new_generators(self, t: int) -> GradedBasis:
        """Basis of a complement of (x_0, ..., x_N) * I_{t-1} inside I_t, chosen among I_t's basis rows."""
        A = self.arith

        def compute():
            J = self.component(t)
            if J.dim == 0:
                return GradedBasis.empty(A, self.nvars, t)
            S = A.echelon(J.ncols, self.galois_stable)
            if t > 0:
                prev = self.component(t - 1)
                if prev.dim:
                    S.extend(A.concat([A.shift_rows(prev.rows, self.nvars, t - 1, i) for i in range(self.nvars)], J.ncols), target=J.dim)
            if S.rank >= J.dim:
                return GradedBasis.empty(A, self.nvars, t)
            idx = S.complement(J.rows, J.dim)
            return GradedBasis(A, self.nvars, t, A.block([J.rows[i] for i in idx], J.ncols), None, self.galois_stable)

        return self._memo_basis(("newgens", t), compute)

    def generator_degree_range(self) -> range:
        raise NotImplementedError

    def default_cap(self) -> int:
        raise NotImplementedError

    def least_nonvanishing_degree(self, q: Point, cap: int | None = None) -> int:
        cap = self.default_cap() if cap is None else cap
        for t in range(cap + 1):
            J = self.component(t)
            if self.arith.eval_nonzero(J.rows, monomial_values(q, self.nvars, t, self.field)):
                return t
        raise DegreeCapExceeded(f"every form of degree <= {cap} vanishes at {q!r}")


def _poly_mul_parts(A: list, B: list, modulus: list) -> list:
    """Product of arrays of elements of Z[t]/(modulus), stored as lists of coefficient arrays."""
    d = len(A)
    if d == 1:
        return [A[0] * B[0]]
    prod = [0] * (2 * d - 1)
    for i in range(d):
        for j in range(d):
            prod[i + j] = prod[i + j] + A[i] * B[j]
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[k]
        for i in range(d):
            if modulus[i]:
                prod[k - d + i] = prod[k - d + i] - c * modulus[i]
    return prod[:d]


def _integral_parts(field: Field, x) -> tuple:
    """(u, den) with x = u / den, u an integer coefficient vector."""
    parts = list(x) if field.kind == "extension" else [x]
    lam = _lcm_den(parts)
    return [int(c * lam) for c in parts], lam


class SymbolicPower(IdealView):
    """The m-th symbolic power of the ideal of a fat point scheme."""

    kind = "symbolic"

    def __init__(self, scheme: FatScheme, m: int, degree_cap: int | None = None):
        if m < 1:
            raise ValueError("m must be >= 1")
        field = scheme.field
        stable = field.kind == "extension" and not field.is_finite and scheme.galois_stable()
        mode = _mode_for(field, field.kind == "rational" or stable)
        key = {"kind": "symbolic", "field": field.spec.to_json(), "scheme": scheme.to_json(), "m": m}
        super().__init__(field, scheme.nvars, key, _arith(field, mode))
        self.scheme = scheme
        self.m = m
        self.fat_degree = scheme.fat_degree(m)
        self.orders = [(P, m * mult) for P, mult in scheme.points]
        self._stable = stable
        # interpolation conditions of a fat scheme are independent from degree sum(orders) - 1 on
        self.cap = degree_cap if degree_cap is not None else max(1, sum(o for _, o in self.orders))
        self._tables: dict = {}
        self._echelons: OrderedDict = OrderedDict()
        # at most fat_degree conditions, so I_t != 0 as soon as there are more monomials
        self._alpha_bound = 0
        while num_monomials(self.nvars, self._alpha_bound) <= self.fat_degree:
            self._alpha_bound += 1

    @property
    def galois_stable(self) -> bool:
        return self._stable

    def describe(self):
        return {"kind": "symbolic", "m": self.m, "points": len(self.scheme), "nvars": self.nvars}

    def default_cap(self) -> int:
        return self.cap

    # condition matrices -----------------------------------------------
    def _binomials(self, t: int, reduce: bool) -> np.ndarray:
        key = (t, reduce)
        B = self._tables.get(key)
        if B is None:
            p = self.field.characteristic
            B = np.zeros((t + 1, t + 1), dtype=np.int64 if reduce else object)
            for b in range(t + 1):
                for a in range(b + 1):
                    c = math.comb(b, a)
                    B[b, a] = c % p if reduce else c
            self._tables[key] = B
        return B

    def _point_powers(self, P: Point, t: int) -> list:
        F = self.field
        out = []
        for c in P.key:
            row = [F.one]
            for _ in range(t):
                row.append(F.mul(row[-1], c))
            out.append(row)
        return out

    def conditions(self, t: int):
        """Native rows: Hasse derivatives of order < m*mult of the dehomogenized form, at each point.

        At a point normalized to x_k = 1 with affine coordinates a_i (i != k),
        the row for a multi-index alpha has entry prod_i binom(b_i, alpha_i) a_i^(b_i - alpha_i)
        in the column of the monomial x^b.
        """
        mode = self.arith.mode
        if mode in ("prime", "table"):
            return self._coded_conditions(t)
        if mode == "integer":
            return self._integer_conditions(t)
        return self._scalar_conditions(t)

    def _alpha_block(self, P, order, t):
        N = self.nvars - 1
        others = [i for i in range(self.nvars) if i != P.chart]
        alphas = [a for a in multi_indices(N, order) if sum(a) <= t]
        return others, np.array(alphas, dtype=np.int64).reshape(len(alphas), N)

    def _coded_conditions(self, t: int):
        A = self.arith
        E = exponent_array(self.nvars, t)
        Bt = self._binomials(t, reduce=True)
        blocks = []
        for P, order in self.orders:
            others, Al = self._alpha_block(P, order, t)
            if not len(Al):
                continue
            pw = self._point_powers(P, t)
            M = np.ones((len(Al), E.shape[0]), dtype=np.int64)
            for idx, i in enumerate(others):
                b = E[:, i][None, :]
                a = Al[:, idx][:, None]
                diff = b - a
                valid = diff >= 0
                dclip = np.where(valid, diff, 0)
                powc = np.array([self.field.code(x) for x in pw[i]], dtype=np.int64)
                term = A.emul(Bt[b, np.minimum(a, b)], powc[dclip])
                term[~valid] = 0
                M = A.emul(M, term)
            blocks.append(M)
        return A.concat(blocks, self.ncols(t))

    def _integer_conditions(self, t: int):
        F = self.field
        d = F.degree if F.kind == "extension" else 1
        modulus = [int(Fraction(c)) for c in F.modulus] if d > 1 else None
        E = exponent_array(self.nvars, t)
        Bt = self._binomials(t, reduce=False)
        blocks = []
        for P, order in self.orders:
            others, Al = self._alpha_block(P, order, t)
            if not len(Al):
                continue
            M = None
            for idx, i in enumerate(others):
                u, den = _integral_parts(F, P.key[i])
                pw = [[1] + [0] * (d - 1)]
                for _ in range(t):
                    pw.append(_poly_mul_parts([np.array([x], dtype=object) for x in pw[-1]], [np.array([x], dtype=object) for x in u], modulus))
                    pw[-1] = [int(x[0]) for x in pw[-1]]
                # scale the whole row by den^t so every entry is integral
                denpow = np.array([den ** (t - e) for e in range(t + 1)], dtype=object)
                b = E[:, i][None, :]
                a = Al[:, idx][:, None]
                diff = b - a
                valid = diff >= 0
                dclip = np.where(valid, diff, 0)
                scale = Bt[b, np.minimum(a, b)] * denpow[dclip]
                scale[~valid] = 0
                term = [scale * np.array([pw[e][j] for e in range(t + 1)], dtype=object)[dclip] for j in range(d)]
                M = term if M is None else _poly_mul_parts(M, term, modulus)
            if M is None:
                M = [np.ones((len(Al), E.shape[0]), dtype=object)] + [np.zeros((len(Al), E.shape[0]), dtype=object)] * (d - 1)
            for part in M:
                if np.any(part != 0):
                    blocks.append(part)
        return self.arith.concat(blocks, self.ncols(t))

    def _scalar_conditions(self, t: int):
        F = self.field
        mons = monomials(self.nvars, t)
        rows = []
        for P, order in self.orders:
            others, Al = self._alpha_block(P, order, t)
            pw = self._point_powers(P, t)
            for a in Al.tolist():
                row = []
                for b in mons:
                    v = F.one
                    for ai, i in zip(a, others):
                        bi = b[i]
                        if bi < ai:
                            v = F.zero
                            break
                        v = F.mul(v, F.mul(F.from_int(math.comb(bi, ai)), pw[i][bi - ai]))
                        if F.is_zero(v):
                            break
                    row.append(v)
                rows.append(row)
        return rows

    def _condition_echelon(self, t: int):
        # a few recent eliminations are kept so rank(t) and component(t) share one
        with self._lock:
            E = self._echelons.get(t)
            if E is not None:
                self._echelons.move_to_end(t)
                return E
        E = self.arith.echelon(self.ncols(t), self.galois_stable)
        rows = self.conditions(t)
        if len(rows):
            E.extend(rows, target=self.ncols(t))
        with self._lock:
            self._echelons[t] = E
            while len(self._echelons) > 8:
                self._echelons.popitem(last=False)
        return E

    # components ----------------------------------------------------------
    def rank(self, t: int) -> int:
        """Rank of the condition matrix, i.e. the Hilbert function of R/I^(m) at t."""
        if t < 0:
            return 0
        with self._lock:
            comp = self._cache.get(("component", t))
        if comp is not None:
            return self.ncols(t) - comp.dim
        return self._memo_int(("rank", t), lambda: self._rank(t))

    def _rank(self, t: int) -> int:
        if self.arith.mode == "integer":
            # the rank is at most the number of conditions over the base field, and at least the rank mod p
            top = min(self.ncols(t), self.fat_degree)
            if modular_rank(self.conditions(t)) == top:
                return top
        return self._condition_echelon(t).rank

    def dim(self, t: int) -> int:
        return self.ncols(t) - self.rank(t) if t >= 0 else 0

    def component(self, t: int) -> GradedBasis:
        if t < 0:
            raise ValueError("negative degree")

        def compute():
            # the kernel of a reduced echelon form is determined by the space, so it is canonical
            E = self._condition_echelon(t)
            return GradedBasis(self.arith, self.nvars, t, E.kernel(), None, self.galois_stable)

        return self._memo_basis(("component", t), compute)

    def contains_form(self, f: Form) -> bool:
        if f.is_zero():
            return True
        return self.arith.annihilates(self.conditions(f.degree), self.arith.form_rows(f))

    def contains_rows(self, rows, t: int) -> bool:
        return self.arith.annihilates(self.conditions(t), rows)

    def least_nonvanishing_degree(self, q: Point, cap: int | None = None) -> int:
        cap = self.cap if cap is None else cap

        def compute():
            for t in range(cap + 1):
                if self.dim(t) == 0:
                    continue
                E = self._condition_echelon(t)
                vals = self.arith.vector_rows(monomial_values(q, self.nvars, t, self.field))
                if not all(E.contains(r) for r in vals):
                    return t
            return -1

        n = self._memo_int(("lnv", _digest(q.to_json()), cap), compute)
        if n < 0:
            raise DegreeCapExceeded(f"every form of degree <= {cap} vanishes at {q!r}")
        return n

    # invariants ----------------------------------------------------------
    def _first_true(self, pred, lo: int, hi: int, known: bool = False) -> int:
        """Least t in [lo, hi] with pred(t), for a monotone predicate; raises past hi.

        ``known`` says pred(hi) holds for a structural reason and need not be checked.
        """
        if lo > hi or not (known or pred(hi)):
            raise DegreeCapExceeded(f"degree cap {hi} reached")
        step = 1
        t = lo
        while t < hi and not pred(t):
            lo = t + 1
            t = min(hi, t + step)
            step *= 2
        hi = t
        while lo < hi:
            mid = (lo + hi) // 2
            if pred(mid):
                hi = mid
            else:
                lo = mid + 1
        return lo

    def alpha(self) -> int:
        # x_k * f stays in the ideal, so "I_t != 0" is monotone in t
        hi = min(self.cap, self._alpha_bound)
        return self._memo_int(
            ("alpha",), lambda: self._first_true(lambda t: self.dim(t) > 0, 0, hi, known=hi == self._alpha_bound)
        )

    def stabilization_degree(self) -> int:
        """Least t with Hilbert function equal to the fat degree."""

        def compute():
            lo = 0
            while num_monomials(self.nvars, lo) < self.fat_degree:
                lo += 1
            # conditions are independent from degree sum(orders) - 1 on, so the default cap is safe
            natural = sum(o for _, o in self.orders) - 1
            return self._first_true(lambda t: self.rank(t) == self.fat_degree, lo, self.cap, known=self.cap >= natural)

        return self._memo_int(("stab",), compute)

    def regularity(self) -> int:
        return self.stabilization_degree() + 1

    def generator_degree_range(self) -> range:
        return range(self.alpha(), self.regularity() + 1)


def _rational_coefficients(forms) -> bool:
    F = forms[0].field
    if F.kind == "rational":
        return True
    if F.kind == "extension" and not F.is_finite:
        return all(F.in_base(c) for f in forms for c in f.terms.values())
    return False


class PowerFamily:
    """Ordinary powers I^r (and M^k I^r) of the ideal generated by fixed forms."""

    def __init__(self, generators: Sequence[Form]):
        gens = [g for g in generators if not g.is_zero()]
        if not gens:
            raise ValueError("need at least one nonzero generator")
        self.field = gens[0].field
        self.nvars = gens[0].nvars
        for g in gens:
            g._check(gens[0])
        self.generators = gens
        mode = _mode_for(self.field, _rational_coefficients(gens))
        key = {"kind": "power", "field": self.field.spec.to_json(), "generators": [g.to_json() for g in gens]}
        self.view = _FamilyView(self, key, _arith(self.field, mode))

    def component(self, r: int, t: int) -> GradedBasis:
        return self.view.power(r, t)

    def scaled(self, r: int, k: int, t: int) -> GradedBasis:
        return self.view.scaled(r, k, t)

    def ideal(self, r: int = 1, k: int = 0) -> "PowerIdeal":
        return PowerIdeal(self, r, k)


class _FamilyView(IdealView):
    kind = "power-family"

    def __init__(self, family: PowerFamily, key: dict, arith: _Arith):
        super().__init__(family.field, family.nvars, key, arith)
        self.family = family

    def power(self, r: int, t: int) -> GradedBasis:
        n, A = self.nvars, self.arith
        if r < 0 or t < 0:
            raise ValueError("negative power or degree")
        if r == 0:
            return GradedBasis(A, n, t, A.identity(self.ncols(t)), list(range(self.ncols(t))))

        def compute():
            ncols = self.ncols(t)
            E = A.echelon(ncols)
            blocks = []
            for g in self.family.generators:
                s = t - g.degree
                if s < 0:
                    continue
                H = self.power(r - 1, s)
                if H.dim:
                    blocks.append(A.multiply_rows(g, H.rows, n, s))
            if blocks:
                E.extend(A.concat(blocks, ncols), target=ncols)
            return GradedBasis.from_echelon(E, A, n, t)

        return self._memo_basis(("power", r, t), compute)

    def scaled(self, r: int, k: int, t: int) -> GradedBasis:
        if k == 0:
            return self.power(r, t)
        A = self.arith
        if t < k:
            return GradedBasis.empty(A, self.nvars, t)

        def compute():
            prev = self.scaled(r, k - 1, t - 1)
            E = A.echelon(self.ncols(t))
            if prev.dim:
                E.extend(A.concat([A.shift_rows(prev.rows, self.nvars, t - 1, i) for i in range(self.nvars)], self.ncols(t)))
            return GradedBasis.from_echelon(E, A, self.nvars, t)

        return self._memo_basis(("scaled", r, k, t), compute)


class PowerIdeal(IdealView):
    """M^k * I^r for the ideal I generated by a :class:`PowerFamily`."""

    kind = "power"

    def __init__(self, family: PowerFamily, r: int, k: int = 0):
        if r < 0 or k < 0:
            raise ValueError("r and k must be >= 0")
        key = dict(family.view.key, r=r, k=k)
        super().__init__(family.field, family.nvars, key, family.view.arith)
        self.family = family
        self.r = r
        self.k = k

    def component(self, t: int) -> GradedBasis:
        return self.family.scaled(self.r, self.k, t)

    def describe(self):
        return {"kind": "power", "r": self.r, "k": self.k, "generators": len(self.family.generators)}

    def generator_degree_range(self) -> range:
        degs = [g.degree for g in self.family.generators]
        return range(self.r * min(degs) + self.k, self.r * max(degs) + self.k + 1)

    def default_cap(self) -> int:
        return self.generator_degree_range().stop - 1


class MonomialIdeal(IdealView):
    """An ideal generated by monomials (given as exponent vectors)."""

    kind = "monomial"

    def __init__(self, field: Field, monos: Iterable[Sequence[int]]):
        gens = _minimalize([tuple(m) for m in monos])
        if not gens:
            raise ValueError("need at least one monomial")
        key = {"kind": "monomial", "field": field.spec.to_json(), "monomials": [list(m) for m in gens]}
        super().__init__(field, len(gens[0]), key, _arith(field, _mode_for(field, True)))
        self.monomials = gens

    def describe(self):
        return {"kind": "monomial", "generators": len(self.monomials)}

    def _unit_rows(self, t, idx):
        rows = self.arith.empty(self.ncols(t)) if self.arith.array else []
        if self.arith.array:
            rows = np.zeros((len(idx), self.ncols(t)), dtype=self.arith.dtype)
            rows[np.arange(len(idx)), idx] = 1
            return rows
        F = self.field
        for i in idx:
            r = [F.zero] * self.ncols(t)
            r[i] = F.one
            rows.append(r)
        return rows

    def component(self, t: int) -> GradedBasis:
        idx = [i for i, b in enumerate(monomials(self.nvars, t)) if any(_divides(u, b) for u in self.monomials)]
        return GradedBasis(self.arith, self.nvars, t, self._unit_rows(t, idx), idx)

    def new_generators(self, t: int) -> GradedBasis:
        index = {b: i for i, b in enumerate(monomials(self.nvars, t))}
        idx = [index[u] for u in self.monomials if sum(u) == t]
        return GradedBasis(self.arith, self.nvars, t, self._unit_rows(t, idx), idx)

    def generator_degree_range(self) -> range:
        degs = [sum(u) for u in self.monomials]
        return range(min(degs), max(degs) + 1)

    def default_cap(self) -> int:
        return max(sum(u) for u in self.monomials)

    def contains_form(self, f: Form) -> bool:
        return all(any(_divides(u, b) for u in self.monomials) for b in f.terms)


# ---------------------------------------------------------------------------
# view registry
# ---------------------------------------------------------------------------

_VIEWS: dict = {}
_VIEWS_LOCK = threading.Lock()


def symbolic(scheme: FatScheme, m: int, degree_cap: int | None = None) -> SymbolicPower:
    """Shared :class:`SymbolicPower` view for (scheme, m)."""
    key = _digest({"field": scheme.field.spec.to_json(), "scheme": scheme.to_json(), "m": m, "cap": degree_cap})
    with _VIEWS_LOCK:
        v = _VIEWS.get(key)
        if v is None:
            v = _VIEWS[key] = SymbolicPower(scheme, m, degree_cap)
            if len(_VIEWS) > 256:
                _VIEWS.pop(next(iter(_VIEWS)))
        return v


def clear_views() -> None:
    with _VIEWS_LOCK:
        _VIEWS.clear()


def _as_view(x) -> IdealView:
    if isinstance(x, IdealView):
        return x
    raise TypeError(f"expected an ideal view, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# the operations
# ---------------------------------------------------------------------------


def symbolic_component(scheme: FatScheme, m: int, t: int) -> GradedBasis:
    return symbolic(scheme, m).component(t)


def hilbert_function(scheme: FatScheme, m: int, t: int) -> int:
    return symbolic(scheme, m).rank(t)


def fat_degree(scheme: FatScheme, m: int = 1) -> int:
    return scheme.fat_degree(m)


def regularity(scheme: FatScheme, m: int = 1) -> int:
    return symbolic(scheme, m).regularity()


def h_vector(scheme: FatScheme, m: int = 1) -> list:
    V = symbolic(scheme, m)
    tau = V.stabilization_degree()
    hf = [V.rank(t) for t in range(tau + 1)]
    return [hf[0]] + [hf[i] - hf[i - 1] for i in range(1, len(hf))]


def alpha(scheme: FatScheme, m: int = 1) -> int:
    return symbolic(scheme, m).alpha()


def _rational_forms(forms: list) -> list | None:
    """The forms over the base field when every coefficient lies there, else None."""
    F = forms[0].field
    if F.kind != "extension" or F.is_finite:
        return None
    out = []
    for f in forms:
        if not all(F.in_base(c) for c in f.terms.values()):
            return None
        out.append(Form(F.base, f.nvars, f.degree, {m: c[0] for m, c in f.terms.items()}))
    return out


def beta(scheme: FatScheme, m: int = 1) -> int:
    """Least t >= alpha with J_t free of a nonconstant common factor (plane only)."""
    if scheme.nvars != 3:
        raise ValueError("beta is only defined for schemes in the plane")
    V = symbolic(scheme, m)

    def compute():
        for t in range(V.alpha(), V.cap + 1):
            forms = V.component(t).forms
            # a gcd over the base field is a gcd over the extension as well
            forms = _rational_forms(forms) or forms
            if common_divisor(forms).degree == 0:
                return t
        raise DegreeCapExceeded(f"degree cap {V.cap} reached while computing beta")

    return V._memo_int(("beta",), compute)


def minimal_generators(view: IdealView) -> list:
    """[(t, GradedBasis of new generators in degree t)] for every degree with new generators."""
    view = _as_view(view)
    out = []
    rng = view.generator_degree_range()
    for t in rng:
        g = view.new_generators(t)
        if g.dim:
            out.append((t, g))
    if isinstance(view, SymbolicPower):
        extra = view.new_generators(rng.stop)
        if extra.dim:
            raise AssertionError(f"minimal generators found in degree {rng.stop}, past the regularity")
    return out


def ideal_generators(view: IdealView) -> list:
    """Minimal generators as a flat list of forms (ascending degree)."""
    return [f for _, g in minimal_generators(view) for f in g.forms]


def generator_degrees(view: IdealView) -> list:
    return [t for t, g in minimal_generators(view) for _ in range(g.dim)]


def power_component(generators: Sequence[Form], r: int, t: int) -> GradedBasis:
    return _family(generators).component(r, t)


def scaled_power_component(generators: Sequence[Form], r: int, k: int, t: int) -> GradedBasis:
    return _family(generators).scaled(r, k, t)


_FAMILIES: dict = {}


def _family(generators: Sequence[Form]) -> PowerFamily:
    key = _digest([generators[0].field.spec.to_json()] + [g.to_json() for g in generators])
    with _VIEWS_LOCK:
        fam = _FAMILIES.get(key)
        if fam is None:
            fam = _FAMILIES[key] = PowerFamily(generators)
            if len(_FAMILIES) > 64:
                _FAMILIES.pop(next(iter(_FAMILIES)))
        return fam


def power(generators: Sequence[Form], r: int, k: int = 0) -> PowerIdeal:
    """The view M^k * I^r with I generated by ``generators``."""
    return _family(generators).ideal(r, k)


def least_nonvanishing_degree(view: IdealView, q: Point, cap: int | None = None) -> int:
    return _as_view(view).least_nonvanishing_degree(q, cap)


def membership(f: Form, view: IdealView) -> bool:
    return _as_view(view).contains_form(f)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass
class Certificate:
    claim: dict
    verdict: str  # "holds" | "fails" | "inconclusive"
    witness: Form | None = None
    witness_degree: int | None = None
    checked_degrees: list = dc_field(default_factory=list)
    details: dict = dc_field(default_factory=dict)
    timings: dict = dc_field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    @property
    def fails(self) -> bool:
        return self.verdict == "fails"

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "verdict": self.verdict,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "witness_degree": self.witness_degree,
            "checked_degrees": list(self.checked_degrees),
            "details": self.details,
            "timings": self.timings,
        }


def _component_inside(J: GradedBasis, left: IdealView, right: IdealView) -> bool:
    if J.dim == 0:
        return True
    if right.arith is left.arith:
        return right.contains_rows(J.rows, J.degree)
    return all(right.contains_form(f) for f in J.forms)


def contains(left: IdealView, right: IdealView, degree_cap: int | None = None) -> Certificate:
    """Decide left ⊆ right by testing left's minimal generators degree by degree."""
    left, right = _as_view(left), _as_view(right)
    start = time.perf_counter()
    claim = {"kind": "containment", "left": left.describe(), "right": right.describe()}
    checked = []
    try:
        for t in _generator_degrees_lazy(left, degree_cap):
            gens = left.new_generators(t)
            if _component_inside(gens, left, right):
                if gens.dim:
                    checked.append(t)
                continue
            for f in gens.forms:
                if not right.contains_form(f):
                    return Certificate(
                        claim,
                        "fails",
                        witness=f.monic(),
                        witness_degree=t,
                        checked_degrees=checked,
                        details={"right_dim": right.dim(t), "left_dim": left.dim(t)},
                        timings={"seconds": time.perf_counter() - start},
                    )
            raise AssertionError(f"degree {t}: generators not contained but each one is")
    except DegreeCapExceeded as exc:
        return Certificate(claim, "inconclusive", checked_degrees=checked, details={"reason": str(exc)}, timings={"seconds": time.perf_counter() - start})
    return Certificate(claim, "holds", checked_degrees=checked, timings={"seconds": time.perf_counter() - start})


def _generator_degrees_lazy(view: IdealView, cap: int | None) -> Iterator[int]:
    """Generator degrees in ascending order, computing the regularity only if needed."""
    if isinstance(view, SymbolicPower):
        t = view.alpha()
        while True:
            if cap is not None and t > cap:
                raise DegreeCapExceeded(f"degree cap {cap} reached")
            yield t
            if t >= view.regularity():
                return
            t += 1
    else:
        for t in view.generator_degree_range():
            if cap is not None and t > cap:
                raise DegreeCapExceeded(f"degree cap {cap} reached")
            yield t


def verify_certificate(cert: Certificate, left: IdealView, right: IdealView) -> bool:
    """Re-check a failure witness: in left, not in the right component of its degree."""
    if not cert.fails:
        return True
    f = cert.witness
    return f.degree == cert.witness_degree and left.contains_form(f) and not right.component(f.degree).contains(f)


def equals_power_symbolic(scheme: FatScheme, k: int, t_max: int) -> Certificate:
    """Check (I^(k))^t = I^(kt) for t = 1..t_max by comparing graded dimensions."""
    start = time.perf_counter()
    claim = {"kind": "power-equals-symbolic", "k": k, "t_max": t_max}
    base = symbolic(scheme, k)
    fam = _family(ideal_generators(base))
    checked = []
    for t in range(1, t_max + 1):
        target = symbolic(scheme, k * t)
        top = target.regularity()
        for s in range(top + 1):
            L = fam.component(t, s)
            inside = (
                target.contains_rows(L.rows, s)
                if fam.view.arith is target.arith
                else all(target.contains_form(f) for f in L.forms)
            )
            if not inside:
                return Certificate(claim, "fails", details={"t": t, "degree": s, "reason": "product outside the symbolic power"})
            if L.dim != target.dim(s):
                return Certificate(claim, "fails", details={"t": t, "degree": s, "power_dim": L.dim, "symbolic_dim": target.dim(s)})
        checked.append({"t": t, "degrees": [0, top]})
    return Certificate(claim, "holds", checked_degrees=checked, timings={"seconds": time.perf_counter() - start})


def power_vanishes_at(base: IdealView, r: int, t: int, q: Point) -> Certificate:
    """Certify that every element of (I^r)_t vanishes at q, I being the ideal of ``base``.

    (I^r)_t is spanned by products mu * f_1 ... f_r with f_i in I of degree s_i
    and sum(s_i) <= t.  Such a product can be nonzero at q only when every f_i
    is, which needs s_i >= n, the least degree of an element of I nonzero at q.
    So t < r * n forces vanishing.
    """
    n = base.least_nonvanishing_degree(q)
    claim = {"kind": "power-vanishes-at-point", "r": r, "degree": t, "point": q.to_json()}
    details = {"least_nonvanishing_degree": n, "bound": r * n}
    verdict = "holds" if t < r * n else "inconclusive"
    return Certificate(claim, verdict, checked_degrees=[t], details=details)


# ---------------------------------------------------------------------------
# monomial ideals
# ---------------------------------------------------------------------------


def _divides(u, b) -> bool:
    return all(x <= y for x, y in zip(u, b))


def _minimalize(monos: Iterable[tuple]) -> list:
    ms = sorted(set(monos), key=lambda u: (sum(u), tuple(-x for x in u)))
    out: list = []
    for u in ms:
        if not any(_divides(v, u) for v in out):
            out.append(u)
    return out


def _monomial_power(gens: list, m: int) -> list:
    cur = [tuple(0 for _ in gens[0])]
    for _ in range(m):
        cur = _minimalize(tuple(a + b for a, b in zip(u, g)) for u in cur for g in gens)
    return cur


def monomial_symbolic(gens: Sequence[Sequence[int]], m: int) -> list:
    """Minimal generators of the saturation of I^m by the irrelevant ideal."""
    gens = _minimalize([tuple(g) for g in gens])
    P = _monomial_power(gens, m)
    n = len(gens[0])
    result = None
    for i in range(n):
        colon = _minimalize(tuple(0 if j == i else e for j, e in enumerate(u)) for u in P)
        if result is None:
            result = colon
        else:
            result = _minimalize(tuple(max(a, b) for a, b in zip(u, v)) for u in result for v in colon)
    return result


# ---------------------------------------------------------------------------
# basic double links
# ---------------------------------------------------------------------------


def basic_double_link(F: Form, B_gens: Sequence[Form], J_gens: Sequence[Form]) -> list:
    return [F * b for b in B_gens] + list(J_gens)


def linkage_data(N: int, field: Field):
    """(F, B, J) building all points of P^N over ``field`` except [1:0:...:0].

    F = x0; B generates the ideal of the points with x0 != 0 other than
    [1:0:...:0]; J is the cone over the ideal of all points of the hyperplane
    x0 = 0.
    """
    n = N + 1
    q = Point(field, [1] + [0] * N)
    B = ideal_generators(symbolic(affine_chart_points(N, field, q), 1))
    H = ideal_generators(symbolic(hyperplane_points(N, field), 1))
    J = [Form(field, n, h.degree, {(0,) + m: c for m, c in h.terms.items()}) for h in H]
    return Form.variable(field, n, 0), B, J
