"""Exact dense linear algebra over the scalar fields.

The workhorse is :class:`Echelon`, an incrementally grown echelon basis of a
row space.  :func:`make_echelon` picks a backend for the field:

* prime fields: int64 residues through the kernels in :mod:`._kernels`
* other finite fields: element codes through lookup-table kernels
* Q: fraction-free RREF in FLINT (pure-Python fallback when python-flint is missing)
* cyclotomic extensions of Q: spaces defined over Q are handled over Q;
  everything else falls back to generic elimination in the extension
* anything else: generic Gauss-Jordan on Python scalars

Vectors are "native": int64 code arrays for finite fields, lists of scalars
otherwise.  :class:`Codec` converts between native vectors and scalar lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels as K
from .scalar import ExtensionField, Field, field_tables

try:
    import flint

    HAVE_FLINT = True
except ImportError:  # pragma: no cover
    flint = None
    HAVE_FLINT = False

__all__ = [
    "Codec",
    "Echelon",
    "EchelonForm",
    "make_echelon",
    "echelon",
    "kernel",
    "in_span",
    "matrix_times_vector",
]

TABLE_LIMIT = 1 << 12


# ---------------------------------------------------------------------------
# native vector codecs
# ---------------------------------------------------------------------------


class Codec:
    """Conversion between scalar lists and a native vector format.

    Modes: ``coded`` (int64 element codes, finite fields), ``integer`` (object
    arrays of integers standing for rational vectors up to scale) and
    ``scalar`` (plain lists of field elements).
    """

    def __init__(self, field: Field, coded: bool | None = None, mode: str | None = None):
        self.field = field
        if mode is None:
            if coded is None:
                coded = field.is_finite
            mode = "coded" if coded else "scalar"
        self.mode = mode
        self.coded = mode == "coded"

    def encode(self, vec) -> object:
        if self.mode == "coded":
            if isinstance(vec, np.ndarray):
                return vec.astype(np.int64, copy=False)
            F = self.field
            return np.fromiter((F.code(x) for x in vec), dtype=np.int64, count=len(vec))
        if self.mode == "integer":
            return np.array(_int_rows([vec])[0], dtype=object)
        return list(vec)

    def encode_rows(self, rows) -> object:
        if self.mode == "coded":
            if isinstance(rows, np.ndarray):
                return rows.astype(np.int64, copy=False)
            F = self.field
            rows = list(rows)
            if not rows:
                return np.zeros((0, 0), dtype=np.int64)
            return np.array([[F.code(x) for x in r] for r in rows], dtype=np.int64)
        if self.mode == "integer":
            rows = _int_rows(rows)
            return np.array(rows, dtype=object).reshape(len(rows), -1) if rows else np.zeros((0, 0), dtype=object)
        return [list(r) for r in rows]

    def decode(self, vec) -> list:
        F = self.field
        if self.mode == "coded":
            return [F.decode(int(c)) for c in vec]
        if self.mode == "integer":
            return [F(int(x)) for x in vec]
        return list(vec)

    def is_zero(self, vec) -> bool:
        if self.mode != "scalar":
            return not any(x != 0 for x in vec)
        F = self.field
        return all(F.is_zero(x) for x in vec)

    def zeros(self, n: int):
        if self.mode == "coded":
            return np.zeros(n, dtype=np.int64)
        if self.mode == "integer":
            return np.zeros(n, dtype=object)
        return [self.field.zero] * n


# ---------------------------------------------------------------------------
# echelon backends
# ---------------------------------------------------------------------------


class Echelon:
    """Incremental echelon basis of a subspace of field^ncols."""

    field: Field
    ncols: int

    @property
    def rank(self) -> int:
        raise NotImplementedError

    def extend(self, rows, target: int | None = None) -> int:
        """Absorb rows (stopping early once ``rank == target``); returns the new rank."""
        raise NotImplementedError

    def add(self, v) -> bool:
        """Absorb one vector; True when it was independent of the current basis."""
        raise NotImplementedError

    def reduce(self, v):
        """(residual, coords) with v = coords . basis + residual."""
        raise NotImplementedError

    def complement(self, rows, target: int | None = None) -> list:
        """Absorb rows greedily; indices of those that were independent.

        ``target`` is the dimension of a space known to contain the span and
        every row, so the scan can stop once it is reached.
        """
        out = []
        for i, r in enumerate(rows):
            if target is not None and self.rank >= target:
                break
            if self.add(r):
                out.append(i)
        return out

    def contains(self, v) -> bool:
        res, _ = self.reduce(v)
        return self.codec.is_zero(res)

    def contains_all(self, rows) -> bool:
        return all(self.contains(r) for r in rows)

    def rref(self):
        """(rows, pivots): the reduced row-echelon basis, rows sorted by pivot."""
        raise NotImplementedError

    def basis_rows(self):
        """Current basis rows in native format (any echelon shape)."""
        return self.rref()[0]

    def kernel(self):
        """Native basis of the right null space {v : row . v = 0 for all rows}."""
        raise NotImplementedError


class ModpEchelon(Echelon):
    """Prime-field echelon form, fully reduced, grown block by block."""

    BLOCK = 256

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.codec = Codec(field)
        self.p = field.p
        self.ncols = ncols
        self._B = np.zeros((0, ncols), dtype=np.int64)
        self._piv = np.zeros(0, dtype=np.int64)

    @property
    def rank(self):
        return len(self._piv)

    def _absorb_block(self, X, limit):
        p = self.p
        if self.rank:
            X = np.mod(X - K.matmul_mod(X[:, self._piv], self._B, p), p)
        X = np.ascontiguousarray(X, dtype=np.int64)
        is_new = np.zeros(X.shape[0], dtype=np.bool_)
        piv = np.zeros(min(X.shape[0], limit), dtype=np.int64)
        nr = K.modp_block_rref(X, p, limit, is_new, piv)
        if nr == 0:
            return is_new
        R, piv = X[:nr], piv[:nr]
        if self.rank:
            self._B = np.mod(self._B - K.matmul_mod(self._B[:, piv], R, p), p)
        self._B = np.vstack([self._B, R])
        self._piv = np.concatenate([self._piv, piv])
        return is_new

    def extend(self, rows, target=None):
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[0] == 0:
            return self.rank
        if rows.shape[1] != self.ncols:
            raise ValueError(f"dimension mismatch: {rows.shape[1]} columns, expected {self.ncols}")
        target = self.ncols if target is None else min(target, self.ncols)
        rows = np.mod(rows, self.p)
        for s in range(0, rows.shape[0], self.BLOCK):
            if self.rank >= target:
                break
            self._absorb_block(rows[s : s + self.BLOCK], target - self.rank)
        return self.rank

    def add(self, v):
        before = self.rank
        self.extend(np.asarray(v, dtype=np.int64)[None, :])
        return self.rank > before

    def reduce(self, v):
        v = np.mod(np.asarray(v, dtype=np.int64), self.p)
        if v.shape[0] != self.ncols:
            raise ValueError("dimension mismatch")
        coords = v[self._piv].copy()
        if not self.rank:
            return v, coords
        w = np.mod(v - K.matmul_mod(coords[None, :], self._B, self.p)[0], self.p)
        return w, coords

    def contains(self, v):
        w, _ = self.reduce(v)
        return not np.any(w)

    def contains_all(self, rows):
        rows = np.mod(np.asarray(rows, dtype=np.int64), self.p)
        if rows.ndim != 2 or rows.shape[1] != self.ncols:
            raise ValueError("dimension mismatch")
        if not self.rank:
            return not np.any(rows)
        W = np.mod(rows - K.matmul_mod(rows[:, self._piv], self._B, self.p), self.p)
        return not np.any(W)

    def rref(self):
        order = np.argsort(self._piv, kind="stable")
        return self._B[order].copy(), self._piv[order].copy()

    def basis_rows(self):
        return self._B

    def kernel(self):
        rows, piv = self.rref()
        return _kernel_from_rref_coded(rows, piv, self.ncols, lambda c: np.mod(-c, self.p))


class TableEchelon(Echelon):
    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.codec = Codec(field)
        self.ncols = ncols
        self.add_t, self.mul_t, self.neg_t, self.inv_t = field_tables(field)
        self._rank = 0
        self._basis = np.zeros((min(ncols, 64), ncols), dtype=np.int64)
        self._pivots = np.zeros(self._basis.shape[0], dtype=np.int64)
        self._piv_of_col = -np.ones(ncols, dtype=np.int64)

    @property
    def rank(self):
        return self._rank

    def _reserve(self, extra):
        need = min(self.ncols, self._rank + extra)
        cap = self._basis.shape[0]
        if need <= cap:
            return
        cap = max(need, min(self.ncols, 2 * cap))
        basis = np.zeros((cap, self.ncols), dtype=np.int64)
        basis[: self._rank] = self._basis[: self._rank]
        pivots = np.zeros(cap, dtype=np.int64)
        pivots[: self._rank] = self._pivots[: self._rank]
        self._basis, self._pivots = basis, pivots

    def extend(self, rows, target=None):
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[0] == 0:
            return self._rank
        if rows.shape[1] != self.ncols:
            raise ValueError("dimension mismatch")
        target = self.ncols if target is None else min(target, self.ncols)
        if self._rank >= target:
            return self._rank
        self._reserve(rows.shape[0])
        is_new = np.zeros(rows.shape[0], dtype=np.bool_)
        self._rank = int(
            K.table_absorb(self._basis, self._piv_of_col, self._pivots, self._rank, rows, self.add_t, self.mul_t, self.neg_t, self.inv_t, target, is_new)
        )
        return self._rank

    def add(self, v):
        before = self._rank
        self.extend(np.asarray(v, dtype=np.int64)[None, :])
        return self._rank > before

    def reduce(self, v):
        v = np.asarray(v, dtype=np.int64)
        coords = np.zeros(self._rank, dtype=np.int64)
        w = K.table_reduce(v, self._basis[: self._rank], self._piv_of_col, self.add_t, self.mul_t, self.neg_t, coords)
        return w, coords

    def rref(self):
        pivots = self._pivots[: self._rank]
        order = np.argsort(pivots, kind="stable")
        rows = self._basis[: self._rank][order].copy()
        piv = pivots[order].copy()
        K.table_rref(rows, piv, self.add_t, self.mul_t, self.neg_t)
        return rows, piv

    def basis_rows(self):
        return self._basis[: self._rank]

    def kernel(self):
        rows, piv = self.rref()
        return _kernel_from_rref_coded(rows, piv, self.ncols, lambda c: self.neg_t[c])


def _kernel_from_rref_coded(rows, piv, ncols, neg):
    free = np.setdiff1d(np.arange(ncols), piv)
    ker = np.zeros((free.size, ncols), dtype=np.int64)
    if free.size == 0:
        return ker
    ker[np.arange(free.size), free] = 1
    if len(piv):
        ker[:, piv] = neg(rows[:, free]).T
    return ker


class ExactEchelon(Echelon):
    """Gauss-Jordan on Python scalars; keeps the basis fully reduced."""

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.codec = Codec(field, coded=False)
        self.ncols = ncols
        self._rows: list = []
        self._piv: list = []

    @property
    def rank(self):
        return len(self._rows)

    def reduce(self, v):
        F = self.field
        w = list(v)
        if len(w) != self.ncols:
            raise ValueError("dimension mismatch")
        coords = []
        for row, pc in zip(self._rows, self._piv):
            c = w[pc]
            coords.append(c)
            if not F.is_zero(c):
                for k in range(pc, self.ncols):
                    if not F.is_zero(row[k]):
                        w[k] = F.sub(w[k], F.mul(c, row[k]))
        return w, coords

    def add(self, v):
        F = self.field
        w, _ = self.reduce(v)
        lead = next((k for k, x in enumerate(w) if not F.is_zero(x)), None)
        if lead is None:
            return False
        inv = F.inv(w[lead])
        w = [F.mul(inv, x) for x in w]
        for row in self._rows:
            c = row[lead]
            if not F.is_zero(c):
                for k in range(self.ncols):
                    if not F.is_zero(w[k]):
                        row[k] = F.sub(row[k], F.mul(c, w[k]))
        self._rows.append(w)
        self._piv.append(lead)
        return True

    def extend(self, rows, target=None):
        target = self.ncols if target is None else target
        for r in rows:
            if self.rank >= target:
                break
            self.add(r)
        return self.rank

    def rref(self):
        order = sorted(range(len(self._piv)), key=self._piv.__getitem__)
        return [list(self._rows[i]) for i in order], [self._piv[i] for i in order]

    def kernel(self):
        F = self.field
        rows, piv = self.rref()
        pset = set(piv)
        out = []
        for f in range(self.ncols):
            if f in pset:
                continue
            v = [F.zero] * self.ncols
            v[f] = F.one
            for row, pc in zip(rows, piv):
                v[pc] = F.neg(row[f])
            out.append(v)
        return out


class IntegerEchelon(Echelon):
    """Row spaces over Q held as integer rows, eliminated by FLINT.

    Rows are object arrays of integers and may be rescaled freely: only the
    row space matters.  The basis is kept as the reduced echelon form with
    each row scaled to a primitive integer vector, so entries stay as small
    as the row space allows.
    """

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.codec = Codec(field, mode="integer")
        self.ncols = ncols
        self._R = None
        self._piv: list = []
        self._lead: list = []
        self._lcm = 1

    @property
    def rank(self):
        return len(self._piv)

    def _sieve(self, rows) -> list:
        """Indices of rows whose residuals are independent mod a large prime, hence over Q."""
        new = flint.fmpz_mat(rows)
        if self._R is not None:
            # residuals vanish on the current pivots, so they extend the basis iff they are independent
            L = self._lcm
            ps = [(p, L // a) for p, a in zip(self._piv, self._lead)]
            C = flint.fmpz_mat([[r[p] * s for p, s in ps] for r in rows])
            new = new * L - C * self._R
        T, rank_p = flint.nmod_mat(new, _PRIME).transpose().rref()
        return _pivots(T, rank_p)

    def _absorb(self, rows):
        keep = self._sieve(rows)
        if not keep and self.contains_all(rows):
            return
        old = self._R.tolist() if self._R is not None else []
        kept = set(keep)
        self._set_basis(flint.fmpz_mat(old + [rows[k] for k in keep]))
        if len(keep) < len(rows) and not self.contains_all([r for k, r in enumerate(rows) if k not in kept]):
            # unlucky prime: eliminate everything exactly
            self._set_basis(flint.fmpz_mat(old + rows))

    def complement(self, rows, target=None):
        rows = _int_rows(rows)
        if not rows or (target is not None and self.rank >= target):
            return []
        keep = self._sieve(rows)
        if target is not None:
            keep = keep[: target - self.rank]
        saved = (self._R, self._piv, self._lead, self._lcm)
        if keep:
            old = self._R.tolist() if self._R is not None else []
            self._set_basis(flint.fmpz_mat(old + [rows[k] for k in keep]))
        kept = set(keep)
        if (target is not None and self.rank >= target) or self.contains_all([r for k, r in enumerate(rows) if k not in kept]):
            return keep
        # unlucky prime: redo greedily with exact checks
        self._R, self._piv, self._lead, self._lcm = saved
        return super().complement(rows, target)

    def _set_basis(self, Z):
        R, _, rank = Z.rref()
        if rank == 0:
            self._R, self._piv, self._lead, self._lcm = None, [], [], 1
            return
        top = []
        for row in R.tolist()[:rank]:
            row = list(map(int, row))
            g = math.gcd(*row)
            top.append([x // g for x in row] if g != 1 else row)
        self._install(top)

    def _install(self, top):
        if not top:
            self._R, self._piv, self._lead, self._lcm = None, [], [], 1
            return
        self._piv = [next(k for k, x in enumerate(row) if x != 0) for row in top]
        self._lead = [row[p] for row, p in zip(top, self._piv)]
        self._lcm = math.lcm(*self._lead)
        self._R = flint.fmpz_mat(top)

    def extend(self, rows, target=None):
        rows = _int_rows(rows)
        if not rows:
            return self.rank
        if any(len(r) != self.ncols for r in rows):
            raise ValueError(f"dimension mismatch: expected {self.ncols} columns")
        target = self.ncols if target is None else min(target, self.ncols)
        if self.rank < target:
            self._absorb(rows)
        return self.rank

    def _residual(self, w):
        """lcm * w minus its projection onto the basis, for an integer row w."""
        if self._R is None:
            return list(w)
        L = self._lcm
        c = flint.fmpz_mat(1, self.rank, [w[p] * (L // a) for p, a in zip(self._piv, self._lead)])
        prod = (c * self._R).entries()
        return [L * x - y for x, y in zip(w, prod)]

    def contains(self, v):
        w = _int_rows([v])
        if not w:
            return True
        return all(x == 0 for x in self._residual(w[0]))

    def contains_all(self, rows):
        W = _int_rows(rows)
        if not W:
            return True
        if self._R is None:
            return all(x == 0 for r in W for x in r)
        L = self._lcm
        ps = [(p, L // a) for p, a in zip(self._piv, self._lead)]
        C = flint.fmpz_mat([[r[p] * s for p, s in ps] for r in W])
        return (C * self._R) == flint.fmpz_mat(W) * L

    def add(self, v):
        if self.contains(v):
            return False
        self.extend([v])
        return True

    def reduce(self, v):
        v = [Fraction(x) for x in v]
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        lam = _lcm_den(v)
        w = [int(x * lam) for x in v]
        res = self._residual(w)
        scale = self._lcm * lam
        # the basis is a scaled reduced echelon form, so coordinates are pivot entries of v
        return [Fraction(int(x), int(scale)) for x in res], [v[p] for p in self._piv]

    def rref(self):
        if self._R is None:
            return np.zeros((0, self.ncols), dtype=object), np.zeros(0, dtype=np.int64)
        rows = np.array([[int(x) for x in r] for r in self._R.tolist()], dtype=object).reshape(self.rank, self.ncols)
        return rows, np.array(self._piv, dtype=np.int64)

    def kernel(self):
        pset = set(self._piv)
        free = [f for f in range(self.ncols) if f not in pset]
        out = np.zeros((len(free), self.ncols), dtype=object)
        if not free:
            return out
        R = self._R.tolist() if self._R is not None else []
        L = self._lcm
        for i, f in enumerate(free):
            out[i, f] = L
            for row, pc, a in zip(R, self._piv, self._lead):
                out[i, pc] = -int(row[f]) * (L // a)
        return _primitive_rows(out)


_PRIME = (1 << 62) - 57


def _pivots(T, rank: int) -> list:
    """Pivot columns of the first ``rank`` rows of a reduced echelon nmod_mat."""
    out = []
    j = 0
    for i in range(rank):
        while not int(T[i, j]):
            j += 1
        out.append(j)
        j += 1
    return out


def modular_rank(rows) -> int:
    """Rank mod a large prime of integer rows; a lower bound for the rank over Q."""
    rows = _int_rows(rows)
    if not rows:
        return 0
    return flint.nmod_mat(flint.fmpz_mat(rows), _PRIME).rank()


def _lcm_den(vals) -> int:
    lam = 1
    for x in vals:
        d = x.denominator if isinstance(x, Fraction) else 1
        if d != 1:
            lam = lam * d // math.gcd(lam, d)
    return lam


def _int_rows(rows) -> list:
    """Integer rows (lists) from object arrays, int lists or Fraction lists, each scaled to integers."""
    if isinstance(rows, np.ndarray):
        if rows.dtype != object:
            return rows.tolist()
        if set(map(type, rows.ravel().tolist())) <= {int}:
            return rows.tolist()
    out = []
    for r in rows:
        r = list(r)
        if any(type(x) is not int and isinstance(x, Fraction) and x.denominator != 1 for x in r):
            lam = _lcm_den(r)
            r = [int(x * lam) for x in r]
        else:
            r = [int(x) for x in r]
        out.append(r)
    return out


def _primitive_rows(rows: np.ndarray) -> np.ndarray:
    """Divide each integer row by the gcd of its entries (sign kept)."""
    out = np.empty(rows.shape, dtype=object)
    for i in range(rows.shape[0]):
        r = [int(x) for x in rows[i]]
        g = 0
        for x in r:
            if x:
                g = math.gcd(g, x)
        g = g or 1
        out[i] = [x // g for x in r]
    return out


class DescentEchelon(Echelon):
    """Spaces over a number field K = Q[t]/(m) that are defined over Q.

    Holds a rational space W_Q and represents K (x) W_Q.  Rational vectors go
    straight into W_Q.  A vector with irrational entries is split into its
    t-coefficient parts, which is only sound when the final K-space is stable
    under Gal(K/Q) (``galois_stable``); otherwise the object switches itself
    to generic elimination over K.
    """

    def __init__(self, field: ExtensionField, ncols: int, galois_stable: bool = False):
        self.field = field
        self.codec = Codec(field)
        self.ncols = ncols
        self.galois_stable = galois_stable
        self._inner = _rational_echelon(field.base, ncols)
        self._generic: ExactEchelon | None = None

    @property
    def rank(self):
        return self._generic.rank if self._generic else self._inner.rank

    def _parts(self, v):
        d = self.field.degree
        return [[x[j] for x in v] for j in range(d)]

    def _is_rational(self, v):
        return all(self.field.in_base(x) for x in v)

    def _lift(self, r):
        return [self.field.embed(x if isinstance(x, Fraction) else Fraction(int(x))) for x in r]

    def _switch_to_generic(self):
        G = ExactEchelon(self.field, self.ncols)
        rows, _ = self._inner.rref()
        for r in rows:
            G.add(self._lift(r))
        self._generic = G

    def extend(self, rows, target=None):
        rows = [list(r) for r in rows]
        if self._generic is not None:
            return self._generic.extend(rows, target)
        rational, rest = [], []
        for r in rows:
            if self._is_rational(r):
                rational.append([x[0] for x in r])
            elif self.galois_stable:
                rational.extend(self._parts(r))
            else:
                rest.append(r)
        if rational:
            self._inner.extend(rational)
        if rest:
            self._switch_to_generic()
            return self._generic.extend(rest, target)
        return self.rank

    def add(self, v):
        if self.contains(v):
            return False
        self.extend([v])
        return True

    def reduce(self, v):
        if self._generic is not None:
            return self._generic.reduce(v)
        Kf = self.field
        parts = self._parts(v)
        reduced = [self._inner.reduce(p) for p in parts]
        res = [tuple(reduced[j][0][k] for j in range(Kf.degree)) for k in range(self.ncols)]
        coords = [tuple(reduced[j][1][i] for j in range(Kf.degree)) for i in range(self._inner.rank)]
        return res, coords

    def contains(self, v):
        if self._generic is not None:
            return self._generic.contains(v)
        return all(self._inner.contains(p) for p in self._parts(v))

    def rref(self):
        if self._generic is not None:
            return self._generic.rref()
        rows, piv = self._inner.rref()
        return [self._lift(r) for r in rows], piv

    def kernel(self):
        if self._generic is not None:
            return self._generic.kernel()
        return [self._lift(r) for r in self._inner.kernel()]


def _rational_echelon(field, ncols):
    if HAVE_FLINT:
        return IntegerEchelon(field, ncols)
    return ExactEchelon(field, ncols)


def make_echelon(field: Field, ncols: int, galois_stable: bool = False, generic: bool = False) -> Echelon:
    """Pick the echelon backend for ``field``; ``generic`` forces pure-Python elimination."""
    if generic:
        return ExactEchelon(field, ncols)
    if field.kind == "prime" and field.p < K.MAX_PRIME:
        return ModpEchelon(field, ncols)
    if field.is_finite and field.cardinality <= TABLE_LIMIT:
        return TableEchelon(field, ncols)
    if field.kind == "rational":
        return _rational_echelon(field, ncols)
    if field.kind == "extension" and field.base.kind == "rational" and field.cyclotomic_order is not None:
        return DescentEchelon(field, ncols, galois_stable)
    return ExactEchelon(field, ncols)


# ---------------------------------------------------------------------------
# the public operations, on scalar lists
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EchelonForm:
    rank: int
    rows: list  # reduced row-echelon rows (scalar lists)
    pivots: list
    ncols: int


def _ncols_of(M, ncols):
    if ncols is not None:
        return ncols
    if isinstance(M, np.ndarray):
        return M.shape[1]
    M = list(M)
    if not M:
        raise ValueError("ncols is required for an empty matrix")
    return len(M[0])


def echelon(M: Sequence, field: Field, ncols: int | None = None, generic: bool = False) -> EchelonForm:
    """Reduced row-echelon form of the row space of M."""
    n = _ncols_of(M, ncols)
    E = make_echelon(field, n, generic=generic)
    codec = E.codec
    rows = list(M) if not isinstance(M, np.ndarray) else M
    if len(rows):
        E.extend(codec.encode_rows(rows))
    R, piv = E.rref()
    F = field
    rows = []
    for r, p in zip(R, piv):
        r = codec.decode(r)
        lead = r[int(p)]
        if lead != F.one:
            inv = F.inv(lead)
            r = [F.mul(inv, x) for x in r]
        rows.append(r)
    return EchelonForm(E.rank, rows, [int(p) for p in piv], n)


def kernel(M: Sequence, field: Field, ncols: int | None = None, generic: bool = False) -> list:
    """Basis of the right null space of M (scalar lists)."""
    n = _ncols_of(M, ncols)
    E = make_echelon(field, n, generic=generic)
    codec = E.codec
    rows = list(M) if not isinstance(M, np.ndarray) else M
    if len(rows):
        E.extend(codec.encode_rows(rows))
    return [codec.decode(v) for v in E.kernel()]


def in_span(v: Sequence, B: EchelonForm, field: Field):
    """(True, coords) when v is in the row space of the reduced basis B, else (False, None)."""
    if len(v) != B.ncols:
        raise ValueError(f"dimension mismatch: vector of length {len(v)}, basis has {B.ncols} columns")
    F = field
    coords = [v[p] for p in B.pivots]
    acc = [F.zero] * B.ncols
    for c, row in zip(coords, B.rows):
        if F.is_zero(c):
            continue
        for k, x in enumerate(row):
            if not F.is_zero(x):
                acc[k] = F.add(acc[k], F.mul(c, x))
    if all(a == b for a, b in zip(acc, v)):
        return True, coords
    return False, None


def matrix_times_vector(M: Sequence, v: Sequence, field: Field) -> list:
    F = field
    out = []
    for row in M:
        acc = F.zero
        for a, b in zip(row, v):
            if not F.is_zero(a) and not F.is_zero(b):
                acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return out
