"""Elimination kernels over finite fields.

Two implementations of every kernel live here.  The numba versions are
compiled on first use; setting ``FATPOINTS_DISABLE_NUMBA=1`` (or running
without numba installed) selects the pure-numpy versions instead.  Both keep
an echelon basis with pivot entries equal to 1 and zeros left of the pivot;
the numba path keeps it semi-reduced, the numpy path fully reduced.

Prime-field elimination keeps a fully reduced basis.  Incoming blocks are
reduced against it with float64 BLAS products (exact in chunks), and only the
elimination inside a block runs here, on int64 residues with deferred
reduction; accumulators stay below 2**63 for every p < 2**20 and blocks of at
most 4096 rows.
Kernels for non-prime fields work on element codes through lookup tables.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("FATPOINTS_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError
    import numba

    njit = numba.njit(cache=True, nogil=True)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised through the env flag
    numba = None
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

MAX_PRIME = 1 << 20


# ---------------------------------------------------------------------------
# numba kernels (plain python bodies; compiled below when numba is usable)
# ---------------------------------------------------------------------------


def _inv_mod(a, p):
    result = 1
    e = p - 2
    a = a % p
    while e:
        if e & 1:
            result = result * a % p
        a = a * a % p
        e >>= 1
    return result


def _modp_block_rref(X, p, limit, is_new, pivots):
    # rows found so far are compacted into X[:nr] and kept reduced against each other
    k, n = X.shape
    v = np.empty(n, np.int64)
    nr = 0
    for i in range(k):
        if nr >= limit:
            break
        for c in range(n):
            v[c] = X[i, c]
        for j in range(nr):
            c = v[pivots[j]] % p
            if c != 0:
                f = p - c
                for col in range(n):
                    v[col] += f * X[j, col]
        lead = -1
        for col in range(n):
            v[col] %= p
            if lead < 0 and v[col] != 0:
                lead = col
        if lead < 0:
            continue
        inv = _inv_mod(v[lead], p)
        for col in range(n):
            v[col] = v[col] * inv % p
        for j in range(nr):
            c = X[j, lead]
            if c != 0:
                f = p - c
                for col in range(n):
                    X[j, col] = (X[j, col] + f * v[col]) % p
        for col in range(n):
            X[nr, col] = v[col]
        pivots[nr] = lead
        is_new[i] = True
        nr += 1
    return nr


def _table_absorb(basis, piv_of_col, pivots, rank, rows, add, mul, neg, inv, target, is_new):
    ncols = rows.shape[1]
    v = np.empty(ncols, np.int64)
    for r in range(rows.shape[0]):
        if rank >= target:
            break
        for k in range(ncols):
            v[k] = rows[r, k]
        for col in range(ncols):
            b = piv_of_col[col]
            if b >= 0:
                c = v[col]
                if c != 0:
                    f = neg[c]
                    row = basis[b]
                    for k in range(col, ncols):
                        if row[k] != 0:
                            v[k] = add[v[k], mul[f, row[k]]]
        lead = -1
        for k in range(ncols):
            if v[k] != 0:
                lead = k
                break
        if lead < 0:
            continue
        iv = inv[v[lead]]
        for k in range(lead):
            basis[rank, k] = 0
        for k in range(lead, ncols):
            basis[rank, k] = mul[iv, v[k]]
        piv_of_col[lead] = rank
        pivots[rank] = lead
        is_new[r] = True
        rank += 1
    return rank


def _table_reduce(v, basis, piv_of_col, add, mul, neg, coords):
    ncols = v.shape[0]
    w = v.copy()
    for col in range(ncols):
        b = piv_of_col[col]
        if b >= 0:
            c = w[col]
            if c != 0:
                coords[b] = c
                f = neg[c]
                row = basis[b]
                for k in range(col, ncols):
                    if row[k] != 0:
                        w[k] = add[w[k], mul[f, row[k]]]
    return w


def _table_rref(basis, pivots, add, mul, neg):
    rank = basis.shape[0]
    ncols = basis.shape[1]
    for i in range(rank - 2, -1, -1):
        for k in range(i + 1, rank):
            pc = pivots[k]
            c = basis[i, pc]
            if c != 0:
                f = neg[c]
                for j in range(pc, ncols):
                    if basis[k, j] != 0:
                        basis[i, j] = add[basis[i, j], mul[f, basis[k, j]]]


if HAVE_NUMBA:
    _inv_mod = njit(_inv_mod)
    modp_block_rref_nb = njit(_modp_block_rref)
    table_absorb_nb = njit(_table_absorb)
    table_reduce_nb = njit(_table_reduce)
    table_rref_nb = njit(_table_rref)


# ---------------------------------------------------------------------------
# numpy fallbacks
# ---------------------------------------------------------------------------


def modp_block_rref_np(X, p, limit, is_new, pivots):
    """Numpy version of the in-block elimination; same contract as the numba kernel."""
    fp = float(p)
    nr = 0
    R = np.zeros((0, X.shape[1]), dtype=np.float64)
    for i in range(X.shape[0]):
        if nr >= limit:
            break
        x = X[i].astype(np.float64)
        if nr:
            x = np.mod(x - x[pivots[:nr]] @ R, fp)
        nz = np.flatnonzero(x)
        if nz.size == 0:
            continue
        c = int(nz[0])
        x = np.mod(x * _py_inv(int(x[c]), p), fp)
        if nr:
            R = np.mod(R - np.outer(R[:, c], x), fp)
        R = np.vstack([R, x])
        pivots[nr] = c
        is_new[i] = True
        nr += 1
    X[:nr] = R.astype(np.int64)
    return nr


def matmul_mod(A, B, p):
    """(A @ B) mod p for residue matrices, through float64 BLAS in exact chunks."""
    A = np.asarray(A)
    B = np.asarray(B)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.float64)
    if A.shape[1] == 0:
        return out.astype(np.int64)
    step = max(1, int((1 << 53) // ((p - 1) ** 2 + 1)) - 1)
    fp = float(p)
    for s in range(0, A.shape[1], step):
        out += A[:, s : s + step].astype(np.float64) @ B[s : s + step].astype(np.float64)
        np.mod(out, fp, out=out)
    return out.astype(np.int64)


def modp_block_rref(X, p, limit, is_new, pivots):
    if HAVE_NUMBA:
        return int(modp_block_rref_nb(X, p, limit, is_new, pivots))
    return modp_block_rref_np(X, p, limit, is_new, pivots)


def table_absorb_np(basis, piv_of_col, pivots, rank, rows, add, mul, neg, inv, target, is_new):
    ncols = rows.shape[1]
    for r in range(rows.shape[0]):
        if rank >= target:
            break
        v = rows[r].copy()
        while True:
            cand = np.flatnonzero((v != 0) & (piv_of_col >= 0))
            if cand.size == 0:
                break
            col = int(cand[0])
            row = basis[piv_of_col[col]]
            v = add[v, mul[neg[v[col]], row]]
        nz = np.flatnonzero(v)
        if nz.size == 0:
            continue
        lead = int(nz[0])
        basis[rank] = mul[inv[v[lead]], v]
        piv_of_col[lead] = rank
        pivots[rank] = lead
        is_new[r] = True
        rank += 1
    return rank


def table_reduce_np(v, basis, piv_of_col, add, mul, neg, coords):
    w = v.copy()
    while True:
        cand = np.flatnonzero((w != 0) & (piv_of_col >= 0))
        if cand.size == 0:
            return w
        col = int(cand[0])
        b = piv_of_col[col]
        coords[b] = w[col]
        w = add[w, mul[neg[w[col]], basis[b]]]


def table_rref_np(basis, pivots, add, mul, neg):
    rank = basis.shape[0]
    for i in range(rank - 2, -1, -1):
        for k in range(i + 1, rank):
            c = basis[i, pivots[k]]
            if c != 0:
                basis[i] = add[basis[i], mul[neg[c], basis[k]]]


def _py_inv(a: int, p: int) -> int:
    return pow(a % p, p - 2, p)


# ---------------------------------------------------------------------------
# dispatch helpers
# ---------------------------------------------------------------------------


def table_absorb(*args):
    return table_absorb_nb(*args) if HAVE_NUMBA else table_absorb_np(*args)


def table_reduce(*args):
    return table_reduce_nb(*args) if HAVE_NUMBA else table_reduce_np(*args)


def table_rref(*args):
    return table_rref_nb(*args) if HAVE_NUMBA else table_rref_np(*args)
