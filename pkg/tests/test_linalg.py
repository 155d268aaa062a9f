from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fatpoints import _kernels as K
from fatpoints.linalg import echelon, in_span, kernel, make_echelon, matrix_times_vector
from fatpoints.scalar import cyclotomic_field, finite_field, prime_field, rational_field

FIELDS = {
    "F7": prime_field(7),
    "F65521": prime_field(65521),
    "F9": finite_field(3, 2),
    "Q": rational_field(),
    "Qz3": cyclotomic_field(3),
}


def random_matrix(F, rows, cols, rank, rng):
    """rows x cols matrix of rank at most ``rank``, built as a product."""
    A = [[F.random_element(rng) for _ in range(rank)] for _ in range(rows)]
    B = [[F.random_element(rng) for _ in range(cols)] for _ in range(rank)]
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = F.zero
            for k in range(rank):
                acc = F.add(acc, F.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(row)
    return out


@pytest.mark.property
@pytest.mark.parametrize("name", sorted(FIELDS))
@settings(max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), shape=st.tuples(st.integers(1, 9), st.integers(1, 9), st.integers(0, 6)))
def test_rank_kernel_identities(name, seed, shape):
    F = FIELDS[name]
    rows, cols, r = shape
    rng = np.random.default_rng(seed)
    M = random_matrix(F, rows, cols, r, rng)
    E = echelon(M, F, cols)
    N = kernel(M, F, cols)
    assert E.rank + len(N) == cols
    assert E.rank <= min(rows, cols, r)
    for v in N:
        assert all(F.is_zero(x) for x in matrix_times_vector(M, v, F))
    # kernel vectors are independent
    assert echelon(N, F, cols).rank == len(N) if N else True
    # every row of M lies in the span of the reduced basis
    for row in M:
        ok, _ = in_span(row, E, F)
        assert ok
    # reduced form is canonical: re-reducing it changes nothing
    again = echelon(E.rows, F, cols) if E.rows else E
    assert again.rows == E.rows and again.pivots == E.pivots


@pytest.mark.property
@pytest.mark.parametrize("name", sorted(FIELDS))
@settings(max_examples=25)
@given(seed=st.integers(0, 2**32 - 1))
def test_backend_agrees_with_generic(name, seed):
    F = FIELDS[name]
    rng = np.random.default_rng(seed)
    rows, cols = int(rng.integers(1, 8)), int(rng.integers(1, 8))
    M = random_matrix(F, rows, cols, int(rng.integers(0, 6)), rng)
    fast = echelon(M, F, cols)
    slow = echelon(M, F, cols, generic=True)
    assert fast.rows == slow.rows and fast.pivots == slow.pivots


@pytest.mark.parametrize("p", [0, 7, 101])
def test_rref_matches_oracle(p):
    F = rational_field() if p == 0 else prime_field(p)
    rng = np.random.default_rng(p + 1)
    for _ in range(15):
        rows, cols = int(rng.integers(1, 10)), int(rng.integers(1, 10))
        M = random_matrix(F, rows, cols, int(rng.integers(0, 7)), rng)
        want_rows, want_piv = oracles.rref(M, cols, p)
        got = echelon(M, F, cols)
        assert got.pivots == want_piv
        assert [[Fraction(x) if p == 0 else int(x) for x in r] for r in got.rows] == want_rows


def test_incremental_echelon_contains_and_reduce():
    F = prime_field(13)
    rng = np.random.default_rng(0)
    E = make_echelon(F, 6)
    codec = E.codec
    basis = random_matrix(F, 4, 6, 3, rng)
    E.extend(codec.encode_rows(basis))
    assert E.rank == 3
    combo = [F.add(F.mul(2, a), b) for a, b in zip(basis[0], basis[1])]
    assert E.contains(codec.encode(combo))
    assert E.contains_all(codec.encode_rows([combo, basis[2]]))
    outside = [1, 0, 0, 0, 0, 0]
    if not E.contains(codec.encode(outside)):
        assert not E.contains_all(codec.encode_rows([combo, outside]))
        assert E.add(codec.encode(outside))
        assert E.rank == 4
    assert not E.add(codec.encode(combo))


def test_extend_target_stops_early():
    F = prime_field(7)
    rng = np.random.default_rng(2)
    M = random_matrix(F, 20, 10, 8, rng)
    E = make_echelon(F, 10)
    E.extend(E.codec.encode_rows(M), target=3)
    assert 3 <= E.rank <= 8


def test_blocked_elimination_large_prime():
    # more rows than one elimination block, near the largest supported prime
    p = 1048573
    F = prime_field(p)
    rng = np.random.default_rng(7)
    A = rng.integers(0, p, size=(300, 40)).astype(np.int64)
    B = rng.integers(0, p, size=(40, 320)).astype(np.int64)
    M = K.matmul_mod(A, B, p)
    E = make_echelon(F, 320)
    E.extend(M)
    assert E.rank == 40
    assert echelon(M[:60].tolist(), F, 320).rank == 40


def test_matmul_mod_exact():
    rng = np.random.default_rng(9)
    for p in (2, 7, 65521, 1048573):
        A = rng.integers(0, p, size=(17, 300)).astype(np.int64)
        B = rng.integers(0, p, size=(300, 11)).astype(np.int64)
        want = (A.astype(object) @ B.astype(object)) % p
        assert (K.matmul_mod(A, B, p) == want.astype(np.int64)).all()


def test_numpy_and_compiled_block_kernels_agree():
    rng = np.random.default_rng(21)
    p = 101
    for _ in range(10):
        X = rng.integers(0, p, size=(12, 15)).astype(np.int64)
        X[5] = (2 * X[1] + X[3]) % p
        args = dict(p=p, limit=12, is_new=np.zeros(12, dtype=np.bool_), pivots=np.full(12, -1, dtype=np.int64))
        X1, X2 = X.copy(), X.copy()
        a1 = {k: (v.copy() if isinstance(v, np.ndarray) else v) for k, v in args.items()}
        a2 = {k: (v.copy() if isinstance(v, np.ndarray) else v) for k, v in args.items()}
        r1 = K.modp_block_rref(X1, a1["p"], a1["limit"], a1["is_new"], a1["pivots"])
        r2 = K.modp_block_rref_np(X2, a2["p"], a2["limit"], a2["is_new"], a2["pivots"])
        assert r1 == r2
        assert (X1 == X2).all() and (a1["pivots"] == a2["pivots"]).all()


def test_cyclotomic_descent_matches_generic_on_rational_rows():
    K3 = cyclotomic_field(3)
    Q = rational_field()
    rng = np.random.default_rng(4)
    M = random_matrix(Q, 5, 7, 4, rng)
    MK = [[K3.embed(x) for x in row] for row in M]
    a = echelon(MK, K3, 7)
    b = echelon(MK, K3, 7, generic=True)
    assert a.rows == b.rows and a.rank == 4


def test_empty_and_dimension_errors():
    F = prime_field(5)
    assert echelon([], F, 4).rank == 0
    assert len(kernel([], F, 4)) == 4
    with pytest.raises(ValueError):
        echelon([], F)
    E = echelon([[1, 0, 0]], F, 3)
    with pytest.raises(ValueError):
        in_span([1, 0], E, F)


def test_integer_echelon_survives_unlucky_prime(monkeypatch):
    import fatpoints.linalg as L

    # rows dependent mod 5 but independent over Q
    rows = [[1, 2, 3], [2, 4, 11], [0, 5, 5]]
    assert len(oracles.rref(rows, 3, 0)[1]) == 3
    assert len(oracles.rref(rows, 3, 5)[1]) == 1
    monkeypatch.setattr(L, "_PRIME", 5)
    E = make_echelon(rational_field(), 3)
    E.extend(np.array(rows, dtype=object))
    assert E.rank == 3


@pytest.mark.parametrize("big", [10**25, 3**70 + 1])
def test_integer_echelon_with_large_reduced_entries(big):
    rows = [[big, 1, 0, 7], [1, 0, big + 2, 1], [0, 3, 1, big]]
    E = make_echelon(rational_field(), 4)
    E.extend(np.array(rows, dtype=object))
    R, piv = oracles.rref(rows, 4, 0)
    got, gpiv = E.rref()
    assert list(gpiv) == piv
    for g, r, pc in zip(got, R, piv):
        scale = Fraction(int(g[pc]))
        assert [Fraction(int(x)) / scale for x in g] == r


@pytest.mark.parametrize("unlucky", [False, True])
def test_integer_complement_matches_greedy_scan(monkeypatch, unlucky):
    import fatpoints.linalg as L

    base = [[1, 2, 3, 0], [0, 0, 5, 5]]
    rows = [[2, 4, 6, 0], [1, 2, 8, 5], [0, 1, 0, 0], [2, 4, 11, 0], [0, 3, 1, 7]]
    if unlucky:
        monkeypatch.setattr(L, "_PRIME", 5)
    E = make_echelon(rational_field(), 4)
    E.extend(np.array(base, dtype=object))
    idx = E.complement(np.array(rows, dtype=object))
    assert E.rank == 4
    ref = L.ExactEchelon(rational_field(), 4)
    ref.extend([[Fraction(x) for x in r] for r in base])
    expected = [i for i, r in enumerate(rows) if ref.add([Fraction(x) for x in r])]
    assert len(idx) == len(expected) == 2
    for r in rows:
        assert E.contains(r)
