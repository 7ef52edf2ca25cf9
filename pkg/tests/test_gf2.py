import random

from steenrodext.gf2 import (
    BitMatrix,
    RowSpan,
    kernel_basis,
    left_kernel,
    quotient_basis,
    row_reduce,
    solve,
    solve_many,
    vec_from_bits,
)


def M(rows, cols=None):
    return BitMatrix.from_rows(rows, cols)


def random_matrix(rng, nrows, cols):
    return BitMatrix(tuple(rng.getrandbits(cols) for _ in range(nrows)), cols)


def test_row_reduce_identity():
    m = BitMatrix.identity(3)
    ech = row_reduce(m)
    assert ech.matrix == m
    assert ech.pivots == (0, 1, 2)


def test_row_reduce_already_reduced():
    m = M([[1, 1]])
    ech = row_reduce(m)
    assert ech.matrix == m
    assert ech.pivots == (0,)


def test_row_reduce_duplicate_rows_cancel():
    m = M([[1, 1], [1, 1]])
    ech = row_reduce(m)
    assert ech.matrix == M([[1, 1], [0, 0]])
    assert ech.pivots == (0,)


def test_row_reduce_idempotent():
    rng = random.Random(11)
    for _ in range(50):
        m = random_matrix(rng, rng.randrange(1, 8), rng.randrange(1, 10))
        ech = row_reduce(m)
        again = row_reduce(ech.matrix)
        assert again.matrix == ech.matrix
        assert again.pivots == ech.pivots


def test_kernel_single_relation():
    m = M([[1, 1]])
    k = kernel_basis(m)
    assert k.to_lists() == [[1, 1]]


def test_kernel_injective():
    k = kernel_basis(BitMatrix.identity(2))
    assert k.nrows == 0


def test_kernel_zero_matrix():
    k = kernel_basis(BitMatrix.zeros(2, 3))
    assert k.nrows == 3
    assert k == BitMatrix.identity(3)


def test_rank_nullity():
    rng = random.Random(7)
    for _ in range(100):
        m = random_matrix(rng, rng.randrange(1, 9), rng.randrange(1, 9))
        k = kernel_basis(m)
        assert m.rank() + k.nrows == m.cols
        for v in k.rows:
            assert m.mul_vec(v) == 0


def test_solve_back_substitution():
    m = M([[1, 1], [0, 1]])
    x = solve(m, vec_from_bits([1, 0]))
    assert x == vec_from_bits([1, 0])


def test_solve_identity():
    m = BitMatrix.identity(4)
    b = vec_from_bits([1, 0, 1, 1])
    assert solve(m, b) == b


def test_solve_unsolvable():
    m = BitMatrix.zeros(1, 1)
    assert solve(m, 1) is None


def test_solve_random_verifies():
    rng = random.Random(13)
    for _ in range(100):
        m = random_matrix(rng, rng.randrange(1, 9), rng.randrange(1, 9))
        x0 = rng.getrandbits(m.cols)
        b = m.mul_vec(x0)
        x = solve(m, b)
        assert x is not None
        assert m.mul_vec(x) == b


def test_solve_many_matches_solve():
    rng = random.Random(17)
    m = random_matrix(rng, 6, 7)
    bs = [rng.getrandbits(6) for _ in range(10)]
    many = solve_many(m, bs)
    for b, x in zip(bs, many):
        assert x == solve(m, b)


def test_quotient_coordinate_complement():
    reps, proj = quotient_basis(M([[1, 0]]), 2)
    assert reps.to_lists() == [[0, 1]]
    assert proj.mul_vec(vec_from_bits([0, 1])) == 1


def test_quotient_full_space():
    reps, proj = quotient_basis(BitMatrix.identity(3), 3)
    assert reps.nrows == 0
    assert proj.nrows == 0


def test_quotient_empty_subspace():
    reps, proj = quotient_basis(BitMatrix.zeros(0, 3), 3)
    assert reps == BitMatrix.identity(3)
    assert proj == BitMatrix.identity(3)


def test_quotient_composites():
    rng = random.Random(23)
    for _ in range(50):
        n = rng.randrange(1, 9)
        sub = random_matrix(rng, rng.randrange(0, n + 1), n)
        reps, proj = quotient_basis(sub, n)
        # projection kills the subspace
        for v in sub.rows:
            assert proj.mul_vec(v) == 0
        # projection restricted to representatives is the identity
        for k in range(reps.nrows):
            assert proj.mul_vec(reps.rows[k]) == 1 << k
        assert reps.nrows == n - sub.rank()


def test_matmul_and_transpose():
    rng = random.Random(29)
    for _ in range(30):
        a = random_matrix(rng, rng.randrange(1, 7), rng.randrange(1, 7))
        b = random_matrix(rng, a.cols, rng.randrange(1, 7))
        c = a.matmul(b)
        for i in range(c.nrows):
            for j in range(c.cols):
                expect = 0
                for k in range(a.cols):
                    expect ^= a.entry(i, k) & b.entry(k, j)
                assert c.entry(i, j) == expect
        assert a.transpose().transpose() == a


def test_mul_vec_agrees_with_matmul():
    rng = random.Random(31)
    a = random_matrix(rng, 5, 6)
    v = rng.getrandbits(6)
    col = BitMatrix.from_columns([v], 6)
    assert a.matmul(col).column(0) == a.mul_vec(v)


def test_left_kernel():
    rng = random.Random(37)
    for _ in range(50):
        m = random_matrix(rng, rng.randrange(1, 8), rng.randrange(1, 8))
        lk = left_kernel(m)
        assert lk.nrows == m.nrows - m.rank()
        for v in lk.rows:
            acc = 0
            k = v
            while k:
                low = k & -k
                acc ^= m.rows[low.bit_length() - 1]
                k ^= low
            assert acc == 0


def test_row_span_coords():
    rng = random.Random(41)
    for _ in range(50):
        n = rng.randrange(2, 10)
        span = RowSpan(n)
        vecs = [rng.getrandbits(n) for _ in range(rng.randrange(1, 6))]
        for v in vecs:
            span.insert(v)
        # every inserted vector is inside and its coordinates reconstruct it
        basis = span.basis()
        for v in vecs:
            c = span.coords(v)
            assert c is not None
            acc = 0
            for k in range(len(basis)):
                if (c >> k) & 1:
                    acc ^= basis[k]
            assert acc == v


def test_padding_bits_rejected():
    try:
        BitMatrix((0b100,), 2)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for out-of-range bits")
