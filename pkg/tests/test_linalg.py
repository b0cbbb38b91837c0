"""Row reduction, null spaces, subfield expansion, column restriction."""

import pytest

from mtgoppa.errors import Duplicate, IndexOutOfRange
from mtgoppa.gf import Felt
from mtgoppa.linalg import (
    FMatrix,
    inverse,
    mat_mul,
    mat_vec,
    matrix_from_text,
    matrix_to_text,
    null_space_basis,
    rank,
    restrict_columns,
    row_space_equal,
    rref,
    subfield_expand,
)
from mtgoppa.rng import SplitRng


def _rand_matrix(spec, lvl, r, c, rng):
    order = spec.orders[lvl]
    return FMatrix(spec, lvl, [[rng.randrange(order) for _ in range(c)] for _ in range(r)])


def test_identity_null_space(f16):
    I3 = FMatrix.identity(f16, 2, 3)
    assert null_space_basis(I3).nrows == 0
    assert rank(I3) == 3


def test_rref_idempotent_and_rank_row_permutation(f16, f9):
    rng = SplitRng("rref")
    for spec, lvl in ((f16, 2), (f9, 1), (f16, 0)):
        for _ in range(40):
            M = _rand_matrix(spec, lvl, rng.randrange(1, 5), rng.randrange(1, 6), rng)
            R, pivots = rref(M)
            assert rref(R)[0] == R
            rows = list(M.rows)
            rng.shuffle(rows)
            assert rank(FMatrix(spec, lvl, rows, M.ncols)) == rank(M)


def test_null_space_annihilates(f16, f9):
    rng = SplitRng("null")
    for spec, lvl in ((f16, 2), (f9, 1), (f16, 0)):
        for _ in range(40):
            M = _rand_matrix(spec, lvl, rng.randrange(1, 4), rng.randrange(2, 7), rng)
            N = null_space_basis(M)
            assert rank(M) + N.nrows == M.ncols
            for row in N.rows:
                assert all(v == 0 for v in mat_vec(M, list(row)))


def test_null_space_orthogonal_to_row_space(f16):
    rng = SplitRng("orth")
    M = _rand_matrix(f16, 2, 3, 6, rng)
    N = null_space_basis(M)
    for mrow in M.rows:
        for nrow in N.rows:
            acc = f16.zero(2)
            for a, b in zip(mrow, nrow):
                acc = acc + Felt(f16, 2, a) * Felt(f16, 2, b)
            assert acc.is_zero()


def test_example3_null_space_matches_stated_generator(ex3):
    G_paper = FMatrix(ex3.spec, 0, ex3.expected["generator_rows"], 20)
    assert row_space_equal(G_paper, ex3.code.generator)


def test_subfield_expand_ones_row(f16):
    ones = FMatrix(f16, 1, [[1, 1, 1]], 3)  # all-ones over F4
    E = subfield_expand(ones, 0)
    assert E.rows == ((1, 1, 1), (0, 0, 0))


def test_subfield_expand_row_bound_and_dimension(ex1):
    # 3x14 over F16 expands to at most m*t = 2*3 rows over F4
    expanded = subfield_expand(ex1.code.H, 1)
    assert expanded.nrows == 6
    assert rank(expanded) <= 6
    assert ex1.code.k >= 14 - 6


def test_subfield_expand_kernel_preservation_exhaustive(f16):
    # all v in F_2^n for a small F16 matrix expanded to the prime field
    rng = SplitRng("kerex")
    M = _rand_matrix(f16, 2, 2, 5, rng)
    E = subfield_expand(M, 0)
    for v in range(1 << 5):
        vec = [(v >> i) & 1 for i in range(5)]
        lifted = [f16.embed(Felt(f16, 0, c), 2).idx for c in vec]
        in_ker_m = all(s == 0 for s in mat_vec(M, lifted))
        in_ker_e = all(s == 0 for s in mat_vec(E, vec))
        assert in_ker_m == in_ker_e


def test_subfield_expand_kernel_preservation_random(f256_tower):
    # random two-sided check at an intermediate stage (F256 -> F4)
    spec = f256_tower
    rng = SplitRng("kerrand")
    M = _rand_matrix(spec, 3, 2, 8, rng)
    E = subfield_expand(M, 1)
    N = null_space_basis(E)
    for row in N.rows:
        lifted = [spec.embed(Felt(spec, 1, c), 3).idx for c in row]
        assert all(s == 0 for s in mat_vec(M, lifted))


def test_restrict_columns(f16):
    rng = SplitRng("cols")
    M = _rand_matrix(f16, 2, 6, 6, rng)
    assert restrict_columns(M, list(range(6))) == M
    single = restrict_columns(M, [3])
    assert (single.nrows, single.ncols) == (6, 1)
    with pytest.raises(Duplicate):
        restrict_columns(M, [1, 1])
    with pytest.raises(IndexOutOfRange):
        restrict_columns(M, [2, 1])
    with pytest.raises(IndexOutOfRange):
        restrict_columns(M, [99])


def test_shortened_dimension_bound(ex3):
    # dim of the shortened code >= k + |I| - n on the worked instance
    code = ex3.code
    idx = list(range(15))
    H_I = restrict_columns(code.expanded, idx)
    short_dim = null_space_basis(H_I).nrows
    assert short_dim >= code.k + 15 - code.n


def test_inverse_round_trip(f16):
    rng = SplitRng("inv")
    found = 0
    for _ in range(30):
        M = _rand_matrix(f16, 1, 4, 4, rng)
        Minv = inverse(M)
        if Minv is None:
            continue
        found += 1
        assert mat_mul(M, Minv) == FMatrix.identity(f16, 1, 4)
    assert found > 5


def test_matrix_text_round_trip(ex1):
    H = ex1.code.H
    text = matrix_to_text(H)
    assert matrix_from_text(ex1.spec, text) == H
