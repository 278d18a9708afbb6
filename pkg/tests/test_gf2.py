from hypothesis import given, settings
from hypothesis import strategies as st

from sseqbench import _gf2_py, gf2

rows_st = st.lists(st.integers(min_value=0, max_value=(1 << 150) - 1), max_size=25)


def dense_rank(rows):
    # independent: elimination on explicit lists of bits
    mat = [[(r >> j) & 1 for j in range(150)] for r in rows]
    rank = 0
    for col in range(150):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                mat[i] = [a ^ b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def test_backend_reported():
    assert gf2.BACKEND in ("cython", "python")


@settings(max_examples=150, deadline=None)
@given(rows_st)
def test_rank_matches_dense(rows):
    assert gf2.rank(rows) == _gf2_py.rank(rows) == dense_rank(rows)


@settings(max_examples=150, deadline=None)
@given(rows_st)
def test_echelonize_backends_agree(rows):
    basis, piv = gf2.echelonize(rows)
    assert (basis, piv) == _gf2_py.echelonize(rows)
    assert piv == sorted(piv)
    for b, p in zip(basis, piv):
        assert (b & -b).bit_length() - 1 == p
        assert sum((c >> p) & 1 for c in basis) == 1
    for r in rows:
        assert gf2.reduce(r, basis, piv) == 0


@settings(max_examples=150, deadline=None)
@given(rows_st)
def test_kernel(rows):
    ker = gf2.kernel(rows, 150)
    assert len(ker) == len(rows) - dense_rank(rows)
    assert gf2.rank(ker) == len(ker)
    for k in ker:
        total = 0
        for i in gf2.bits(k):
            total ^= rows[i]
        assert total == 0
    assert gf2.rank(ker) == gf2.rank(_gf2_py.kernel(rows, 150))


@settings(max_examples=100, deadline=None)
@given(rows_st)
def test_image_and_kernel_backends_agree(rows):
    a = gf2.image_and_kernel(rows, 150)
    b = _gf2_py.image_and_kernel(rows, 150)
    assert gf2.rank(list(a[0])) == gf2.rank(list(b[0]))
    assert len(a[1]) == len(b[1])


def test_bits_roundtrip():
    assert gf2.bits(gf2.from_bits([0, 3, 64, 200])) == [0, 3, 64, 200]
    assert gf2.rank([]) == 0
    assert gf2.kernel([0, 0], 4) != []
