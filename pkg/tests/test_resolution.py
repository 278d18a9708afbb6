import pytest

from sseqbench.cobar import BarComplex
from sseqbench.resolution import WindowError, export_chart, ext_product, minimal_resolution, product_rank
from sseqbench.steenrod import algebra_by_name


@pytest.fixture(scope="module")
def a1():
    return minimal_resolution(algebra_by_name("A1"), 24, 12)


def table(res, stems, filts):
    return [[res.dim(stem, s) for stem in range(stems + 1)] for s in range(filts + 1)]


def test_a0_is_a_tower():
    res = minimal_resolution(algebra_by_name("A0"), 12, 8)
    assert table(res, 12, 8) == [[1] + [0] * 12 for _ in range(9)]


def test_a1_matches_bar_oracle(a1, oracle):
    frozen = oracle("oracle_A1.json")
    assert table(a1, 12, 8) == [row[:13] for row in frozen["dims"][:9]]


def test_a2_matches_both_oracles(oracle):
    res = minimal_resolution(algebra_by_name("A2"), 15, 16)
    bar = oracle("oracle_A2.json")
    adem = oracle("oracle_A2_adem.json")
    assert table(res, 15, 5) == bar["dims"]
    assert table(res, 15, 16) == adem["dims"]


def test_a1_periodicity(a1):
    for stem in range(1, 17):
        for s in range(0, 9):
            assert a1.dim(stem + 8, s + 4) == a1.dim(stem, s), (stem, s)


def test_resolution_is_minimal_complex(a1):
    assert a1.check_d_squared() == []
    assert a1.check_minimal() == []


def test_named_low_classes(a1):
    # h0, h1 in filtration 1; h1^2 survives, h1^3 = 0 over A(1); a class at (4, 3) starts the ko tower
    assert a1.dim(0, 1) == 1 and a1.dim(1, 1) == 1 and a1.dim(3, 1) == 0
    assert a1.dim(2, 2) == 1 and a1.dim(3, 3) == 0
    assert a1.dim(4, 3) == 1 and a1.dim(4, 2) == 0


@pytest.mark.parametrize("i", [0, 1])
def test_product_rank_matches_bar_complex(i):
    alg = algebra_by_name("A1")
    res = minimal_resolution(alg, 8, 4)
    bar = BarComplex(alg)
    for s in range(3):
        for stem in range(0, 8 - (1 << i) + 1):
            assert product_rank(res, stem, s, i) == bar.h_product_rank(s, stem + s, i), (stem, s, i)


def test_export_chart_products(a1):
    chart = export_chart(minimal_resolution(algebra_by_name("A1"), 8, 4))
    names = chart.generator_names()
    assert {"1", "h0", "h1", "h0^2", "h1^2"} <= set(names)
    res = minimal_resolution(algebra_by_name("A1"), 8, 4)
    g = res.generators(0, 0)
    assert len(ext_product(res, g, 0, 0, 1)) == 1
    with pytest.raises(WindowError):
        ext_product(res, res.generators(8, 4), 4, 12, 0)
