import copy
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sseqbench.chart import BiDegree, turn_page
from sseqbench.ko import ko_chart
from sseqbench.spectral_maps import (
    Inapplicable,
    IncompleteFixture,
    LevelThreeRing,
    Poly,
    build_fiber_chart,
    coset_decision,
    coset_representatives,
    delete_differential_check,
    identity_map,
    ko_psi_minus_one,
    parse_target,
    psiN_zero_line,
    qp_leading_term,
    two_adic_split,
    zero_map,
)

KO = ko_chart()


def test_ko_fiber_cell_3_1():
    fib = build_fiber_chart(ko_psi_minus_one(KO, 3))
    assert fib.chart.cell(BiDegree(3, 1)).describe() == "Z/8"
    assert fib.chart.cell(BiDegree(7, 1)).describe() == "Z/80"
    local = build_fiber_chart(ko_psi_minus_one(KO, 3), two_local=True)
    assert local.chart.cell(BiDegree(7, 1)).describe() == "Z/16"


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([3, 5, 7, 9, 11, 13]))
def test_ko_fiber_orders_track_psi(N):
    fib = build_fiber_chart(ko_psi_minus_one(KO, N))
    assert fib.chart.cell(BiDegree(3, 1)).order() == N**2 - 1
    assert fib.chart.cell(BiDegree(7, 1)).order() == N**4 - 1
    rec = delete_differential_check(parse_target(KO, "eta^3@3,3"), 3, ko_psi_minus_one(KO, N))
    assert rec.detected_permanent


def test_eta_cubed_certificate():
    f = ko_psi_minus_one(KO, 3)
    rec = delete_differential_check(parse_target(KO, "eta^3@3,3"), 3, f)
    assert rec.certified and rec.window_empty
    assert rec.source == BiDegree(4, 0)
    assert rec.a0 == "u^2" and rec.f_a0 == "8*u^2" and rec.f_kernel == ["16*u^2"]
    assert "tau^2 c != 0" in rec.text()


def test_coset_brute_force():
    # every preimage a0 + k of eta^3 maps to a nonzero class under psi^3 - 1
    f = ko_psi_minus_one(KO, 3)
    target = parse_target(KO, "eta^3@3,3")
    a0, K = coset_representatives(target, 3, f)
    assert coset_decision(a0, K, f, BiDegree(4, 0))
    for c in range(-20, 21):
        a = [a0[0] + c * K[0][0]]
        assert f.apply(BiDegree(4, 0), a) != [0]


def test_deletion_mutants():
    target = parse_target(KO, "eta^3@3,3")
    rec = delete_differential_check(target, 3, zero_map(KO))
    assert rec.status == "refused"
    with pytest.raises(Inapplicable):
        delete_differential_check(target, 3, identity_map(KO))
    with pytest.raises(Inapplicable):
        delete_differential_check(parse_target(KO, "eta^3@3,3"), 5, ko_psi_minus_one(KO, 3))
    no_d3 = KO.without_differentials(lambda d: d.source == BiDegree(4, 0))
    with pytest.raises(IncompleteFixture):
        delete_differential_check(parse_target(no_d3, "eta^3"), 3, ko_psi_minus_one(no_d3, 3))


def test_psi_zero_line():
    e4 = turn_page(KO, 4)
    m = psiN_zero_line(e4, 3)
    assert m.violations == []
    assert m.kernels[0].describe() == "Z"


def test_detection_rows_certify(fx):
    rows = [r for r in fx.detection if r.in_table]
    assert len(rows) == 14
    for row in fx.detection:
        target = parse_target(fx.qp.source, row.target_spec())
        rec = delete_differential_check(target, row.page, fx.qp)
        assert rec.detected_permanent, row.id
        # source = target + (1, -r) and r <= target filtration
        assert rec.source == target.bidegree.shift(1, -row.page)
        assert rec.source.filtration >= 0
        assert target.bidegree.stem == row.stem


def test_tau_level_refusal(fx):
    row = fx.row("120")
    qp = copy.copy(fx.qp)
    qp.components = dict(fx.qp.components)
    target = parse_target(qp.source, row.target_spec())
    src = target.bidegree.shift(1, -row.page)
    comp = copy.copy(qp.components[src])
    comp.tau_level = row.page - 2
    qp.components[src] = comp
    rec = delete_differential_check(target, row.page, qp)
    assert rec.status == "refused" and "modulo tau" in rec.reason


def test_delta_identities_against_sympy():
    a1, a3 = sympy.symbols("a1 a3")
    a2 = a4 = a6 = 0
    b2 = a1**2 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3**2 + 4 * a6
    b8 = a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2
    delta = sympy.expand(-(b2**2) * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6)
    assert delta == sympy.expand(a1**3 * a3**3 - 27 * a3**4)
    ring = LevelThreeRing()
    assert ring.delta_identity() and ring.c_identity()
    as_poly = sympy.Poly(delta, a1, a3)
    assert ring.delta.terms == {m: int(c) for m, c in zip(as_poly.monoms(), as_poly.coeffs())}
    c4 = sympy.Poly(sympy.expand(b2**2 - 24 * b4), a1, a3)
    assert ring.c4.terms == {m: int(c) for m, c in zip(c4.monoms(), c4.coeffs())}


def test_qp_leading_term_matches_oracle(oracle):
    frozen = oracle("qp_oracle.json")["leading"]
    for k in range(1, 65):
        lt = qp_leading_term(k)
        r, s = two_adic_split(k)
        assert k == 2**r * (2 * s + 1)
        assert [lt.a1_exp, lt.a3_exp] == frozen[str(k)]
        assert [lt.a1_exp, lt.a3_exp] == [3 * 2 ** (r + 1), 2 ** (r + 1) * (4 * s + 1)]
        assert not lt.monomial.is_zero()
        assert lt.degree == 24 * k


def test_qp_oracle_live_small_k():
    a1, a3 = sympy.symbols("a1 a3")
    p = sympy.Poly(a3**3 * (a1**3 - 27 * a3), a1, a3, modulus=2)
    q = sympy.Poly(a3 * (a1**3 - 27 * a3) ** 3, a1, a3, modulus=2)
    for k in range(1, 7):
        lt = qp_leading_term(k)
        assert min((q**k - p**k).monoms()) == (lt.a1_exp, lt.a3_exp)


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-5, 5), max_size=4),
       st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-5, 5), max_size=4))
def test_poly_arithmetic_matches_sympy(x, y):
    a1, a3 = sympy.symbols("a1 a3")

    def sym(t):
        return sum(c * a1**i * a3**j for (i, j), c in t.items())

    prod = Poly(x) * Poly(y) - Poly(y)
    expect = sympy.Poly(sympy.expand(sym(x) * sym(y) - sym(y)) + 0 * a1 + 0 * a3, a1, a3)
    got = {m: int(c) for m, c in zip(expect.monoms(), expect.coeffs()) if c}
    assert prod.terms == got


def test_two_adic_split():
    with pytest.raises(ValueError):
        two_adic_split(0)
    assert two_adic_split(12) == (2, 1)


def test_certificate_names_leading_term_data(fx):
    row = fx.row("47")
    rec = delete_differential_check(parse_target(fx.qp.source, row.target_spec()), row.page, fx.qp)
    assert rec.certified
    assert "a1^12a3^4" in rec.relies_on
    assert "relies on" in rec.text()
