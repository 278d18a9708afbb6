import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from sseqbench.chart import (
    INF,
    UNDECLARED,
    BiDegree,
    Chart,
    ChartError,
    ConsistencyError,
    Differential,
    SyntheticClass,
    d_target,
    differential_value,
    is_detected_permanent_cycle,
    min_kill_page,
    multiply,
    support_page,
    tau_power_nonzero,
    turn_page,
    validate,
)
from sseqbench.groups import PresentedAbGroup
from sseqbench.ko import ko_chart


@pytest.fixture(scope="module")
def ko():
    return ko_chart()


def test_ko_window_counts(ko):
    assert len(ko.cells) == 12
    assert len(ko.differentials) == 2
    assert len(turn_page(ko, 4).cells) == 9
    assert validate(ko).ok


def test_ko_e4(ko):
    e4 = turn_page(ko, 4)
    assert str(e4.cell(BiDegree(8, 0)).describe()) == "Z"
    assert e4.cell(BiDegree(3, 3)).is_zero()
    assert str(e4.cell(BiDegree(4, 0)).describe()) == "Z"
    # only 2 u^2 survives: the E4 generator at (4, 0) is twice u^2
    assert e4.cell(BiDegree(4, 0)).ngens == 1


def test_turn_page_idempotent(ko):
    e4 = turn_page(ko, 4)
    assert turn_page(e4, 4).dumps() == e4.dumps()
    assert turn_page(ko, 2).dumps() == turn_page(turn_page(ko, 2), 2).dumps()


def test_turn_page_refuses_out_of_range(ko):
    with pytest.raises(ChartError):
        turn_page(ko, 9)
    with pytest.raises(ChartError):
        turn_page(turn_page(ko, 4), 3)


def test_kill_and_support_pages(ko):
    eta3 = SyntheticClass.named(ko, "eta^3")
    assert min_kill_page(eta3) == 3
    assert tau_power_nonzero(eta3, 1)
    assert not tau_power_nonzero(eta3, 2)
    assert min_kill_page(SyntheticClass.named(ko, "u^4")) == INF
    assert support_page(SyntheticClass.named(ko, "u^2")) == 3
    assert is_detected_permanent_cycle(SyntheticClass.named(ko, "u^4"))
    assert not is_detected_permanent_cycle(SyntheticClass.named(ko, "u^2eta"))


def test_products_and_differential_values(ko):
    e = multiply("eta", "eta^2", ko)
    assert e.bidegree == BiDegree(3, 3) and e.terms == {"eta^3": 1}
    assert differential_value(ko, 3, "u^2") == (BiDegree(3, 3), {"eta^3": 1})
    assert differential_value(ko, 3, "u^4") == UNDECLARED
    assert multiply("eta^2", "u^2eta", ko) == UNDECLARED


def test_roundtrip(ko, tmp_path):
    ko.save(tmp_path / "ko.json")
    again = Chart.load(tmp_path / "ko.json")
    assert again.dumps() == ko.dumps()


def _two_cell(page=3, target=None, images=None):
    cells = {BiDegree(4, 0): PresentedAbGroup.cyclic("a", 0), BiDegree(3, 3): PresentedAbGroup.cyclic("b", 2)}
    d = Differential(page, BiDegree(4, 0), target or BiDegree(3, 3), images or {"a": {"b": 1}})
    return Chart("t", (0, 8, 0, 4), cells, [d], max_page=3)


def test_validate_finds_violations():
    assert validate(_two_cell()).ok
    rep = validate(_two_cell(target=BiDegree(3, 2)))
    assert not rep.ok and "target should be" in rep.first_violation
    rep = validate(_two_cell(page=5))
    assert any("max page" in v for v in rep.violations)


def test_d_squared_detected():
    cells = {
        BiDegree(2, 0): PresentedAbGroup.cyclic("x", 0),
        BiDegree(1, 2): PresentedAbGroup.cyclic("y", 0),
        BiDegree(0, 4): PresentedAbGroup.cyclic("z", 0),
    }
    ds = [
        Differential(2, BiDegree(2, 0), BiDegree(1, 2), {"x": {"y": 1}}),
        Differential(2, BiDegree(1, 2), BiDegree(0, 4), {"y": {"z": 1}}),
    ]
    chart = Chart("bad", (0, 4, 0, 4), cells, ds, max_page=2)
    assert not validate(chart).ok
    with pytest.raises(ConsistencyError):
        turn_page(chart, 3)


def test_duplicate_generator_rejected():
    with pytest.raises(ChartError):
        Chart("dup", (0, 1, 0, 1), {BiDegree(0, 0): PresentedAbGroup.cyclic("x", 2), BiDegree(1, 1): PresentedAbGroup.cyclic("x", 2)})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 40), st.integers(0, 20), st.integers(2, 9))
def test_d_target_shape(s, f, r):
    t = d_target(BiDegree(s, f), r)
    assert t == BiDegree(s - 1, f + r)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 16))
def test_integer_differential_quotients(n):
    # d_3: Z -> Z/16 by multiplication by n leaves Z/gcd(n, 16) in the target
    from math import gcd

    cells = {BiDegree(4, 0): PresentedAbGroup.cyclic("a", 0), BiDegree(3, 3): PresentedAbGroup.cyclic("b", 16)}
    chart = Chart("m", (0, 8, 0, 4), cells, [Differential(3, BiDegree(4, 0), BiDegree(3, 3), {"a": {"b": n}})], max_page=3)
    e4 = turn_page(chart, 4)
    assert e4.cell(BiDegree(3, 3)).order() == (gcd(n, 16) if gcd(n, 16) > 1 else 1)
    assert e4.cell(BiDegree(4, 0)).invariants() == (1, ())
    turned = json.loads(e4.dumps())
    assert turned["first_page"] == 4



def _kill_pages(chart):
    return {n: min_kill_page(SyntheticClass.named(chart, n)) for n in chart.generator_names()}


@pytest.fixture(scope="module")
def charts(fx):
    return [ko_chart(), fx.tmf]


@settings(max_examples=25, deadline=None, suppress_health_check=list(HealthCheck))
@given(st.data())
def test_kill_page_monotone_under_deletion(charts, data):
    for chart in charts:
        n = len(chart.differentials)
        keep = data.draw(st.lists(st.booleans(), min_size=n, max_size=n))
        dropped = {id(d) for d, k in zip(chart.differentials, keep) if not k}
        smaller = chart.without_differentials(lambda d: id(d) in dropped)
        if smaller.pages().errors:
            # deleting d_r from a class that also supports a later d_r' leaves an inconsistent chart
            continue
        before, after = _kill_pages(chart), _kill_pages(smaller)
        for name, r in before.items():
            assert after[name] >= r
