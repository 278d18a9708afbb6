import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from sseqbench.chart import BiDegree
from sseqbench.families import FIXTURES
from sseqbench.moore import (
    CofiberLadder,
    Indeterminate,
    LiftScript,
    PeriodicClass,
    PeriodicClassTable,
    ReplayError,
    alias,
    boundary_of_v1_multiple,
    parse_tau_class,
    periodicity_apply,
    replay_lift_argument,
    v1_bar,
)
from sseqbench.spectral_maps import IncompleteFixture

SPHERE = FIXTURES / "sphere" / "sphere.json"
SCRIPTS = {
    "47": ("lift47.steps", "correct-by-imJ", "M(8,v1^8)", 65),
    "54": ("lift54.steps", "correct-by-imJ-bar", "M(4,v1^4)", 64),
    "71": ("lift71.steps", "correct-by-imJ", "M(8,v1^8)", 89),
    "80": ("lift80.steps", "correct-by-imJ", "M(2,v1^4)", 90),
}


def load(name):
    script = LiftScript.load(FIXTURES / "sphere" / SCRIPTS[name][0])
    return script, CofiberLadder.load(SPHERE, script.i)


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_replay_verifies(name):
    script, ladder = load(name)
    res = replay_lift_argument(script, ladder)
    assert res.ok, res.text()
    _, _, complex_, top = SCRIPTS[name]
    assert res.conclusion.endswith(f"top cell of {complex_} in stem {top}")
    assert replay_lift_argument(script, ladder).text() == res.text()


@pytest.mark.parametrize("name", sorted(SCRIPTS))
def test_deleting_each_correction_fails(name):
    script, ladder = load(name)
    verb = SCRIPTS[name][1]
    n = sum(1 for s in script.steps if s.verb == verb)
    assert n >= 1
    for which in range(n):
        res = replay_lift_argument(script.without_step(verb, which), ladder)
        assert not res.ok
        failed = next(s for s in script.steps if s.number == res.failed_step)
        assert failed.verb == "require"


def test_stem_54_printed_tau_power_rejected():
    script, ladder = load("54")
    text = script.text().replace("tau^15 j_55", "tau^9 j_55")
    res = replay_lift_argument(LiftScript.parse(text), ladder)
    assert not res.ok and "(55,16)" in res.failure


def test_wrong_ladder_refused():
    script, _ = load("47")
    with pytest.raises(ReplayError):
        replay_lift_argument(script, CofiberLadder.load(SPHERE, 2))


def test_script_roundtrip():
    for name in SCRIPTS:
        script, _ = load(name)
        assert LiftScript.parse(script.text()) == script


def test_empty_script_on_unit():
    ladder = CofiberLadder.load(SPHERE, 1)
    res = replay_lift_argument(LiftScript.parse("script unit\nclass 1 @ 0,0\nladder i=1\n"), ladder)
    assert res.ok and res.transcript == [] and res.conclusion == ""


def test_periodic_bidegrees():
    expect = {"j'_7": (7, 2), "j_8": (8, 3), "mu_9": (9, 5), "j_11": (11, 5), "j_15": (15, 4), "j_16": (16, 7), "j_17": (17, 8), "j_31": (31, 11)}
    for name, (s, f) in expect.items():
        assert PeriodicClass.parse(name).bidegree == BiDegree(s, f), name
    assert alias("P^5(h0h3)") == "j'_47" and alias("P^8(c0)") == "j_72" and alias("c0") == "j_8"
    assert parse_tau_class("tau^12 P^5(h0h3)") == (12, PeriodicClass("j'", 47))
    with pytest.raises(ValueError):
        PeriodicClass.parse("j_12")


def test_periodicity_examples():
    assert periodicity_apply(1, 1, "mu_9").bidegree == BiDegree(17, 9)
    assert periodicity_apply(3, 1, "c0").bidegree == BiDegree(16, 7)
    assert isinstance(periodicity_apply(1, 1, "j_55"), Indeterminate)
    with pytest.raises(ValueError):
        periodicity_apply(1, 1, "h0h3")
    assert periodicity_apply(3, 2, "h0h3").name == "j'_23"


@given(st.sampled_from(PeriodicClassTable().members(120)), st.integers(0, 6))
def test_periodicity_shifts_by_8_4(x, n):
    assume(x.kind != "j8k-1")
    i = 3 if x.kind in ("j8k-5", "j'") else 1
    assert periodicity_apply(i, n, x).bidegree == x.bidegree.shift(8 * n, 4 * n)


def test_v1_bar_tau_shift():
    y, a, b = v1_bar(PeriodicClass.parse("j_55"))
    assert (y.name, a, b) == ("j_63", 3, 0)
    with pytest.raises(ReplayError):
        v1_bar(PeriodicClass.parse("j_15"))
    assert v1_bar(PeriodicClass.parse("j_8"))[1:] == (0, 0)


def test_boundary_of_v1_multiple():
    ladder = CofiberLadder.load(SPHERE, 3)
    assert boundary_of_v1_multiple("mu_9", ladder) == {}
    assert boundary_of_v1_multiple("1", ladder) == {"j'_7": 1}
    assert boundary_of_v1_multiple("h0", ladder) == {"h0j'_7": 1}
    with pytest.raises(ValueError):
        boundary_of_v1_multiple("1", ladder, i=2)
    with pytest.raises(IncompleteFixture):
        boundary_of_v1_multiple("y47", ladder)


def test_ladder_cells_and_exactness():
    for i in (1, 2, 3):
        ladder = CofiberLadder.load(SPHERE, i)
        for name in ("y47", "h0h5i", "y71"):
            bd = ladder.base.where(name)
            if not ladder.is_h0_torsion(name, i):
                continue
            assert ladder.exactness(ladder.lift_bidegree(bd)) == []
    m1 = CofiberLadder.load(SPHERE, 1)
    # pi M(2) in (0,0) is Z/2: coker of h0 on the unit
    assert m1.m_cell(BiDegree(0, 0)).order() == 2
    assert m1.boundary_target(BiDegree(8, 4)) == BiDegree(7, 4)
    m3 = CofiberLadder.load(SPHERE, 3, 8)
    assert m3.boundary_v1_target(BiDegree(57, 17)) == BiDegree(40, 10)
    assert m3.top_cell_stem(47) == 65


def test_missing_cell_is_incomplete():
    ladder = CofiberLadder.load(SPHERE, 3)
    with pytest.raises(IncompleteFixture):
        ladder.cell(BiDegree(99, 40))
