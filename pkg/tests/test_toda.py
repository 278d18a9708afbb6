import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sseqbench.chart import BiDegree
from sseqbench.toda import (
    BidegreeError,
    BracketRecord,
    ProvenanceError,
    Relation,
    RelationDB,
    RelationError,
    Word,
    check_relation_chain,
    divide,
    force_nonzero_from_empty,
    replay,
    shuffle,
)

CHAIN_ROWS = ["23b", "47b", "48", "71b", "72", "73", "95", "119b", "120", "143", "144", "145", "167", "169"]


def test_every_chain_verifies_and_replays(fx):
    assert sorted(fx.chains) == sorted(CHAIN_ROWS)
    for name in CHAIN_ROWS:
        res = check_relation_chain(fx.chains[name], fx.db)
        assert res.ok, (name, res.failure)
        assert replay(res.transcript(), fx.db)
        for step in res.steps:
            assert fx.db.get(step.relation).provenance


def test_chain_bidegrees(fx):
    assert check_relation_chain(fx.chains["48"], fx.db).bidegree == BiDegree(48, 6)
    assert check_relation_chain(fx.chains["23b"], fx.db).bidegree.stem == 23


def test_removing_a_relation_breaks_its_chains(fx):
    for rel in fx.db.relations:
        db = fx.db.without(rel.id)
        broken = [n for n in CHAIN_ROWS if not check_relation_chain(fx.chains[n], db).ok]
        used = [n for n in CHAIN_ROWS if rel.id in {s.relation for s in check_relation_chain(fx.chains[n], fx.db).steps}]
        # a chain survives only if another relation performs the same step
        assert set(broken) <= set(used)
    db = fx.db.without("kappa_sq")
    assert not check_relation_chain(fx.chains["48"], db).ok


def test_tampered_transcript_rejected(fx):
    t = check_relation_chain(fx.chains["48"], fx.db).transcript()
    t["steps"][0]["direction"] = "rl"
    assert not replay(t, fx.db)
    t = check_relation_chain(fx.chains["48"], fx.db).transcript()
    t["words"][-1] = "tau^4 eps kbar^3"
    assert not replay(t, fx.db)


def test_forcing_stem_26(fx):
    fr = force_nonzero_from_empty(fx.brackets["26"], fx.db)
    assert fr.status == "proved"
    assert fr.nonzero == Word.parse("tau^4 nu^2 kbar")
    assert "two_nu_sq" in fr.reason
    unresolved = force_nonzero_from_empty(fx.brackets["26"], fx.db.without("two_nu_sq"))
    assert unresolved.status == "unresolved"


def test_forcing_all_brackets(fx):
    for name, br in fx.brackets.items():
        assert force_nonzero_from_empty(br, fx.db).status == "proved", name


def test_forcing_refuses_defined_bracket(fx):
    br = BracketRecord([Word.parse("2"), Word.parse("nu^2"), Word.parse("2")], empty=True, provenance="test")
    with pytest.raises(RelationError):
        force_nonzero_from_empty(br, fx.db)
    with pytest.raises(RelationError):
        force_nonzero_from_empty(BracketRecord([Word.parse("nu"), Word.parse("2"), Word.parse("eta")]), fx.db)


def test_shuffle_checks_annihilation(fx):
    br = BracketRecord([Word.parse("kbar"), Word.parse("tau^4 nu^2"), Word.parse("2")], provenance="test")
    with pytest.raises(RelationError):
        shuffle(br, "left", "kappa", fx.db)
    moved = shuffle(br, "right", "nu^2", fx.db)
    assert moved.outer == Word.parse("kbar") and moved.outer_side == "left"
    assert [str(e) for e in moved.entries] == ["tau^4 nu^2", "2", "nu^2"]


def test_relation_validation():
    gens = {"x": BiDegree(3, 1), "y": BiDegree(6, 2)}
    db = RelationDB(gens)
    with pytest.raises(ProvenanceError):
        db.add(Relation("r", Word.parse("x^2"), Word.parse("y"), "S", ""))
    with pytest.raises(BidegreeError):
        db.add(Relation("r", Word.parse("x"), Word.parse("y"), "S", "made up"))
    db.add(Relation("r", Word.parse("x^2"), Word.parse("y"), "S", "made up"))
    with pytest.raises(RelationError):
        db.add(Relation("r", Word.parse("2 x"), Word.parse("0"), "S", "dup"))
    assert db.bidegree("tau x") == BiDegree(3, 0)


words = st.builds(
    lambda c, t, f: Word(c, t, tuple(sorted(f.items()))),
    st.integers(1, 8),
    st.integers(0, 6),
    st.dictionaries(st.sampled_from(["eta", "nu", "kbar", "kappa"]), st.integers(1, 3), max_size=3),
)


@settings(max_examples=150, deadline=None)
@given(words, words)
def test_word_algebra(a, b):
    ab = a.times(b)
    assert ab == b.times(a)
    assert divide(ab, b) == a
    assert Word.parse(str(ab)) == ab
    gens = {"eta": BiDegree(1, 1), "nu": BiDegree(3, 1), "kbar": BiDegree(20, 4), "kappa": BiDegree(14, 2)}
    assert ab.bidegree(gens) == a.bidegree(gens) + b.bidegree(gens)
