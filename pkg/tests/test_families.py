import json
import shutil

import pytest

from sseqbench.families import FIXTURES, FixtureError, families_verify, ingest, verify_lift_scripts

PER_DEGREE = [1, 4, 1, 1, 5, 5, 1, 7, 3, 10, 2, 1, 1, 1, 11, 2, 8, 5, 13, 12, 2, 14]
ORDERS = {"23a": 8, "71a": 8, "47a": 4, "74a": 4, "119a": 4}


@pytest.fixture(scope="module")
def report(fx):
    return families_verify(fx)


def test_total_and_counts(report):
    assert report.ok, report.text()
    assert report.total == 110
    assert report.per_degree() == PER_DEGREE


def test_orders(fx):
    for rec in fx.records:
        assert rec.order == ORDERS.get(rec.label, 2), rec.label


def test_exactly_two_merges(report):
    assert len(report.merges) == 2
    assert any(m.startswith("48:") and "kappa_sq" in m for m in report.merges)
    assert any(m.startswith("145:") and "nu_epsD" in m for m in report.merges)


def test_report_is_deterministic(fx, report):
    assert families_verify(ingest()).text() == report.text()


def test_detection_mutations_break_exactly_their_families(fx):
    for row in fx.detection:
        rep = families_verify(fx.without_differential(row.id))
        assert sorted(rep.failing()) == sorted(row.families), row.id
        assert rep.total == 110


@pytest.mark.parametrize("rel,stem", [("kappa_sq", "48"), ("nu_epsD", "145")])
def test_merge_relation_removal_changes_count_by_one(fx, rel, stem):
    rep = families_verify(fx.without_relation(rel))
    assert rep.total == 111
    assert rep.failing() == [stem]


def test_nu_cubed_is_not_a_merge(fx):
    assert fx.db.get("nu_cubed").ambient == "TMF"


def test_lift_scripts_from_fixture(fx):
    results = verify_lift_scripts(fx)
    assert sorted(results) == ["47", "54", "71", "80"]
    assert all(r.ok for r in results.values())


def test_missing_row_lookup(fx):
    with pytest.raises(FixtureError):
        fx.row("999")


def _copy(tmp_path):
    root = tmp_path / "fixtures"
    shutil.copytree(FIXTURES, root)
    return root


def _edit(path, fn):
    data = json.loads(path.read_text())
    fn(data)
    path.write_text(json.dumps(data))


def test_ingest_rejects_relation_without_provenance(tmp_path):
    root = _copy(tmp_path)
    _edit(root / "tmf/relations.json", lambda d: d["relations"][0].update(provenance=""))
    with pytest.raises(FixtureError, match="provenance"):
        ingest(root)


def test_ingest_rejects_row_without_provenance(tmp_path):
    root = _copy(tmp_path)
    _edit(root / "tmf/detection.json", lambda d: d["rows"][3].update(provenance=" "))
    with pytest.raises(FixtureError, match="provenance"):
        ingest(root)


def test_ingest_rejects_dangling_row(tmp_path):
    root = _copy(tmp_path)
    _edit(root / "tmf/families.json", lambda d: d["records"][0].update(detected_by="nope"))
    with pytest.raises(FixtureError, match="dangling"):
        ingest(root)


def test_ingest_rejects_unknown_group(tmp_path):
    root = _copy(tmp_path)
    _edit(root / "tmf/families.json", lambda d: d["records"][0].update(group="Z/16"))
    with pytest.raises(FixtureError, match="Z/16"):
        ingest(root)


def test_ingest_rejects_broken_json(tmp_path):
    root = _copy(tmp_path)
    (root / "tmf/families.json").write_text("{")
    with pytest.raises(FixtureError, match="line 1"):
        ingest(root)


def test_catalog_count_mismatch_fails_row(tmp_path):
    root = _copy(tmp_path)
    _edit(root / "tmf/families.json", lambda d: d["records"][1].update(count=5))
    rep = families_verify(ingest(root))
    assert rep.failing() == [rep.rows[1].label]
    assert not rep.ok


def test_open_questions_are_records_only(fx):
    q = {x["id"]: x for x in fx.questions}
    assert q["longer-brackets"]["status"] == "open"
    assert all(r.label != "longer-brackets" for r in fx.records)
