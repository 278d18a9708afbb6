import pytest

from sseqbench.cli import main
from sseqbench.families import FIXTURES

SCRIPT = str(FIXTURES / "sphere" / "lift47.steps")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ext_compute(capsys):
    code, out, _ = run(capsys, "ext", "compute", "--algebra", "A1", "--stems", "8", "--filtration", "4")
    assert code == 0 and "Ext over A1" in out


def test_fiber_build_ko(capsys):
    code, out, _ = run(capsys, "fiber", "build", "--ko")
    assert code == 0 and "(3,1) Z/8" in out
    code, out, _ = run(capsys, "fiber", "build", "--ko", "--two-local")
    assert "(7,1) Z/16" in out


def test_delete_diff(capsys):
    code, out, _ = run(capsys, "delete-diff", "check", "--ko", "--target", "eta^3@3,3", "--page", "3")
    assert code == 0 and "CERTIFICATE" in out
    code, out, _ = run(capsys, "delete-diff", "check", "--row", "23")
    assert code == 0
    code, _, err = run(capsys, "delete-diff", "check", "--row", "999")
    assert code == 2 and "no detection row" in err
    code, _, err = run(capsys, "delete-diff", "check", "--ko")
    assert code == 2


def test_toda_and_families(capsys, tmp_path):
    assert run(capsys, "toda", "verify")[0] == 0
    assert run(capsys, "toda", "force", "--bracket", "26")[0] == 0
    assert run(capsys, "toda", "verify", "--chain", "nope")[0] == 2
    code = main(["--out", str(tmp_path), "families", "verify"])
    assert code == 0
    assert "total 110 (expected 110): PASS" in (tmp_path / "families.txt").read_text()


def test_moore_replay(capsys, tmp_path):
    code, out, _ = run(capsys, "moore", "replay", "--script", SCRIPT)
    assert code == 0 and "VERIFIED" in out
    broken = tmp_path / "broken.steps"
    broken.write_text("\n".join(l for l in open(SCRIPT).read().splitlines() if "correct-by-imJ" not in l) + "\n")
    code, out, _ = run(capsys, "moore", "replay", "--script", str(broken))
    assert code == 1 and "FAILED" in out


def test_chart_commands(capsys, tmp_path):
    from sseqbench.ko import ko_chart

    path = tmp_path / "ko.json"
    ko_chart().save(path)
    assert run(capsys, "chart", "validate", str(path))[0] == 0
    code, out, _ = run(capsys, "chart", "render", str(path), "--window", "0,8,0,4")
    assert code == 0 and out.startswith("<svg")
    (tmp_path / "bad.json").write_text("{not json")
    assert run(capsys, "chart", "validate", str(tmp_path / "bad.json"))[0] == 2
    assert run(capsys, "chart", "validate", str(tmp_path / "missing.json"))[0] == 2


def test_bad_fixture_dir(capsys, tmp_path):
    code, _, err = run(capsys, "--fixtures", str(tmp_path), "families", "verify")
    assert code == 2 and err.startswith("error:")


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["nonsense"])
