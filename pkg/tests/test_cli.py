import io
import json
import subprocess
import sys

import pytest

from genusforge.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), stdout=buf)
    return code, buf.getvalue().splitlines()


@pytest.fixture
def files(tmp_path):
    g6 = tmp_path / "k.g6"
    g6.write_text("D~{\nEFz_\nC~\n")
    tg6 = tmp_path / "parts.tg6"
    tg6.write_text("D^{ 0 1\nEFz_ 0 1\n")
    return g6, tg6


def test_genus_prints_one_value_per_line(files):
    code, lines = run("genus", str(files[0]))
    assert code == EXIT_OK and lines == ["1", "1", "0"]
    code, lines = run("genus", str(files[0]), "--nonorientable")
    assert lines == ["1", "1", "1"]


def test_genus_decisions(files):
    code, lines = run("genus", str(files[0]), "--at-most", "0", "--show-scheme")
    rows = [json.loads(s) for s in lines]
    assert [r["verdict"] for r in rows] == ["no", "no", "yes"]
    assert "scheme" in rows[2] and rows[2]["euler_genus"] == 0
    code, lines = run("genus", str(files[0]), "--at-most", "1", "--orientable")
    assert [json.loads(s)["verdict"] for s in lines] == ["no", "no", "yes"]


def test_human_output_is_aligned(files):
    code, lines = run("profile", str(files[1]), "--human")
    assert lines[0].split()[:3] == ["tg6", "eg", "og"]
    assert len(lines) == 3


def test_profile_json(files):
    code, lines = run("profile", str(files[1]))
    rows = [json.loads(s) for s in lines]
    assert [(r["eg"], r["eg_plus"], r["theta"]) for r in rows] == [(0, 1, 1), (1, 1, 0)]


def test_check_classes(files):
    code, lines = run("check", str(files[1]), "--class", "critical-egp")
    assert code == EXIT_OK and all(json.loads(s)["verdict"] == "certified" for s in lines)
    code, lines = run("check", str(files[1]), "--class", "critical-eg")
    assert code == EXIT_FAIL
    assert [json.loads(s)["verdict"] for s in lines] == ["refuted", "certified"]
    code, lines = run("check", str(files[1]), "--class", "hopper")
    assert code == EXIT_FAIL
    code, lines = run("check", str(files[0]), "--class", "obstruction:0")
    assert [json.loads(s)["verdict"] for s in lines] == ["certified", "certified", "refuted"]
    code, _ = run("check", str(files[0]), "--class", "obstruction:1", "--nonorientable")
    assert code == EXIT_FAIL


def test_check_usage_errors(files):
    assert run("check", str(files[1]), "--class", "nonsense")[0] == EXIT_USAGE
    assert run("check", str(files[0]), "--class", "cascade")[0] == EXIT_USAGE
    assert run("check", str(files[0]), "--class", "obstruction:x")[0] == EXIT_USAGE


def test_compose(files):
    code, lines = run("compose", str(files[1]), str(files[1]), "--both-identifications")
    rows = [json.loads(s) for s in lines]
    assert code == EXIT_OK and len(rows) == 8
    assert all(r["eg"] == 2 for r in rows)
    assert {r["eta"] for r in rows} == {0, 1, 2}


def test_budget_exhaustion_exit_code(tmp_path):
    f = tmp_path / "k7.g6"
    f.write_text("F~~~w\n")
    code, lines = run("genus", str(f), "--node-limit", "50", "--no-cache")
    assert code == EXIT_BUDGET
    assert json.loads(lines[0])["verdict"] == "unverified"


def test_verify_small_sweeps():
    code, lines = run("verify", "--suite", "richter", "--max-n", "4", "--max-m", "5")
    assert code == EXIT_OK and lines[-1] == "disagreements=0"
    code, lines = run("verify", "--suite", "general", "--max-n", "4", "--max-m", "5", "--jobs", "2")
    assert code == EXIT_OK and json.loads(lines[0])["checked"] == 2 * 7 ** 2


def test_verify_level_zero_analogs():
    code, lines = run("verify", "--suite", "klein")
    assert code == EXIT_OK and json.loads(lines[0])["source"] == "level-0"
    code, lines = run("verify", "--suite", "e2-sample")
    assert code == EXIT_OK
    assert json.loads(lines[0])["certified_both"] == 6


def test_synthesize_requires_packs(tmp_path):
    assert run("synthesize", "--out", str(tmp_path / "o"))[0] == EXIT_USAGE
    assert run("synthesize", "--data-dir", str(tmp_path), "--out", str(tmp_path / "o"))[0] == EXIT_USAGE


def test_census_of_catalog_file(tmp_path):
    f = tmp_path / "cat.g6"
    f.write_text("G^~EMK\nH^|ACME\n")
    code, lines = run("census", str(f))
    assert code == EXIT_OK and lines[-1] == "graphs=2"
    assert json.loads(lines[0])["connectivity"] == {"2": 2}
    j = tmp_path / "e2_census.json"
    j.write_text(json.dumps({"pairs": 9, "admissible": 9, "graphs": 6}))
    code, lines = run("census", str(tmp_path))
    assert lines[-1] == "pairs=9 admissible=9 graphs=6"


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.g6"
    bad.write_text("D~\n")
    assert run("genus", str(bad))[0] == EXIT_USAGE
    assert run("genus", str(tmp_path / "missing.g6"))[0] == EXIT_USAGE
    assert run("profile", str(tmp_path / "missing.tg6"))[0] == EXIT_USAGE
    assert run("bogus")[0] == EXIT_USAGE
    assert run()[0] == EXIT_USAGE


def test_cache_file_written(tmp_path, files):
    cache = tmp_path / "c" / "profiles.txt"
    run("profile", str(files[1]), "--cache", str(cache))
    assert len(cache.read_text().splitlines()) == 2


def test_console_entry_point(files):
    out = subprocess.run([sys.executable, "-m", "genusforge.cli", "genus", str(files[0])],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0 and out.stdout.split() == ["1", "1", "0"]
