import json

import pytest
from click.testing import CliRunner

from brauer_cgc import cli


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, **kw):
        return runner.invoke(cli.main, list(args), catch_exceptions=False, **kw)

    return invoke


def test_relations(run):
    res = run("relations", "--f", "3")
    assert res.exit_code == 0
    assert "32/32 relations hold" in res.output
    assert run("relations", "--f", "7").exit_code == 2


def test_idc_json(run):
    res = run("idc", "--coupling", "[1]x[1]", "--n", "6", "--cfg", "explicit:3,3")
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert doc["norm_matrix"] == {"size": 3, "rank": 2, "null_dimension": 1}
    assert doc["orthogonal"] and doc["complete"] and doc["intertwining"]["ok"]
    sym = next(v for v in doc["vectors"] if v["lambda"] == "[2]")
    assert sym["coefficients"][0]["normalized"] == "sqrt(3/10)"
    null = next(v for v in doc["vectors"] if v["lambda"] == "[1,1]")
    assert null["null"] and null["coefficients"][0]["normalized"] is None


@pytest.mark.parametrize("args", [
    ("--coupling", "[3]x[3]"),
    ("--coupling", "[1]x[1]", "--n", "0"),
    ("--coupling", "nonsense"),
    ("--coupling", "[1]x[1]", "--cfg", "explicit:3,99"),
])
def test_idc_preconditions(run, args):
    assert run("idc", *args).exit_code == 2


def test_isf_cache_is_deterministic(run, tmp_path):
    cache = tmp_path / "cache"
    first = run("isf", "--coupling", "[1]x[1]", "--format", "csv", "--samples", "8", "--cache-dir", str(cache))
    assert first.exit_code == 0, first.output
    files = list(cache.glob("*.json"))
    assert len(files) == 1
    second = run("isf", "--coupling", "1", "--format", "csv", "--samples", "8", "--cache-dir", str(cache))
    assert second.output == first.output
    # a corrupted entry is ignored and rewritten
    files[0].write_text(files[0].read_text().replace("sqrt", "sqrx"))
    third = run("isf", "--coupling", "[1]x[1]", "--format", "csv", "--samples", "8", "--cache-dir", str(cache))
    assert third.output == first.output
    assert "sqrx" not in files[0].read_text()


def test_isf_cache_from_environment(run, tmp_path, monkeypatch):
    monkeypatch.setenv("BRAUER_CGC_CACHE", str(tmp_path))
    res = run("isf", "--coupling", "[1]x[1]", "--samples", "8")
    assert res.exit_code == 0
    assert json.loads(res.output)["coupling"]
    assert list(tmp_path.glob("*.json"))


def test_isf_latex_and_verify(run):
    res = run("isf", "--coupling", "[1]x[1]", "--format", "latex", "--samples", "8", "--verify")
    assert res.exit_code == 0
    assert "\\sqrt" in res.output


@pytest.mark.parametrize("args", [
    ("--coupling", "[3]x[3]"),
    ("--coupling", "[1]x[1]", "--samples", "5"),
    ("--coupling", "[1]x[1]", "--n-min", "2"),
])
def test_isf_preconditions(run, args):
    assert run("isf", *args).exit_code == 2


def test_config_file_supplies_defaults(run, tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# defaults\ncoupling = [1]x[1]\nsamples = 8\nformat = csv  # short output\n")
    res = run("--config", str(conf), "isf")
    assert res.exit_code == 0, res.output
    header = res.output.splitlines()[0]
    assert header.count(",") >= 2 and res.output == run("isf", "--coupling", "[1]x[1]", "--samples", "8", "--format", "csv").output
    bad = tmp_path / "bad.conf"
    bad.write_text("colour = blue\n")
    assert run("--config", str(bad), "isf").exit_code == 2


def test_verify(run):
    res = run("verify", "1,2")
    assert res.exit_code == 0
    assert "all tables pass" in res.output
    # eight ranks fit degree <= 2 only, too low for some [2]x[1] entries
    low = run("verify", "2", "--samples", "8")
    assert low.exit_code == 1 and "no fit" in low.output
    res = run("verify", "1", "--samples", "8", "--json")
    assert json.loads(res.output)["passed"] is True
    assert run("verify", "12").exit_code == 2


def test_verify_reports_a_difference(run, monkeypatch):
    from brauer_cgc import soncgc

    original = soncgc.compare_with_fixture

    def broken(table, fx):
        diffs, skipped = original(table, fx)
        return diffs + ["injected"], skipped

    monkeypatch.setattr(soncgc, "compare_with_fixture", broken)
    assert run("verify", "1", "--samples", "8").exit_code == 1


def test_table_selection():
    assert cli.parse_table_selection("1,3-5") == [1, 3, 4, 5]
    assert cli.parse_table_selection("all") == list(range(1, 10))


def test_run_config_digest_depends_on_settings():
    a = cli.RunConfig("isf", "table1", 8)
    assert a.digest() == cli.RunConfig("isf", "table1", 8).digest()
    assert a.digest() != cli.RunConfig("isf", "table1", 9).digest()
