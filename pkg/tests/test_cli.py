import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from quadric_bundles import cli, report

FULL = "genus 2\ndL 3\ndegrees 1 0\n* *\n* *\n"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out), out


def value(r):
    return F(r["num"], r["den"])


@pytest.fixture
def bundle_file(tmp_path):
    def write(text, name="b.txt"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return write


def test_chambers_example(capsys):
    doc, _ = run_json(capsys, "chambers", "-n", "2", "-d", "2", "--dL", "6")
    assert [value(w["value"]) for w in doc["results"]["walls"]] == [-1, 0, 1]
    chambers = doc["results"]["chambers"]
    assert len(chambers) == 3 and chambers[0]["kind"] == "tail" and chambers[0]["lower"] is None
    assert doc["seed"] == 0 and doc["inputs"] == {"n": 2, "d": 2, "dL": 6, "genus": 2}


def test_chambers_rank_one(capsys):
    doc, _ = run_json(capsys, "chambers", "-n", "1", "-d", "0", "--dL", "4")
    assert [value(w["value"]) for w in doc["results"]["walls"]] == [0]


def test_chambers_infeasible_exit_2(capsys):
    code, out, err = run(capsys, "chambers", "-n", "2", "-d", "9", "--dL", "6")
    assert code == 2 and out == "" and "error" in err


def test_chambers_text(capsys):
    code, out, _ = run(capsys, "chambers", "-n", "2", "-d", "2", "--dL", "6")
    assert code == 0 and "walls:" in out and "(-inf, -1)" in out


def test_check_alpha(capsys, bundle_file):
    doc, _ = run_json(capsys, "check", bundle_file(FULL), "--alpha", "-1")
    assert doc["results"]["verdict"]["class"] == "Stable"
    doc, _ = run_json(capsys, "check", bundle_file(FULL), "--alpha", "0")
    (w,) = doc["results"]["verdict"]["witnesses"]
    assert doc["results"]["verdict"]["class"] == "StrictlySemistable"
    assert w["subobject"]["subset"] == [1] and w["clause"] == "1a" and value(w["slack"]) == 0


def test_check_all_chambers(capsys, bundle_file):
    doc, _ = run_json(capsys, "check", bundle_file(FULL), "--all-chambers")
    rows = doc["results"]["chambers"]
    assert all(r["verdict"]["class"] == "Stable" for r in rows if value(r["chamber"]["upper"]) <= 0)
    changes = [value(w["wall"]) for w in doc["results"]["walls"] if w["changes"]]
    assert 0 in changes
    for w in doc["results"]["walls"]:
        if w["changes"]:
            assert w["zero_slack_witnesses"]


@pytest.mark.parametrize(
    "text",
    [
        "genus 2\ndL 2\ndegrees 0 0\n* 0\n* *\n",
        "genus 2\ndL 0\ndegrees 1 0\n* *\n* *\n",
        "genus 2\ndL 2\ndegrees 0 0\n0 0\n0 0\n",
        "genus 1\ndL 2\ndegrees 0 0\n* *\n* *\n",
    ],
)
def test_check_malformed_exit_2(capsys, bundle_file, text):
    code, out, err = run(capsys, "check", bundle_file(text), "--alpha", "0")
    assert code == 2 and out == "" and err.startswith("error:")


def test_check_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "nope.txt"), "--alpha", "0")
    assert code == 2 and "cannot read" in err


def test_bad_alpha_syntax_exit_2(capsys, bundle_file):
    with pytest.raises(SystemExit) as exc:
        cli.main(["check", bundle_file(FULL), "--alpha", "zero"])
    assert exc.value.code == 2


def test_decimal_alpha_read_exactly(capsys, bundle_file):
    doc, _ = run_json(capsys, "check", bundle_file(FULL), "--alpha", "-0.5")
    assert doc["inputs"]["alpha"] == {"num": -1, "den": 2, "decimal": "-0.5"}


def test_sweep_small_grid(capsys):
    doc, _ = run_json(capsys, "sweep", "--n-max", "2", "--deg-bound", "2", "--dL-max", "4", "-g", "2")
    assert doc["results"]["all_passed"] is True
    assert all(p["violations"] == 0 for p in doc["results"]["properties"].values())
    assert doc["results"]["bundles"] > 0


def test_sweep_grid_too_large(capsys):
    code, _, err = run(capsys, "sweep", "--n-max", "6", "--deg-bound", "9", "--dL-max", "30")
    assert code == 2 and "limit" in err


def test_sweep_violation_exit_1(capsys, monkeypatch):
    from quadric_bundles import sweep

    real = sweep.run_sweep

    def broken(*a, **k):
        res = real(*a, **k)
        res.record("wall_locality", 1, [{"n": 1, "degrees": [0], "pattern": ["*"], "twist_degree": 0}])
        return res

    monkeypatch.setattr(sweep, "run_sweep", broken)
    code, out, _ = run(capsys, "sweep", "--n-max", "1", "--deg-bound", "1", "--dL-max", "1")
    assert code == 1 and "VIOLATIONS FOUND" in out


def test_report_higgs(capsys):
    doc, _ = run_json(capsys, "report", "higgs", "--group", "sp", "--n", "2", "-g", "3", "-d", "2")
    rep = doc["results"]["report"]
    assert rep["connected"] is True and rep["minima_are_quadric_bundles"] is True and rep["empty"] is False


def test_report_geometry(capsys):
    doc, _ = run_json(capsys, "report", "geometry", "-g", "4", "-d", "0", "--dL", "8")
    assert doc["results"]["fixed_determinant"]["betti"] == [0, 2, 8]


def test_report_geometry_out_of_range_not_asserted(capsys):
    doc, _ = run_json(capsys, "report", "geometry", "-g", "2", "-d", "5", "--dL", "6")
    assert doc["results"]["fiber"] is None and doc["results"]["fiber_not_asserted"]


def test_report_maxdeg(capsys):
    doc, _ = run_json(capsys, "report", "maxdeg", "-n", "3", "--dL", "2", "-g", "2")
    rep = doc["results"]["report"]
    assert rep["classification"] == "Orthogonal" and rep["min_components"] == 32


def test_report_maxdeg_nonintegral_exit_2(capsys):
    code, _, err = run(capsys, "report", "maxdeg", "-n", "3", "--dL", "3", "-g", "2")
    assert code == 2 and "integer" in err


def test_report_rank2_with_alpha(capsys):
    doc, _ = run_json(capsys, "report", "rank2", "-g", "2", "-d", "0", "--dL", "3", "--alpha", "0")
    assert doc["results"]["connectedness_at_alpha"] == "ConnectedNonempty"
    assert doc["results"]["report"]["expected_dim"] == 10


def test_report_rank2_maximal_degree_exit_2(capsys):
    code, _, _ = run(capsys, "report", "rank2", "-g", "2", "-d", "3", "--dL", "3")
    assert code == 2


REPORT_ARGS = [
    ("report", "rank2", "-g", "2", "-d", "0", "--dL", "3"),
    ("report", "higgs", "--group", "so23", "-g", "3", "-d", "1", "--w", "1"),
    ("report", "geometry", "-g", "5", "-d", "0", "--dL", "10"),
    ("report", "maxdeg", "-n", "2", "--dL", "3", "-g", "2"),
]


@pytest.mark.parametrize("argv", REPORT_ARGS)
def test_every_asserted_fact_cited(capsys, argv):
    doc, _ = run_json(capsys, *argv)
    assert doc["citations"]

    def walk(x):
        if isinstance(x, dict):
            cites = x.get("citations", {})
            for k, v in x.items():
                if k in ("citations", "preconditions_met"):
                    continue
                if v is True or (isinstance(v, int) and not isinstance(v, bool) and k in ("expected_dim", "fiber_dim", "min_components", "picard_rank")):
                    assert k in cites, (k, x)
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(doc["results"])
    found = report.collect_citations(doc["results"])
    assert set(found) <= set(doc["citations"])


@pytest.mark.parametrize(
    "argv",
    [("chambers", "-n", "3", "-d", "1", "--dL", "4"), ("sweep", "--n-max", "2", "--deg-bound", "1", "--dL-max", "3")]
    + REPORT_ARGS,
)
def test_json_round_trip_and_determinism(capsys, argv):
    doc, out = run_json(capsys, *argv)
    assert report.dumps(json.loads(out)) == out
    _, again = run_json(capsys, *argv)
    assert again == out
    assert '"tool_version"' in out and "." not in json.dumps([k for k in doc])


def test_seed_echoed(capsys, bundle_file):
    doc, _ = run_json(capsys, "check", bundle_file(FULL), "--alpha", "-1", "--seed", "17")
    assert doc["seed"] == 17


def test_rationals_never_floats(capsys):
    _, out = run_json(capsys, "chambers", "-n", "3", "-d", "1", "--dL", "4")

    def walk(x):
        assert not isinstance(x, float)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(json.loads(out))
    assert '"decimal": "0.333333"' in out


def test_module_entry_point(tmp_path):
    p = subprocess.run(
        [sys.executable, "-m", "quadric_bundles", "chambers", "-n", "2", "-d", "2", "--dL", "6", "--json"],
        capture_output=True,
        text=True,
    )
    assert p.returncode == 0
    assert json.loads(p.stdout)["command"] == "chambers"
