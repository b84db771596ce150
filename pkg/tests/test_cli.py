import io
import json
import subprocess
import sys

import pytest

from shapeloci.cli import main

EX1 = {"n": 4, "sets": [[1, 3, 4], [1, 2], [2, 3]]}
INTERVAL_EX = {"n": 6, "sets": [[1, 2, 4, 5], [2, 3], [5, 6]]}


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        text = stdin if isinstance(stdin, str) else json.dumps(stdin)
        monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, monkeypatch, argv, stdin=None):
    code, out, _ = run(capsys, monkeypatch, argv, stdin)
    return code, json.loads(out)


def test_dim(capsys, monkeypatch):
    assert run_json(capsys, monkeypatch, ["dim"], EX1) == (0, {"dimension": 3})


def test_interval_rank(capsys, monkeypatch):
    code, out = run_json(capsys, monkeypatch, ["interval-rank"], INTERVAL_EX)
    assert code == 0
    assert out["rows"][0] == [1, 2, 2, 2, 3, 3] and out["rows"][5] == [1]


def test_interval_envelope_pipeline(capsys, monkeypatch, tmp_path):
    _, r = run_json(capsys, monkeypatch, ["interval-rank"], INTERVAL_EX)
    path = tmp_path / "r.json"
    path.write_text(json.dumps(r))
    code, env = run_json(capsys, monkeypatch, ["interval-envelope", str(path), "--k", "3"])
    assert code == 0 and len(env["bases"]) == 15 and [1, 4, 5] in env["bases"]


def test_matroid_and_minimal(capsys, monkeypatch):
    code, m = run_json(capsys, monkeypatch, ["matroid"], EX1)
    assert code == 0 and m["bases"] == [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]
    code, res = run_json(capsys, monkeypatch, ["minimal"], EX1)
    assert res["minimal"] is False and res["violator"] == [1, 2, 3]
    assert sorted(res["reduced"]["sets"]) == [[1, 2], [2, 3], [3, 4]]


def test_positroid_verbs(capsys, monkeypatch):
    bad = {"n": 4, "sets": [[1, 3, 4], [2, 4]]}
    assert run_json(capsys, monkeypatch, ["is-positroid"], bad) == (0, {"positroid": False})
    code, out = run_json(capsys, monkeypatch, ["crossings"], bad)
    assert out["crossings"] == [{"i": 1, "j": 2, "witness": [1, 2, 3, 4]}]
    code, out = run_json(capsys, monkeypatch, ["envelope"], bad)
    assert out["positroid"] is False
    code, out = run_json(capsys, monkeypatch, ["ec"], {"n": 4, "sets": [[3, 4], [1, 2], [2, 3]]})
    assert out["ec"] == out["closed_form"] == out["restricted"] == 0


def test_is_transversal_on_bases(capsys, monkeypatch):
    bases = [[i, j] for i in range(1, 7) for j in range(i + 1, 7) if (i, j) not in [(1, 2), (3, 4), (5, 6)]]
    code, out = run_json(capsys, monkeypatch, ["is-transversal"], {"n": 6, "bases": bases})
    assert out == {"transversal": False, "presentation": None}
    assert run_json(capsys, monkeypatch, ["is-positroid"], {"n": 6, "bases": bases}) == (0, {"positroid": True})


def test_pivot_and_gale(capsys, monkeypatch):
    path = {"n": 4, "sets": [[1, 2], [2, 3], [3, 4]]}
    code, out = run_json(capsys, monkeypatch, ["pivot-targets", "--set", "1"], path)
    assert out["targets"] == [[1, 2], [1, 3], [1, 4]]
    gale = {"n": 6, "sets": [[1, 2, 3, 4], [1, 2, 3, 5], [4, 5, 6]]}
    code, out = run_json(capsys, monkeypatch, ["gale-minimal", "--a", "4"], gale)
    assert sorted(out["presentation"]["sets"]) == [[1, 2, 4, 5], [1, 3, 4, 5], [4, 5, 6]]
    assert out["noncrossing"] is True


def test_wld_verbs(capsys, monkeypatch):
    w = {"n": 6, "propagators": [[2, 4], [4, 6]]}
    code, out = run_json(capsys, monkeypatch, ["wld", "check"], w)
    assert out == {"admissible": True, "dimension": 6, "positroid": True}
    code, out = run_json(capsys, monkeypatch, ["wld", "convert"], w)
    assert out["sets"] == [[2, 3, 4, 5], [1, 4, 5, 6]]
    code, out = run_json(capsys, monkeypatch, ["wld", "equiv"], [w, w])
    assert out == {"equivalent": True}
    assert run_json(capsys, monkeypatch, ["wld", "catalan", "6"]) == (0, {"vertices": 6, "count": 5})
    code, out = run_json(capsys, monkeypatch, ["wld", "uncross"], w)
    assert out == w


def test_oracle_verb(capsys, monkeypatch):
    code, out = run_json(capsys, monkeypatch, ["oracle", "--seed", "3"], EX1)
    assert code == 0 and out["agrees"] and len(out["bases"]) == 4


def test_verify_conjecture_small(capsys, monkeypatch, tmp_path):
    report = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, monkeypatch, ["verify-conjecture", "--max-n", "5", "--max-k", "2", "--out", str(report), "--threads", "1"])
    summary = json.loads(out)
    assert code == 0 and summary["counterexamples"] == []
    code, out, _ = run(capsys, monkeypatch, ["verify-conjecture", "--max-n", "5", "--max-k", "2", "--out", str(report), "--resume", str(report), "--threads", "1"])
    assert json.loads(out)["tested"] == 0


def test_lemma_check_exit_code(capsys, monkeypatch, tmp_path):
    code, out, _ = run(capsys, monkeypatch, ["verify-conjecture", "--max-n", "5", "--max-k", "3", "--check-lemma", "--out", str(tmp_path / "r"), "--threads", "1"])
    assert code == 2 and json.loads(out)["lemma_anomalies"]


def test_exit_codes(capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, ["dim"], '{"n": 4, "sets": [[1, 3')
    assert code == 1 and "line 1 column" in err
    code, _, err = run(capsys, monkeypatch, ["matroid"], {"n": 2, "sets": [[1], [1]]})
    assert code == 1
    code, _, _ = run(capsys, monkeypatch, ["dim"], {"n": 4, "sets": [[1, 5]]})
    assert code == 1
    with pytest.raises(SystemExit) as exc:
        main(["no-such-verb"])
    assert exc.value.code == 1
    code, _, err = run(capsys, monkeypatch, ["wld", "check"], {"n": 6, "propagators": [[1, 2]]})
    assert code == 1


def test_uncross_non_positroid_is_a_domain_error(capsys, monkeypatch):
    w = {"n": 6, "propagators": [[1, 3], [2, 5]]}
    code, out, err = run(capsys, monkeypatch, ["wld", "uncross"], w)
    assert code == 1 and "not a positroid" in err


def test_pretty_and_determinism(capsys, monkeypatch):
    _, a, _ = run(capsys, monkeypatch, ["matroid", "--pretty"], EX1)
    _, b, _ = run(capsys, monkeypatch, ["matroid", "--pretty"], EX1)
    assert a == b and "\n  " in a


def test_module_entry_point(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(EX1))
    res = subprocess.run([sys.executable, "-m", "shapeloci", "dim", str(path)], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout) == {"dimension": 3}
