import json

import pytest

from burnside.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_examples(capsys):
    code, out, _ = run(capsys, "eval", "[g2,g1]", "--ring", "R", "--t", "1")
    assert code == 0 and "lambda_1 = -1 + y" in out
    code, out, _ = run(capsys, "eval", "", "--ring", "R")
    assert code == 0 and "[[1, 0], [0, 1]]" in out
    code, out, _ = run(capsys, "eval", "g1", "--ring", "sanov")
    assert code == 0 and "[[1, 2], [0, 1]]" in out


def test_order(capsys):
    code, out, _ = run(capsys, "order", "g1", "--q", "2")
    assert code == 0 and "order 2" in out
    code, out, _ = run(capsys, "order", "g2", "--q", "3")
    assert code == 0 and "infinite" in out
    code, out, _ = run(capsys, "order", "[g2,g1]", "--q", "4")
    assert code == 1 and "unknown" in out


def test_ring_info(capsys):
    code, out, _ = run(capsys, "ring-info", "--q", "2", "--format", "json")
    info = json.loads(out)
    assert code == 0 and info["free_rank"] == 1 and info["elementary_divisors"] == [2, 2]
    code, _, err = run(capsys, "ring-info", "--q", "6")
    assert code == 2 and "not a prime power" in err


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "g1 g2")
    assert code == 0 and "u =" in out


def test_usage_errors(capsys):
    assert run(capsys, "verify", "lemma1", "--samples", "0")[0] == 2
    assert run(capsys, "verify", "nosuch")[0] == 2
    assert run(capsys, "eval", "g1^")[0] == 2
    assert run(capsys, "verify", "thm2", "--q", "2", "--k", "4")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_verify_and_replay(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "thm2", "--q", "4", "--samples", "10", "--jobs", "1",
                     "--format", "json", "--out", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["summary"]["report_only"] == ["thm2@q4:fail"]
    code, text, _ = run(capsys, "replay", str(out))
    assert code == 1 and "FAIL" in text


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# profile\nq = 3\nsamples = 3\nseed = 7\n")
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "lemma1", "--config", str(cfg), "--format", "json", "--out", str(out))
    report = json.loads(out.read_text())
    assert code == 0 and report["run"]["config"]["qs"] == [3] and report["run"]["config"]["seed"] == 7
    code, _, _ = run(capsys, "verify", "lemma1", "--config", str(cfg), "--seed", "9", "--format", "json",
                     "--out", str(out))
    assert json.loads(out.read_text())["run"]["config"]["seed"] == 9


def test_text_format(capsys):
    code, out, err = run(capsys, "verify", "sanov", "--samples", "5", "--jobs", "1")
    assert code == 0 and "sanov" in out and "sanov q=2: pass" in err
