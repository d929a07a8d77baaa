import json
import shutil
import subprocess

import pytest

from hamspec import cli, codes, selftest


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(out):
    return json.loads(out)


def test_rates_grid_rows(capsys):
    code, out, _ = run(capsys, "rates", "--grid", "10")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0].startswith("delta,GV,firstLP,cdelta,improved(")
    assert len(lines) == 11


def test_krawchouk_json(capsys):
    code, out, _ = run(capsys, "krawchouk", "--n", "4", "--s", "2")
    assert code == 0
    assert "2" in json.dumps(as_json(out))


def test_ball(capsys):
    code, out, _ = run(capsys, "ball", "--n", "9", "--r", "1")
    assert code == 0
    assert as_json(out)["lambda_r"] == pytest.approx(3.0)


def test_verify_theorem_hamming(capsys, tmp_path):
    path = tmp_path / "h.txt"
    codes.write_code(codes.hamming_7_4(), path)
    code, out, _ = run(capsys, "verify-theorem", str(path))
    rep = as_json(out)
    assert code == 0 and rep["pass"] and rep["rank"] >= rep["bound_ceil"]


def test_lp_cert(capsys):
    code, out, _ = run(capsys, "lp-cert", "--n", "8", "--d", "3")
    assert code == 0 and as_json(out)["feasible"]


def test_transform_roundtrip(capsys, tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("index,value\n" + "".join(f"{i},{v}\n" for i, v in enumerate([1, 0, 0, 0])))
    code, out, _ = run(capsys, "transform", str(path))
    assert code == 0
    vals = [float(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
    assert vals == [0.25] * 4


def test_analytic_checks(capsys):
    code, out, _ = run(capsys, "analytic-checks", "--R", "0.5")
    assert code == 0 and as_json(out)["pass"]


@pytest.mark.parametrize("argv", [
    ["ball", "--n", "0", "--r", "1"],
    ["krawchouk"],
    ["lp-cert", "--n", "6", "--d", "5"],
    ["verify-theorem", "/no/such/file"],
    ["code"],
    ["ensemble", "--model", "linear", "--n", "10", "--R", "2.0"],
    ["no-such-command"],
    ["rates", "--threads", "0"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_verification_failure_exits_1(capsys, tmp_path, monkeypatch):
    from hamspec import theorem_verifier

    path = tmp_path / "h.txt"
    codes.write_code(codes.hamming_7_4(), path)
    orig = theorem_verifier.build_gram

    def broken(c, **kw):
        rep = orig(c, **kw)
        return theorem_verifier.GramReport(**{**rep.__dict__, "trace_lhs": -1.0})

    monkeypatch.setattr(theorem_verifier, "build_gram", broken)
    code, out, _ = run(capsys, "verify-theorem", str(path))
    assert code == 1 and as_json(out)["pass"] is False


def test_ensemble_threads_deterministic(capsys, monkeypatch):
    args = ["ensemble", "--model", "general", "--n", "16", "--R", "0.3", "--trials", "30", "--seed", "5"]
    _, a, _ = run(capsys, "--threads", "1", *args)
    _, b, _ = run(capsys, *args, "--threads", "4")
    monkeypatch.setenv("HAMSPEC_THREADS", "3")
    _, c, _ = run(capsys, *args)
    assert a == b == c


def test_code_sampling_pipes_into_stats(capsys, tmp_path):
    code, out, _ = run(capsys, "code", "sample-linear", "--n", "8", "--k", "3", "--seed", "1")
    assert code == 0 and out.startswith("n=8\nlinear k=3\n")
    path = tmp_path / "c.txt"
    path.write_text(out)
    code, out, _ = run(capsys, "code", "stats", str(path))
    assert code == 0 and as_json(out)["size"] == 8


@pytest.mark.parametrize("name", sorted(selftest.SUITES))
def test_selftests(capsys, name):
    code, out, _ = run(capsys, name, "--selftest")
    assert code == 0 and as_json(out)["pass"]


@pytest.mark.skipif(shutil.which("hamspec") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["hamspec", "rates", "--grid", "3"], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and len(res.stdout.strip().splitlines()) == 4
