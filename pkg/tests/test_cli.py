import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from dpcurves import cli

GOLDEN = Path(__file__).parent / "data" / "p2_genus1_d1-5.csv"


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv(cli.CACHE_ENV, raising=False)


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def test_n0_line_count():
    assert run("n0", "--surface", "p2", "--class", "4;") == (0, "620\n")
    assert run("n0", "--surface", "p2x2", "--class", "1;1,1") == (0, "1\n")
    assert run("n0", "--surface", "quadric", "--class", "2,3") == (0, "96\n")


def test_genus1_text():
    code, text = run("genus1", "--surface", "p2", "--class", "3;")
    assert code == 0
    fields = dict(line.split(None, 1) for line in text.splitlines())
    assert fields["n1j"] == "12" and fields["CR"] == "84" and fields["RT1"] == "108"


def test_genus1_json_and_csv():
    code, text = run("genus1", "--surface", "p2", "--class", "4;", "--aut", "j0", "--format", "json")
    assert code == 0 and json.loads(text)["n1j"] == 620
    code, text = run("genus1", "--surface", "p2", "--class", "4;", "--aut", "7", "--format", "csv")
    assert text.splitlines()[1] == "4;,11,3,620,6200,9920,7,3720/7"


def test_table_matches_golden(tmp_path):
    code, text = run("table", "--surface", "p2", "--classes", "1;", "2;", "3;", "4;", "5;")
    assert code == 0 and text == GOLDEN.read_text()
    out = tmp_path / "t.csv"
    assert run("table", "--surface", "p2", "--max-c1", "15", "--output", str(out))[0] == 0
    assert out.read_bytes() == GOLDEN.read_bytes()


def test_table_is_deterministic():
    args = ("table", "--surface", "p2x3", "--max-c1", "7", "--format", "json")
    assert run(*args) == run(*args)


@pytest.mark.parametrize("argv", [
    ["n0", "--surface", "p2x9", "--class", "3;"],
    ["n0", "--surface", "p2", "--class", "3;1"],
    ["n0", "--surface", "p2", "--class", "three"],
    ["n0", "--surface", "cubic", "--class", "1;"],
    ["genus1", "--surface", "p2", "--class", "3;", "--aut", "j5"],
    ["genus1", "--surface", "p2", "--class", "3;", "--aut", "0"],
    ["table", "--surface", "p2", "--max-c1", "0"],
    ["cache", "--surface", "p2"],
])
def test_invalid_input_exits_1(argv, capsys):
    assert run(*argv)[0] == 1
    assert capsys.readouterr().err.startswith("dpcurves: error:")


def test_del_pezzo_message(capsys):
    run("n0", "--surface", "p2x9", "--class", "3;")
    assert "del Pezzo" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["n0", "--surface", "p2"],
    ["n0", "--surface", "p2", "--class", "3;", "--bogus"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_1(argv):
    with pytest.raises(SystemExit) as info:
        cli.main(argv, io.StringIO())
    assert info.value.code == 1


def test_no_weyl_with_explicit_cache_is_rejected(tmp_path):
    code, _ = run("n0", "--surface", "p2x3", "--class", "3;1,1,1", "--no-weyl", "--cache", str(tmp_path))
    assert code == 1
    args = ("n0", "--surface", "p2x3", "--class", "4;2,1,1")
    assert run(*args, "--no-weyl") == run(*args)


def test_env_cache_is_used(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    assert run("n0", "--surface", "p2x2", "--class", "4;1,1") == (0, "620\n")
    files = sorted(p.name for p in tmp_path.iterdir())
    assert "p2x2.gwcache" in files and set(files) <= {"p2x0.gwcache", "p2x1.gwcache", "p2x2.gwcache"}
    before = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert run("n0", "--surface", "p2x2", "--class", "4;1,1") == (0, "620\n")
    assert {p.name: p.read_bytes() for p in tmp_path.iterdir()} == before


def test_corrupt_cache_is_reported(tmp_path, capsys):
    (tmp_path / "p2x0.gwcache").write_text("GWCACHE 9 p2x0\n")
    assert run("n0", "--surface", "p2", "--class", "3;", "--cache", str(tmp_path))[0] == 1
    assert "line 1:" in capsys.readouterr().err


def test_cache_warm(tmp_path):
    code, text = run("cache", "--surface", "p2x1", "--cache", str(tmp_path), "--warm", "6")
    assert code == 0
    assert text.splitlines()[0].startswith("p2x0: ")
    assert (tmp_path / "p2x1.gwcache").read_text().startswith("GWCACHE 1 p2x1\n")


def test_verify_suite():
    code, text = run("verify", "p2-oracle")
    assert code == 0 and text.startswith("PASS p2-oracle")


def test_verify_failure_exits_2(monkeypatch):
    from dpcurves import verify

    def broken(name):
        res = verify.SuiteResult(name)
        res.check(False, "forced")
        return res

    monkeypatch.setattr(cli, "run_verify_suite", broken)
    code, text = run("verify", "p2-oracle")
    assert code == 2 and text.startswith("FAIL")


def test_module_entry_point():
    env = dict(os.environ, DPCURVES_NUMBA="0")
    env.pop(cli.CACHE_ENV, None)
    proc = subprocess.run([sys.executable, "-m", "dpcurves", "n0", "--surface", "quadric", "--class", "2,2"],
                          capture_output=True, text=True, env=env, check=False)
    assert (proc.returncode, proc.stdout) == (0, "12\n")
