import csv
import io
import subprocess
import sys

import pytest

from jmprelax import parser
from jmprelax.cli import main
from jmprelax.testgen import GenParams, gen_cascade, gen_cascade_pair, gen_paper_mutual, gen_random


@pytest.fixture
def write(tmp_path):
    def _write(text, name="in.s"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def test_asm_paper_mutual(write, tmp_path):
    src = write(parser.format(gen_paper_mutual()))
    out, lst = tmp_path / "out.bin", tmp_path / "out.lst"
    assert main(["asm", src, "--out", str(out), "--listing", str(lst)]) == 0
    assert out.read_bytes() == bytes.fromhex("eb02ebfc")
    assert lst.read_text().splitlines()[1].startswith("00000000  eb02")


def test_asm_undefined_target(write, tmp_path, capsys):
    assert main(["asm", write("jmp X"), "--out", str(tmp_path / "o")]) == 3
    assert "undefined jump target 'X'" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_asm_parse_error(write, tmp_path, capsys):
    assert main(["asm", write("jmp X\nmov eax, 1\nX:"), "--out", str(tmp_path / "o")]) == 2
    assert ":2:1:" in capsys.readouterr().err


def test_asm_long_range(write, tmp_path):
    src = write(".mode 16\nA:\nspace 40000\njmp A")
    assert main(["asm", src, "--out", str(tmp_path / "o")]) == 3


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["asm"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    assert main(["asm", str(tmp_path / "missing.s"), "--out", str(tmp_path / "o")]) == 1
    assert main(["bench", "--jumps", "ten"]) == 1
    assert main(["bench", "--algo", "quick"]) == 1


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_asm_algorithms_byte_identical(seed, write, tmp_path):
    src = write(parser.format(gen_random(GenParams(seed, 60, 8))))
    a, b = tmp_path / "a.bin", tmp_path / "b.bin"
    assert main(["asm", src, "--out", str(a), "--algo", "linear"]) == 0
    assert main(["asm", src, "--out", str(b), "--algo", "iterative"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["asm", src, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_mode_override_wins(write, tmp_path):
    src = write(".mode 32\nX:\nspace 200\njmp X")
    out = tmp_path / "o"
    assert main(["asm", src, "--out", str(out), "--mode", "16"]) == 0
    assert out.read_bytes()[200:] == bytes.fromhex("e935ff")


def test_explain_cascade_pair(write, capsys):
    assert main(["explain", write(parser.format(gen_cascade_pair()))]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["idx", "start", "orig_dist", "final_dist", "size",
                                "long_size", "final_off", "final_disp"]
    assert lines[1].split() == ["0", "0", "126", "129", "long", "5", "0", "129"]
    assert lines[2].split() == ["1", "2", "128", "128", "long", "5", "5", "128"]


def test_explain_mutual(write, capsys):
    assert main(["explain", write(parser.format(gen_paper_mutual()))]) == 0
    rows = [l.split() for l in capsys.readouterr().out.splitlines()[1:]]
    assert rows == [["0", "0", "2", "2", "short", "5", "0", "2"],
                    ["1", "2", "-4", "-4", "short", "5", "2", "-4"]]


def test_explain_no_jumps(write, capsys):
    assert main(["explain", write("space 3")]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 1


def test_compare_agrees(write, capsys):
    src = write(parser.format(gen_random(GenParams(42, 3, 20))))
    assert main(["compare", src]) == 0
    assert "3 algorithms agreed" in capsys.readouterr().out


def test_compare_without_brute_force(write, capsys):
    assert main(["compare", write(parser.format(gen_cascade(20)))]) == 0
    assert "2 algorithms agreed" in capsys.readouterr().out


def test_compare_mismatch_path(write, capsys):
    src = write(parser.format(gen_cascade(3)))
    assert main(["compare", src, "--debug-perturb", "1"]) == 4
    assert "jumps [1] differ" in capsys.readouterr().out


def test_gen_kinds(tmp_path, capsys):
    assert main(["gen", "--kind", "paper"]) == 0
    assert parser.parse(capsys.readouterr().out) == gen_paper_mutual()
    assert main(["gen", "--kind", "cascade", "--jumps", "2"]) == 0
    assert parser.parse(capsys.readouterr().out) == gen_cascade(2)
    a, b = tmp_path / "a.s", tmp_path / "b.s"
    assert main(["gen", "--kind", "random", "--jumps", "5", "--seed", "7", "--out", str(a)]) == 0
    assert main(["gen", "--kind", "random", "--jumps", "5", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
    assert parser.parse(a.read_text()) == gen_random(GenParams(7, 5))


def test_bench_csv(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--kind", "cascade", "--jumps", "0;50;100", "--algo", "linear,iterative",
                 "--csv", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert list(rows[0]) == ["algo", "jumps", "ns", "dequeues", "neighbor_checks", "bytes"]
    assert [(r["algo"], r["jumps"]) for r in rows] == [
        ("linear", "0"), ("iterative", "0"), ("linear", "50"), ("iterative", "50"),
        ("linear", "100"), ("iterative", "100")]
    assert rows[0]["dequeues"] == "0"
    for r in rows:
        if r["algo"] == "linear":
            assert int(r["dequeues"]) == int(r["jumps"])
            assert int(r["neighbor_checks"]) <= 130 * int(r["dequeues"])
    assert rows[2]["bytes"] == rows[3]["bytes"]


def test_bench_needs_five_reps():
    assert main(["bench", "--jumps", "10", "--reps", "2"]) == 1


def test_module_entry_point(write):
    proc = subprocess.run([sys.executable, "-m", "jmprelax", "compare", write("X: jmp X")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "agreed" in proc.stdout
