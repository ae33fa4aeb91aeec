import json
import subprocess
import sys

import pytest

from conftest import HERE
from polylink.cli import main

DATA = HERE / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    assert out.splitlines() == [
        "hexagonal V=2 E=3 F=1 degrees=3",
        "kagome V=3 E=6 F=3 degrees=4",
        "square V=1 E=2 F=1 degrees=4",
        "triangular V=1 E=3 F=2 degrees=6",
    ]
    assert run(capsys, "list")[1] == out


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--tiling", "hexagonal", "--method", "cr:2")
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "Polycatenane"
    assert report["loops"][0]["word"] == "e1+.e3-.e2-.e1-.e3+.e2+"


def test_classify_with_oracle(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "classify", "--tiling", "square", "--method", "br:1",
                       "--oracle", "--report", str(path))
    assert code == 0 and out == ""
    report = json.loads(path.read_text())
    assert report["oracle"]["agrees"] is True
    assert report["oracle"]["verdict"] == report["verdict"]


def test_invalid_structure_exit_code(capsys):
    code, out, _ = run(capsys, "classify", "--cell", str(DATA / "knotted.tcell"),
                       "--method", "cr:0")
    assert code == 2
    assert json.loads(out)["verdict"] == "Invalid"
    assert "knotted" in json.loads(out)["invalid_reason"]


@pytest.mark.parametrize("argv, message", [
    (["classify", "--tiling", "hexagonal", "--method", "cr:s"], "error (method)"),
    (["classify", "--tiling", "square", "--method", "zz:1"], "error (method)"),
    (["classify", "--cell", "/nonexistent.tcell", "--method", "cr:1"], "cannot read"),
    (["render", "--tiling", "square", "--method", "cr:1"], "needs --svg"),
    (["render", "--tiling", "square", "--method", "cr:s", "--svg", "-"], "--period"),
])
def test_errors_exit_one(capsys, argv, message):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert message in err


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["classify", "--tiling", "square"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["render", "--tiling", "square", "--method", "cr:1", "--supercell", "0x2"])
    assert info.value.code == 1


def test_bad_cell_file(capsys, tmp_path):
    path = tmp_path / "bad.tcell"
    path.write_text("tcell v1\nvertex v\nedge e1 v v 1 0\nrotation v e1+ e1-\n")
    code, _, err = run(capsys, "classify", "--cell", str(path), "--method", "cr:1")
    assert code == 1
    assert "error (degree)" in err
    path.write_text("tcell v1\nvertex v\nedge e1 v v 1 q\n")
    code, _, err = run(capsys, "validate", "--cell", str(path))
    assert code == 1
    assert "line 3" in err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "--cell", str(DATA / "mixed.tcell"))
    assert code == 0
    assert out == "valid: mixed V=2 E=5 F=3 degrees=5\n"


def test_render_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    j = tmp_path / "a.json"
    for path in (a, b):
        code, _, _ = run(capsys, "render", "--tiling", "hexagonal", "--method", "br:2",
                         "--supercell", "3x3", "--svg", str(path), "--json", str(j))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().count('class="halo"') == 54
    assert json.loads(j.read_text())["tiles"] == [3, 3]


def test_render_branched_zero(capsys):
    code, out, _ = run(capsys, "render", "--tiling", "kagome", "--method", "br:0", "--svg", "-")
    assert code == 0
    assert 'class="halo"' not in out


def test_render_period(capsys):
    code, out, _ = run(capsys, "render", "--tiling", "square", "--method", "cr:s",
                       "--period", "auto", "--json", "-")
    assert code == 0
    assert json.loads(out)["cell"] == "square[2x2]"
    code, out, _ = run(capsys, "render", "--tiling", "square", "--method", "cr:s",
                       "--period", "2x2", "--svg", "-", "-v")
    assert code == 0 and out.startswith("<?xml")


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--tiling", "triangular", "--method", "cr:1")
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "Weave"
    assert report["patch"] == 6


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polylink.cli", "classify", "--tiling",
                           "square", "--method", "cr:2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "Weave"
