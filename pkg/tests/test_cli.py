import json
import shutil
import subprocess

import pytest

from lhomdc import dcomplex as dcx
from lhomdc.cli import main
from lhomdc.dcomplex import DoubleComplex, FieldSpec, GenConfig
from lhomdc.exactlinalg import Mat


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def sample(tmp_path):
    path = tmp_path / "dc.json"
    dcx.save(dcx.generate(GenConfig("tensor", 3, 3, 4, FieldSpec(3), 7)), path)
    return path


@pytest.fixture
def broken(tmp_path):
    one = Mat.identity(FieldSpec(2), 1)
    dc = DoubleComplex.from_maps(FieldSpec(2), [[1, 1, 1]], {(0, 0): one, (0, 1): one}, {})
    path = tmp_path / "bad.json"
    path.write_text(dcx.dumps(dc))
    return path


def test_validate(capsys, sample, broken):
    code, out, _ = run(capsys, "validate", sample)
    assert code == 0 and json.loads(out)["schema"] == 1
    code, out, _ = run(capsys, "validate", broken)
    assert code == 1 and json.loads(out)["violations"][0]["law"] == "horizontal"


def test_invalid_complex_is_an_input_error_elsewhere(capsys, broken):
    code, out, err = run(capsys, "homology", broken, "--all")
    assert code == 2 and out == "" and json.loads(err)["error"] == "invalid double complex"


def test_homology_rows(capsys, sample):
    code, out, _ = run(capsys, "homology", sample, "--all")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 9 * 18
    code, out, _ = run(capsys, "homology", sample, "--at", "1,1", "--kind", "Astar")
    assert [r["kind"] for r in json.loads(out)["rows"]] == ["Astar"]
    code, out, _ = run(capsys, "homology", sample, "--at", "1,1", "--format", "text")
    assert code == 0 and len(out.strip().splitlines()) == 18 + 1


def test_poset_and_dot(capsys, sample, tmp_path):
    dot = tmp_path / "p.dot"
    code, out, _ = run(capsys, "poset", sample, "--at", "1,1", "--relation", "prec", "--dot", dot)
    assert code == 0 and json.loads(out)["bottom"] == "starA"
    assert dot.read_text().startswith("digraph")
    code, out, _ = run(capsys, "poset", sample, "--at", "0,0", "--format", "dot")
    assert out.startswith('digraph "hook_0_0"')


def test_suites(capsys, sample):
    for cmd in (["exact", sample, "--suite", "paper"], ["salamander", sample], ["fibration", sample]):
        code, out, _ = run(capsys, *cmd)
        assert code == 0 and json.loads(out)["passed"], cmd


def test_output_is_deterministic(capsys, sample, tmp_path):
    outs = []
    for n in range(2):
        code, out, _ = run(capsys, "exact", sample)
        outs.append(out)
        path = tmp_path / f"g{n}.json"
        run(capsys, "gen", "--mode", "direct_sum", "--seed", 5, "--field", "Q", "-o", path)
    assert outs[0] == outs[1]
    assert (tmp_path / "g0.json").read_bytes() == (tmp_path / "g1.json").read_bytes()
    assert dcx.load(tmp_path / "g0.json").field == FieldSpec(None)


def test_gen_to_stdout(capsys):
    code, out, _ = run(capsys, "gen", "--seed", 1, "--rows", 2, "--cols", 2)
    assert code == 0 and len(dcx.loads(out).dims) == 2


@pytest.mark.parametrize("argv", [
    [],
    ["gen", "--mode", "tensor"],
    ["homology", "nope.json"],
    ["homology", "x", "--at", "1;1"],
    ["poset", "x", "--at", "0,0", "--relation", "sideways"],
    ["search-iv", "--random", "2", "--budget", "0"],
    ["gen", "--seed", "1", "--field", "F4"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert json.loads(err.splitlines()[-1])["schema"] == 1


def test_homology_position_outside_grid(capsys, sample):
    code, _, err = run(capsys, "homology", sample, "--at", "5,5")
    assert code == 2


def test_search_iv(capsys, sample):
    code, out, _ = run(capsys, "search-iv", "--file", sample, "--budget", 2000)
    doc = json.loads(out)
    assert doc["examined"] <= 2000 and code == (1 if doc["witnesses"] else 0)
    code, out, _ = run(capsys, "search-iv", "--random", 2, "--seed", 3, "--format", "text")
    assert out.strip().splitlines()[-1].startswith("total")


@pytest.mark.skipif(shutil.which("lhomdc") is None, reason="console script not installed")
def test_console_script(sample):
    proc = subprocess.run(["lhomdc", "validate", str(sample)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["schema"] == 1
