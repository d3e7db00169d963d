import json
import subprocess
import sys
from pathlib import Path

import pytest

from equistab.cli import run

DATA = Path(__file__).resolve().parent.parent / "data"


def call(capsys, *args):
    code = run(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gsets_enum(capsys):
    code, out, _ = call(capsys, "gsets", "enum", "--group", "[2]", "--size", "3")
    assert code == 0
    assert json.loads(out)["count"] == 2


def test_bredon_sign_sphere_exact_output(capsys):
    code, out, _ = call(capsys, "bredon", "homology", "--complex", str(DATA / "s_sigma.json"), "--coeffs", "Z")
    assert code == 0
    assert json.loads(out) == [{"d": 0, "free": 1, "torsion": [2]}, {"d": 1, "free": 0, "torsion": []}]


def test_output_is_deterministic(capsys):
    args = ["conf", "h0-presentation", "--manifold", str(DATA / "rho_c2xc2.json"), "--bound", "4"]
    _, first, _ = call(capsys, *args)
    _, second, _ = call(capsys, *args)
    assert first == second and first


def test_h0_output_feeds_fg(capsys, tmp_path):
    _, out, _ = call(capsys, "conf", "h0-presentation", "--group", "[3]", "--rho", "1", "--bound", "9")
    path = tmp_path / "h0.json"
    path.write_text(out)
    code, out, _ = call(capsys, "stab", "fg", "--module", str(path), "--ring", "sigma[G/G]")
    assert code == 0
    rep = json.loads(out)
    assert rep["finitely_generated"] is False
    assert [c["cardinality"] for c in rep["cokernels"]] == [0, 3, 6, 9]
    code, out, _ = call(capsys, "stab", "fg", "--module", str(path))
    assert json.loads(out)["finitely_generated"] is True


def test_negative_math_answer_exits_zero(capsys):
    code, out, _ = call(capsys, "stab", "check-seq", "--seq", str(DATA / "seq_doubling.json"))
    assert code == 0 and json.loads(out)["stable"] is False


@pytest.mark.parametrize("args,code,kind", [
    (["bredon", "homology", "--complex", "{bad"], 2, "validation"),
    (["bredon", "homology", "--complex", '{"group":[2],"cells":[{"dim":-1}]}'], 2, "validation"),
    (["group", "subgroups", "--group", "[2,2,2,2,2,2,2]"], 3, "resource"),
    (["conf", "range-check", "--group", "[2]", "--rho", "1", "--subgroup", "e", "--dmax", "1", "--kmax", "3"],
     2, "domain"),
    (["stab", "check-seq", "--seq", str(DATA / "seq_doubling.json"), "--window", "9"], 2, "domain"),
    (["conf", "oracle", "--group", "[2]", "--gset", '{"orbits":[{"subgroup":"e","mult":11}]}', "--size", "1"],
     3, "resource"),
])
def test_error_exit_codes(capsys, args, code, kind):
    got, out, err = call(capsys, *args)
    assert got == code
    assert out == ""
    assert json.loads(err)["error"] == kind


def test_schema_mismatch_is_rejected(capsys):
    got, _, err = call(capsys, "stab", "check-seq", "--seq", str(DATA / "s_sigma.json"))
    assert got == 2 and "schema" in json.loads(err)["message"]


def test_manifest_records_inputs(capsys, tmp_path):
    manifest = tmp_path / "m.json"
    code, _, _ = call(capsys, "--manifest", str(manifest), "conf", "oracle", "--group", "[2,2]",
                      "--random", "3", "--max-points", "6", "--seed", "5")
    assert code == 0
    m = json.loads(manifest.read_text())
    assert m["seed"] == 5 and m["bounds"]["max_points"] == 20 and m["command"][0] == "--manifest"
    code, _, _ = call(capsys, "bredon", "homology", "--complex", str(DATA / "s_sigma.json"),
                      "--manifest", str(manifest))
    m = json.loads(manifest.read_text())
    assert len(m["inputs"]) == 1 and len(m["inputs"][0]["sha256"]) == 64


def test_table_format(capsys):
    code, out, _ = call(capsys, "gsets", "marks", "--group", "[2]", "--format", "table")
    assert code == 0 and out.splitlines()[0].split() == ["K", "[G/e]", "[G/G]"]


def test_console_script_and_stdin():
    exe = [sys.executable, "-c", "from equistab.cli import entry; entry()"]
    text = (DATA / "s_sigma.json").read_text()
    res = subprocess.run(exe + ["bredon", "homology", "--complex", "-"], input=text, capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)[0] == {"d": 0, "free": 1, "torsion": [2]}
    res = subprocess.run(exe + ["group", "subgroups", "--group", "[2,2,2,2,2,2,2]"], capture_output=True, text=True)
    assert res.returncode == 3 and json.loads(res.stderr)["error"] == "resource"


@pytest.mark.parametrize("args", [
    ["group", "lattice", "--group", "[4]", "--h", "1", "--k", "e"],
    ["gsets", "restrict", "--group", "[4]", "--gset", '{"orbits":[{"subgroup":"e"}]}', "--to", "1"],
    ["reps", "strata", "--group", "[2,2]", "--rep", '{"regular":1}'],
    ["reps", "stabilizable", "--group", "[3]", "--rep", '{"characters":[{"coeffs":[1]}]}'],
    ["bredon", "fixed", "--complex", str(DATA / "s_sigma.json"), "--subgroup", "G"],
    ["bredon", "check-mackey", "--group", "[2,2]", "--coeffs", "A"],
    ["conf", "components", "--manifold", str(DATA / "rho_c3.json"), "--size", "4"],
    ["conf", "homology", "--manifold", str(DATA / "c2_synthetic.json"), "--gset",
     '{"orbits":[{"subgroup":"e","mult":3},{"subgroup":"G"}]}', "--degree", "2"],
    ["conf", "geometric-module", "--manifold", str(DATA / "rho_c2.json"), "--bound", "6"],
    ["conf", "range-check", "--manifold", str(DATA / "c2_synthetic.json"), "--subgroup", "e", "--dmax", "1",
     "--kmax", "5"],
    ["stab", "check-seq", "--seq", str(DATA / "seq_stable.json"), "--window", "2"],
    ["stab", "restrict", "--group", "[2,4]", "--to", "2"],
    ["stab", "mackey-fg", "--group", "[2]", "--rho", "1", "--bound", "6"],
])
def test_commands_succeed(capsys, args):
    code, out, err = call(capsys, *args)
    assert code == 0, err
    json.loads(out)


@pytest.mark.parametrize("path", sorted(DATA.glob("*.json")), ids=lambda p: p.name)
def test_sample_data_validates(path):
    from equistab.io import validate
    data = json.loads(path.read_text())
    kind = data["schema"].split(".")[1].split("/")[0]
    validate(data, kind)
