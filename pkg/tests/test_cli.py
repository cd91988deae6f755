import json
from pathlib import Path

import jsonschema
import pytest

from sylvester import cli

SCHEMA = json.loads((Path(cli.__file__).parent / "report_schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_solve_p2_emits_verified_cube_sum(capsys):
    code, out = run(capsys, "solve", "--p", "2")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    sums = rep["results"]["cube_sums"]
    assert sums
    for s in sums:
        assert s["n"] in (6, 12)
        assert s["A"] ** 3 + s["B"] ** 3 == s["n"] * s["C"] ** 3


def test_solve_rejects_seven(capsys):
    code = cli.main(["solve", "--p", "7"])
    assert code == 2
    assert "7" in capsys.readouterr().err


def test_precision_range_enforced(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["solve", "--p", "2", "--precision", "32"])
    assert e.value.code == 2


def test_output_is_deterministic(capsys):
    _, a = run(capsys, "solve", "--p", "2")
    _, b = run(capsys, "solve", "--p", "2")
    assert a == b


def test_precision_does_not_change_verdicts(capsys):
    _, a = run(capsys, "solve", "--p", "5")
    _, b = run(capsys, "solve", "--p", "5", "--precision", "1024")
    ja, jb = json.loads(a), json.loads(b)
    assert ja["verdicts"] == jb["verdicts"]
    assert ja["results"]["cube_sums"] == jb["results"]["cube_sums"]


@pytest.mark.parametrize("what", ["beta", "periods", "torsion", "mc-automorphisms", "selmer", "congruence", "gz"])
def test_verify_checks_pass(capsys, what):
    argv = ["verify", what] + ([] if what in ("beta",) else ["--p", "2"])
    code, out = run(capsys, *argv)
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert code == 0 and rep["verdicts"][what] is True


def test_selmer_command(capsys):
    code, out = run(capsys, "selmer", "--p", "2")
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert code == 0


def test_lvalue_command(capsys):
    code, out = run(capsys, "lvalue", "--n", "6", "--precision", "128")
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert code == 0


def test_json_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code = cli.main(["verify", "beta", "--json-out", str(target)])
    capsys.readouterr()
    assert code == 0
    jsonschema.validate(json.loads(target.read_text()), SCHEMA)


def test_timing_flag(capsys):
    code, out = run(capsys, "verify", "beta", "--timing")
    rep = json.loads(out)
    assert "timing" in rep and all(v >= 0 for v in rep["timing"].values())
