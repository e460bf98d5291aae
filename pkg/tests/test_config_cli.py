import json
from pathlib import Path

import pytest

from tracediv.cli import run
from tracediv.config import load_matrix, parse_literal, parse_text, parse_tower, parse_abelian
from tracediv.errors import ConfigError
from tracediv.field_tower import build_tower

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def test_literals():
    t = build_tower(2, 1, 3)
    assert parse_literal(t, "0") == t.ZERO == parse_literal(t, 0)
    assert parse_literal(t, "1") == t.ONE
    assert parse_literal(t, "a^9") == 2
    assert parse_literal(t, "a^-1") == 6
    assert parse_literal(t, [0, 1]) == 1
    for bad in ("a^", "b^2", [0, 2], [1, 0, 0, 1], 3.5):
        with pytest.raises(ConfigError):
            parse_literal(t, bad)


def test_error_positions(tmp_path):
    with pytest.raises(ConfigError) as exc:
        load_matrix(SAMPLES / "bad_literal.toml")
    assert (exc.value.line, exc.value.column) == (6, 17)
    f = tmp_path / "broken.toml"
    f.write_text("[field]\np = \n")
    with pytest.raises(ConfigError) as exc:
        load_matrix(f)
    assert exc.value.line == 2
    data, src = parse_text("[field]\np = 4\n")
    with pytest.raises(ConfigError):
        parse_tower(data, src)
    data, src = parse_text("[code]\np = 2\ngroup = [6]\nrows = [[1]]\n")
    with pytest.raises(ConfigError) as exc:
        parse_abelian(data, src)
    assert exc.value.line == 3


def _json(args, capsys):
    code = run(args + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_valuation_command(capsys):
    code, rep = _json(["valuation", "--matrix", str(SAMPLES / "simplex.toml"), "--oracle"], capsys)
    assert code == 0
    assert rep["criterion"]["valuation"] == {"kind": "finite", "value": "2"}
    assert rep["cross_check"]["pass"]


def test_json_is_deterministic(capsys):
    args = ["abelian", "--spec", str(SAMPLES / "z3xz3.toml"), "--oracle", "--criterion"]
    _, a = _json(args, capsys)
    _, b = _json(args, capsys)
    a.pop("timing"), b.pop("timing")
    assert a == b


def test_exit_codes(capsys, tmp_path):
    assert run(["valuation", "--matrix", str(SAMPLES / "bad_literal.toml")]) == 2
    assert "bad_literal.toml:6:17" in capsys.readouterr().err
    assert run(["valuation", "--matrix", str(tmp_path / "missing.toml")]) == 2
    spec = tmp_path / "ternary.toml"
    spec.write_text("[code]\np = 3\ngroup = [5]\nrows = [[1]]\n")
    # the literal McEliece exponent disagrees with the program here
    assert run(["abelian", "--spec", str(spec), "--mceliece"]) == 1
    assert run(["abelian", "--spec", str(SAMPLES / "cyclic_7.toml"), "--mceliece", "--oracle"]) == 0
    capsys.readouterr()


def test_artin_schreier_command(capsys):
    code, rep = _json(["artin-schreier", "--poly", str(SAMPLES / "quadric.toml"), "--bounds", "--count"], capsys)
    assert code == 0 and rep["count"]["N"] == 20
    assert rep["bounds"]["violations"] == []
    code, rep = _json(["artin-schreier", "--search-extremal", "2", "2", "--field", "2", "1", "2"], capsys)
    assert code == 0 and rep["search"]["status"] == "found"


def test_verify_stickelberger_csv(capsys):
    assert run(["verify", "--stickelberger", "--q", "9", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("suite,q,i") and len(lines) == 9


def test_output_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run(["valuation", "--matrix", str(SAMPLES / "simplex.toml"), "--format", "json", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["command"] == "valuation"
