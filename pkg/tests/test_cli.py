import json
import math

import pytest

from gcdstats.cli import main, parse_n_rule


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_parse_n_rule():
    assert parse_n_rule("1000", 50) == 1000
    assert parse_n_rule("m^2.5", 64) == 32768
    assert parse_n_rule("exp(m^0.3)", 100) == round(math.exp(100**0.3))
    with pytest.raises(ValueError):
        parse_n_rule("m**2", 10)


def test_tables_cache_roundtrip(tmp_path, capsys):
    out = str(tmp_path / "t.tbl")
    code, text = run_cli(["tables", "--n", "5000", "--orders", "1,2", "--out", out], capsys)
    assert code == 0
    first = json.loads(text)
    assert first["cache"]["hit"] is False
    code, text = run_cli(["tables", "--n", "5000", "--orders", "1,2", "--out", out], capsys)
    assert code == 0
    second = json.loads(text)
    assert second["cache"]["hit"] is True
    assert second["cache"]["sha256"] == first["cache"]["sha256"]


def test_tables_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["tables", "--n", "0"])
    assert err.value.code == 2


def test_exact_mu(capsys):
    code, text = run_cli(["exact", "--quantity", "mu", "--n", "2", "--r", "1"], capsys)
    assert code == 0
    payload = json.loads(text)
    assert payload["value"] == 0.75
    assert payload["numerator"] == "3"
    assert payload["exact"] is True


def test_exact_varC(capsys):
    code, text = run_cli(
        ["exact", "--quantity", "varC", "--n", "2", "--m", "3"], capsys)
    assert json.loads(text)["value"] == 0.9375


def test_exact_pmf(capsys):
    code, text = run_cli(["exact", "--quantity", "pmf", "--n", "2", "--r", "2"], capsys)
    payload = json.loads(text)
    assert payload["values"] == [0.75, 0.25]
    assert payload["numerators"] == ["3", "1"]


@pytest.mark.parametrize("argv,expected", [
    (["--quantity", "nu", "--n", "2", "--r", "1"], 1.25),
    (["--quantity", "c", "--n", "2", "--r", "1"], 0.0625),
    (["--quantity", "d", "--n", "2", "--r", "1"], 0.0625),
    (["--quantity", "moment", "--n", "2", "--r", "2", "--q", "2"], 1.75),
    (["--quantity", "pi", "--n", "2", "--r", "2"], 1.625),
    (["--quantity", "gamma", "--n", "2", "--r", "2", "--s", "1"], 0.0625),
    (["--quantity", "omega", "--n", "2", "--r", "2", "--s", "1"], 0.0625),
    (["--quantity", "varZ", "--n", "2", "--m", "3"], 0.9375),
    (["--quantity", "tail", "--n", "2", "--t", "1"], 0.25),
])
def test_exact_quantities(argv, expected, capsys):
    code, text = run_cli(["exact"] + argv, capsys)
    assert code == 0
    assert json.loads(text)["value"] == expected


def test_exact_missing_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["exact", "--quantity", "varC", "--n", "4"])
    assert err.value.code == 2


def test_exact_unknown_quantity_is_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["exact", "--quantity", "bogus", "--n", "4"])
    assert err.value.code == 2


def test_constants_table(capsys):
    code, text = run_cli(["constants", "--cutoff", "20000"], capsys)
    assert code == 0
    payload = json.loads(text)
    names = payload["constants"]
    assert abs(names["delta"]["value"] - 0.01186) < 2e-4
    assert "delta_toth" in names and "S_2^(1)" in names and "M(2.0)" in names


def test_simulate_writes_csv_and_json(tmp_path, capsys):
    prefix = str(tmp_path / "run")
    argv = ["simulate", "--statistic", "C", "--m", "8", "--n", "30",
            "--reps", "40", "--seed", "5", "--out", prefix]
    code, _ = run_cli(argv, capsys)
    assert code == 0
    csv_bytes = (tmp_path / "run.csv").read_bytes()
    lines = csv_bytes.decode("utf-8").split("\n")
    assert lines[0] == "index,raw,normalized"
    assert len(lines) == 42  # header + 40 rows + trailing newline
    assert b"\r" not in csv_bytes
    summary = json.loads((tmp_path / "run.json").read_text())
    assert summary["manifest"]["params"]["seed"] == 5
    assert "ks" in summary["distance"]

    prefix2 = str(tmp_path / "again")
    run_cli(argv[:-1] + [prefix2], capsys)
    assert (tmp_path / "again.csv").read_bytes() == csv_bytes
    assert json.loads((tmp_path / "again.json").read_text())["mean"] == summary["mean"]


def test_simulate_n_rule_and_poisson(tmp_path, capsys):
    code, text = run_cli(
        ["simulate", "--statistic", "N", "--m", "12", "--n", "m^2.5",
         "--reps", "30", "--t", "1.0", "--seed", "3"], capsys)
    assert code == 0
    payload = json.loads(text)
    assert payload["manifest"]["params"]["n"] == round(12**2.5)
    assert "tv" in payload["distance"]


def test_simulate_frechet_warning_label(capsys):
    code, text = run_cli(
        ["simulate", "--statistic", "M", "--m", "30", "--n", "100",
         "--reps", "10", "--seed", "1"], capsys)
    payload = json.loads(text)
    assert any("Frechet" in w for w in payload["regime_warnings"])


def test_verify_suite_stronglaw(capsys):
    code, text = run_cli(["verify", "--suite", "stronglaw"], capsys)
    assert code == 0
    lines = [ln for ln in text.strip().split("\n") if ln]
    assert all(ln.startswith("PASS") for ln in lines)


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as err:
        main(["verify", "--suite", "nope"])
    assert err.value.code == 2
