import csv
import io
import json

import pytest

from ratiomem.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEquilibriumCommand:
    def test_preset_json(self, capsys):
        code, out, _ = run(capsys, "equilibrium", "--preset", "paper-example",
                           "--r", "13", "--no-meta")
        assert code == 0
        doc = json.loads(out)
        assert doc["equilibrium"]["x_star"] == pytest.approx(0.1 * (1 - 5 / 13), rel=1e-12)

    def test_no_equilibrium_exit_code(self, capsys):
        code, _, err = run(capsys, "equilibrium", "--preset", "paper-example",
                           "--r", "5")
        assert code == 2
        assert "no positive equilibrium" in err

    def test_inline_predators(self, capsys):
        code, out, _ = run(capsys, "equilibrium", "--r", "13", "--K", "0.1",
                           "--predator", "holling:16:4:8",
                           "--predator", "holling:18:2:12", "--no-meta")
        assert code == 0
        doc = json.loads(out)
        assert doc["equilibrium"]["u_star"] == [0.25, 0.25]

    def test_params_file(self, capsys, tmp_path):
        doc = {"r": 13.0, "K": 0.1, "alpha": 1.0, "predators": [
            {"kind": "holling", "m": 16, "a": 4, "d": 8},
            {"kind": "holling", "m": 18, "a": 2, "d": 12}]}
        path = tmp_path / "params.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "equilibrium", "--params", str(path),
                           "--no-meta")
        assert code == 0


class TestUsageErrors:
    def test_missing_params(self, capsys):
        code, _, err = run(capsys, "equilibrium")
        assert code == 1 and "usage error" in err

    def test_bad_predator_spec(self, capsys):
        code, _, err = run(capsys, "equilibrium", "--r", "1", "--K", "1",
                           "--predator", "holling:16:4")
        assert code == 1

    def test_unknown_command(self, capsys):
        code, _, err = run(capsys, "frobnicate")
        assert code == 1

    def test_invalid_parameter_value(self, capsys):
        code, _, err = run(capsys, "equilibrium", "--r", "-3", "--K", "0.1",
                           "--predator", "holling:16:4:8")
        assert code == 1 and "invalid input" in err

    def test_bifurcate_alpha_sweep_unsupported(self, capsys):
        code, _, err = run(capsys, "bifurcate", "--preset", "paper-example",
                           "--param", "alpha")
        assert code == 1


class TestStabilityCommand:
    def test_robust_case(self, capsys):
        code, out, _ = run(capsys, "stability", "--preset", "paper-example",
                           "--r", "13", "--alpha", "1", "--no-meta")
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["delay_robust"]["holds"] is True
        assert doc["report"]["hurwitz"]["sufficient"] is True
        assert doc["report"]["classification"] == "delay-robust"

    def test_table_format(self, capsys):
        code, out, _ = run(capsys, "stability", "--preset", "paper-example",
                           "--r", "7", "--alpha", "1", "--format", "table")
        assert code == 0
        assert "classification: stable" in out


class TestBifurcateCommand:
    def test_threshold_sweep(self, capsys):
        code, out, _ = run(capsys, "bifurcate", "--preset", "paper-example",
                           "--param", "r", "--from", "4", "--to", "14",
                           "--steps", "21", "--format", "csv", "--no-meta")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 21
        for row in rows:
            r = float(row["r"])
            assert (row["has_equilibrium"] == "True") == (r > 5)
            assert (row["sign_stable"] == "True") == (r >= 8)
            assert (row["delay_robust"] == "True") == (r > 12)

    def test_transitions_reported(self, capsys):
        code, out, _ = run(capsys, "bifurcate", "--preset", "paper-example",
                           "--steps", "21", "--no-meta")
        assert code == 0
        doc = json.loads(out)
        labels = [(t["from"], t["to"]) for t in doc["sweep"]["transitions"]]
        assert ("none", "stable") in labels
        assert ("stable", "sign-stable") in labels
        assert ("sign-stable", "delay-robust") in labels


class TestOtherCommands:
    def test_jacobian(self, capsys):
        code, out, _ = run(capsys, "jacobian", "--preset", "paper-example",
                           "--r", "13", "--alpha", "1", "--no-meta")
        assert code == 0
        doc = json.loads(out)
        assert doc["jacobians"]["A"]["matrix"][0] == [-5.0, -4.0, -8.0]

    def test_hscan_csv(self, capsys):
        code, out, _ = run(capsys, "hscan", "--preset", "paper-example",
                           "--r", "7", "--from", "0.5", "--to", "20",
                           "--steps", "30", "--format", "csv", "--no-meta")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 30
        assert {"alpha", "H", "abscissa", "stable"} == set(rows[0])

    def test_simulate_small(self, capsys):
        code, out, _ = run(capsys, "simulate", "--preset", "paper-example",
                           "--r", "13", "--alpha", "1", "--t-end", "5",
                           "--samples", "11", "--no-meta")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["trajectory"]["times"]) == 11

    def test_nullcline_small(self, capsys):
        code, out, _ = run(capsys, "nullcline", "--preset", "paper-example",
                           "--r", "10", "--grid", "5", "--no-meta")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["nullcline"]["roots"]) == 5

    def test_verify(self, capsys):
        code, out, _ = run(capsys, "verify", "--seed", "1")
        assert code == 0
        assert "all checks passed" in out


class TestReproducibility:
    def test_no_meta_is_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            code = main(["stability", "--preset", "paper-example", "--r", "13",
                         "--alpha", "1", "--no-meta", "--out", str(path)])
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_meta_header_only_difference(self, capsys, tmp_path):
        path = tmp_path / "with_meta.json"
        code = main(["stability", "--preset", "paper-example", "--r", "13",
                     "--alpha", "1", "--out", str(path)])
        assert code == 0
        doc = json.loads(path.read_text())
        assert "meta" in doc
        bare = dict(doc)
        bare.pop("meta")
        code = main(["stability", "--preset", "paper-example", "--r", "13",
                     "--alpha", "1", "--no-meta", "--out", str(path)])
        assert code == 0
        assert json.loads(path.read_text()) == bare
