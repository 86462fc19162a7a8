import json
from pathlib import Path

import pytest

from xduct.cli import main
from xduct.config import load_config
from xduct.errors import ConfigError

REPO = Path(__file__).resolve().parent.parent
TABLE_CONFIG = REPO / "configs" / "tableI.toml"
IDEAL_CONFIG = REPO / "configs" / "ideal.toml"


def write_config(tmp_path, body) -> str:
    path = tmp_path / "run.toml"
    path.write_text(body)
    return str(path)


MINIMAL = """
[params]
omega_m = 1.4732e6
delta_o = 1.11e6
delta_e = 1.47e6
kappa_o = 2.1e6
kappa_e = 2.5e6
kappa_m = 11.0
kappa_o_ex = 1.1e6
kappa_e_ex = 2.3e6
g_o = 6.6
g_e = 3.8

[drive]
mode = "parametric"
omega = 500e6
n_sidebands = 2
"""


class TestConfig:
    def test_shipped_configs_load(self):
        for path in (TABLE_CONFIG, IDEAL_CONFIG):
            cfg = load_config(path)
            assert cfg.drive.n_sidebands == 2

    def test_unknown_key_named(self, tmp_path):
        path = write_config(tmp_path, MINIMAL + "\n[sweep]\nstep = 3\n")
        with pytest.raises(ConfigError, match="unknown key: step"):
            load_config(path)

    def test_asymmetric_drive_rejected(self, tmp_path):
        path = write_config(tmp_path, MINIMAL.replace(
            'omega = 500e6', 'omega = 500e6\nomega_o = 200e6'))
        with pytest.raises(ConfigError, match="symmetric"):
            load_config(path)

    def test_invalid_params_name_offender(self, tmp_path):
        path = write_config(tmp_path, MINIMAL.replace(
            "kappa_o_ex = 1.1e6", "kappa_o_ex = 3.1e6"))
        with pytest.raises(ConfigError, match="kappa_o_ex"):
            load_config(path)

    def test_bad_mode(self, tmp_path):
        path = write_config(tmp_path, MINIMAL.replace('"parametric"', '"pulsed"'))
        with pytest.raises(ConfigError, match="mode"):
            load_config(path)

    def test_missing_key(self, tmp_path):
        path = write_config(tmp_path, MINIMAL.replace("g_o = 6.6\n", ""))
        with pytest.raises(ConfigError, match="missing key: g_o"):
            load_config(path)


class TestSolveCommand:
    def test_json_contents(self, tmp_path, capsys):
        out = tmp_path / "point.json"
        code = main(["solve", "--config", str(TABLE_CONFIG), "--probe-at", "omega-m",
                     "--output", str(out)])
        assert code == 0
        data = json.loads(out.read_text())
        assert data["noise_report"]["eta"] == pytest.approx(0.51317, abs=1e-4)
        assert data["noise_report"]["s_added"] == pytest.approx(9.6093, abs=1e-3)
        source_labels = {t["source"] for t in data["noise_report"]["term_breakdown"]}
        assert "e.ex'(w)" in source_labels and "e.ex(w)" not in source_labels
        assert data["transfer"]["ports"][0] == "o.ex"
        weights = {t["source"]: t["weight"] for t in data["noise_report"]["term_breakdown"]}
        assert weights["e.ex'(w)"] == 1.5

    def test_exit_code_on_bad_config(self, tmp_path):
        missing = tmp_path / "nope.toml"
        assert main(["solve", "--config", str(missing)]) == 1

    def test_exit_code_on_solver_failure(self, tmp_path):
        # undamped mechanical mode probed on resonance: the parametric path
        # rejects kappa_m = 0 as singular
        body = MINIMAL.replace("kappa_m = 11.0", "kappa_m = 0.0")
        path = write_config(tmp_path, body)
        assert main(["solve", "--config", path]) == 2


class TestSweepCommand:
    def test_csv_header_and_determinism(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        args = ["sweep", "omega", "--config", str(TABLE_CONFIG),
                "--from", "400e6", "--to", "700e6", "--points", "7"]
        assert main(args + ["--output", str(out1)]) == 0
        assert main(args + ["--output", str(out2)]) == 0
        text = out1.read_text()
        assert text.splitlines()[0] == ("omega_hz,eta_const,S_const,eta_pd1,S_pd1,"
                                        "eta_pd2,S_pd2,lb_pd2,comm_resid")
        assert len(text.splitlines()) == 8
        assert text == out2.read_text()

    def test_seventeen_digit_precision(self, tmp_path):
        out = tmp_path / "p.csv"
        main(["sweep", "omega", "--config", str(TABLE_CONFIG),
              "--from", "500e6", "--to", "600e6", "--points", "2",
              "--output", str(out)])
        row = out.read_text().splitlines()[1].split(",")
        eta = float(row[5])
        # round-trips exactly through the emitted text
        assert format(eta, ".17g") == row[5]
        assert eta == pytest.approx(0.51317, abs=1e-4)

    def test_kappa_m_sweep_header(self, tmp_path, capsys):
        out = tmp_path / "km.csv"
        code = main(["sweep", "kappa-m", "--config", str(IDEAL_CONFIG),
                     "--from", "0.1", "--to", "10", "--points", "5", "--scale", "log",
                     "--output", str(out)])
        assert code == 0
        assert out.read_text().splitlines()[0].startswith("kappa_m_hz,")
        err = capsys.readouterr().err
        assert "crossing" in err

    def test_invalid_range(self):
        assert main(["sweep", "omega", "--config", str(TABLE_CONFIG),
                     "--from", "700e6", "--to", "100e6"]) == 1


class TestTuneCommand:
    def test_tune_finds_unity(self, tmp_path):
        out = tmp_path / "tune.json"
        assert main(["tune", "--config", str(TABLE_CONFIG), "--output", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["abs_eta_minus_one"] <= 1e-8
        assert data["omega_star_hz"] == pytest.approx(669.1e6, rel=1e-3)

    def test_tune_without_crossing_fails(self):
        assert main(["tune", "--config", str(TABLE_CONFIG),
                     "--bracket-lo", "100e6", "--bracket-hi", "200e6"]) == 2


class TestVerifyCommand:
    def test_verify_passes_on_shipped_configs(self, capsys):
        for path in (TABLE_CONFIG, IDEAL_CONFIG):
            assert main(["verify", "--config", str(path)]) == 0
            out = capsys.readouterr().out
            assert "all properties passed" in out
            assert "FAIL" not in out
            assert "advisory stability margin" in out


class TestOracleCommand:
    def test_oracle_agreement(self, capsys):
        assert main(["oracle", "--config", str(TABLE_CONFIG)]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["pass"] and data["max_relative_difference"] <= 1e-10
        assert set(data["per_matrix"]) == {"central", "+1", "+2", "-1", "-2"}
