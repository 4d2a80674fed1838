"""Configuration parsing, CLI runs, and deterministic file emission."""

import json
import math
import os

import numpy as np
import pytest

from qce.cli import main, run
from qce.config import parse_angle, parse_config
from qce.errors import ConfigError

from conftest import SQRT2

FIG3_ARGS = [
    "evolve",
    "--alpha", "5", "--r", "1", "--theta", "0", "--phi", "pi",
    "--c", "0.70710678", "--lambda", "1", "--g", "1",
    "--t-end", "100", "--dt", "0.05",
]

QUICK_FIELD = ["--alpha", "1.5", "--r", "0.3", "--theta", "0", "--phi", "pi", "--c", "0.5"]


class TestAngles:
    def test_literals(self):
        assert parse_angle("pi") == math.pi
        assert parse_angle("pi/2") == math.pi / 2
        assert parse_angle("-pi/4") == -math.pi / 4
        assert parse_angle("0.25") == 0.25
        assert parse_angle("+pi") == math.pi

    def test_rejects_garbage(self):
        with pytest.raises(ConfigError):
            parse_angle("two pi")


class TestParseConfig:
    def test_fig3_command_line(self):
        config = parse_config(FIG3_ARGS)
        assert config.mode == "evolve"
        assert config.field.alpha == 5.0
        assert config.field.phi == math.pi
        assert config.field.c == pytest.approx(1.0 / SQRT2, abs=1e-8)
        assert config.coupling.lam == 1.0
        assert config.t_end == 100.0
        assert config.dt == 0.05

    def test_missing_alpha_named(self):
        with pytest.raises(ConfigError, match="alpha"):
            parse_config(["evolve", "--r", "1", "--theta", "0", "--phi", "0", "--c", "0"])

    def test_c_range_error_cites_invariant(self):
        with pytest.raises(ConfigError, match="0 <= c <= 1"):
            parse_config(["evolve", *QUICK_FIELD[:-1], "1.5"])

    def test_negative_dt_rejected(self):
        with pytest.raises(ConfigError, match="dt"):
            parse_config(["evolve", *QUICK_FIELD, "--dt", "-0.1"])

    def test_coupling_defaults(self):
        config = parse_config(["stats", *QUICK_FIELD])
        assert config.coupling.lam == 1.0
        assert config.coupling.g == 1.0

    def test_config_file_and_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# reference parameters\n"
            "alpha = 5\n"
            "r = 1\n"
            "theta = pi\n"
            "phi = pi\n"
            "c = 0.5\n"
            "t-end = 20\n",
            encoding="utf-8",
        )
        config = parse_config(["evolve", "--config", str(cfg), "--c", "0.25"])
        assert config.field.theta == math.pi
        assert config.field.c == 0.25  # flag beats file
        assert config.t_end == 20.0

    def test_unknown_key_rejected_with_name(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha = 5\nwibble = 3\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="wibble") as err:
            parse_config(["evolve", "--config", str(cfg)])
        assert err.value.line == 2

    def test_env_override(self, tmp_path, monkeypatch):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha = 5\nr = 1\ntheta = 0\nphi = 0\nc = 0.1\n", encoding="utf-8")
        monkeypatch.setenv("QCE_C", "0.3")
        config = parse_config(["stats", "--config", str(cfg)])
        assert config.field.c == 0.3
        config = parse_config(["stats", "--config", str(cfg), "--c", "0.7"])
        assert config.field.c == 0.7  # flag beats env

    def test_mode_required(self):
        with pytest.raises(ConfigError, match="mode"):
            parse_config([])

    def test_sweep_linspace(self):
        config = parse_config(
            ["sweep", *QUICK_FIELD, "--sweep-axis", "theta", "--sweep-linspace", "0", "pi", "11"]
        )
        values = np.asarray(config.sweep_values)
        assert values.size == 11
        assert values[0] == 0.0
        assert values[-1] == pytest.approx(math.pi)

    def test_sweep_values_list(self):
        config = parse_config(["sweep", *QUICK_FIELD, "--sweep-values", "0,pi/2,pi"])
        assert config.sweep_values == (0.0, math.pi / 2, math.pi)


class TestRuns:
    def test_evolve_writes_csv_starting_at_zero(self, tmp_path):
        out = tmp_path / "series.csv"
        code = main(
            ["evolve", *QUICK_FIELD, "--t-end", "0.05", "--dt", "0.05", "--output", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t,S,W,concurrence,coherence_l1,S_bar"
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert float(first[1]) == 0.0  # S(0) = 0

    def test_csv_round_trip(self, tmp_path):
        out = tmp_path / "series.csv"
        config = parse_config(
            ["evolve", *QUICK_FIELD, "--t-end", "1", "--dt", "0.1", "--output", str(out)]
        )
        run(config)
        from qce.field import cat_expansion
        from qce.metrics import metrics_series
        from qce.sweep import time_grid

        series = metrics_series(
            cat_expansion(config.field), config.coupling, time_grid(1.0, 0.1)
        )
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        for k, row in enumerate(rows):
            assert float(row[1]) == series.entropy[k]  # 17 digits round-trip exactly
            assert float(row[3]) == series.concurrence[k]

    def test_determinism_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["evolve", *QUICK_FIELD, "--t-end", "2", "--dt", "0.1"]
        assert main([*args, "--output", str(out1)]) == 0
        assert main([*args, "--output", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_stats_mean_photon_number(self, tmp_path, capsys):
        out = tmp_path / "stats.csv"
        code = main(["stats", "--alpha", "5", "--r", "1", "--theta", "0", "--phi", "pi",
                     "--c", "0.70710678", "--output", str(out)])
        assert code == 0
        header, row = out.read_text().splitlines()
        record = dict(zip(header.split(","), (float(x) for x in row.split(","))))
        assert abs(record["mean_n"] - 26.38) < 0.01
        assert abs(record["mean_n_closed_form"] - 26.38) < 0.01

    def test_stats_json_format(self, tmp_path):
        out = tmp_path / "stats.json"
        code = main(["stats", *QUICK_FIELD, "--format", "json", "--output", str(out)])
        assert code == 0
        record = json.loads(out.read_text())
        assert record["mean_n"] > 0.0

    def test_sweep_outputs_and_fit(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = main(
            ["sweep", *QUICK_FIELD, "--sweep-axis", "theta", "--sweep-values", "0,pi/2,pi",
             "--t-end", "5", "--dt", "0.1", "--output", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "axis_value,mandel_q,var_x1,s_bar_long"
        assert len(lines) == 4
        fit = json.loads((tmp_path / "sweep.fit.json").read_text())
        assert fit["axis"] == "theta"
        assert "fit_vs_mandel_q" in fit and "fit_vs_var_x1" in fit

    def test_validate_passes_on_defaults(self, tmp_path, capsys):
        out = tmp_path / "validate.json"
        code = main(
            ["validate", "--alpha", "2", "--r", "0.5", "--theta", "0", "--phi", "pi",
             "--c", "0.70710678", "--t-end", "5", "--output", str(out)]
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["passed"] is True
        assert report["max_dev_analytic_vs_spectral"] < 1e-8
        assert report["max_dev_analytic_vs_stepped"] < 1e-8

    def test_config_error_exit_code_and_record(self, capsys):
        code = main(["evolve", "--r", "1"])
        assert code == 2
        record = json.loads(capsys.readouterr().err)
        assert record["error"] == "ConfigError"
        assert "alpha" in record["message"]

    def test_runtime_error_exit_code(self, tmp_path, capsys):
        # degenerate superposition: alpha = 0, c = 1/sqrt(2), phi = pi
        code = main(
            ["stats", "--alpha", "0", "--r", "1", "--theta", "0", "--phi", "pi",
             "--c", "0.70710678", "--output", str(tmp_path / "x.csv")]
        )
        assert code == 1
        record = json.loads(capsys.readouterr().err)
        assert record["error"] == "DegenerateStateError"
