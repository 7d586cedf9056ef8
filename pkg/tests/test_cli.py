"""
Тесты командной строки: коды возврата, выходные файлы, манифест, сценарии
"""
import json

import numpy as np
import pytest

from src.analysis import BerCurve, db_to_linear, rayleigh_ber
from src.cli import ScenarioConfig, load_scenario, main
from src.cli import validation
from src.utils.config import Config
from src.utils.exceptions import ConfigurationError
from src.utils.io import read_csv

SMALL = {"filter": "rrc", "span": 16, "N": 4, "K": 3, "n_tau": 16, "F": 1.2, "eps": "0, 0.5"}


@pytest.fixture(autouse=True)
def output_dir(monkeypatch, tmp_path):
    """Каталог результатов по умолчанию во временной папке."""
    path = tmp_path / "results"
    monkeypatch.setattr(Config, "OUTPUT_DIR", path)
    return path


@pytest.fixture
def small_config(write_scenario):
    return write_scenario(**SMALL)


class TestExitCodes:
    def test_usage_errors(self, write_scenario, tmp_path):
        assert main(["ber", "--mode", "fast"]) == 2
        assert main(["tune"]) == 2
        empty_eps = write_scenario(**{**SMALL, "eps": ""})
        assert main(["gain-table", "--config", str(empty_eps), "--out", str(tmp_path / "g.csv")]) == 2
        empty_grid = write_scenario(name="grid.txt", ebn0_db="")
        assert main(["ber", "--config", str(empty_grid), "--out", str(tmp_path / "b.csv")]) == 2

    def test_version(self, capsys):
        assert main(["--version"]) == 0
        assert "0.1.0" in capsys.readouterr().out

    def test_invalid_scenario(self, write_scenario, tmp_path):
        unknown = write_scenario(name="unknown.txt", colour="blue")
        assert main(["gain-table", "--config", str(unknown), "--out", str(tmp_path / "g.csv")]) == 1
        missing = tmp_path / "missing.txt"
        assert main(["gain-table", "--config", str(missing), "--out", str(tmp_path / "g.csv")]) == 1

    def test_bad_tradeoff_axis_value(self, write_scenario, tmp_path):
        config = write_scenario(**{**SMALL, "values": "0.9"})
        out = tmp_path / "t.csv"
        assert main(["tradeoff", "--config", str(config), "--axis", "F", "--out", str(out)]) == 1
        assert not out.exists()


class TestCommands:
    def test_gain_table_is_reproducible(self, small_config, tmp_path):
        first, second = tmp_path / "first.csv", tmp_path / "second.csv"
        assert main(["gain-table", "--config", str(small_config), "--out", str(first)]) == 0
        assert main(["gain-table", "--config", str(small_config), "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

        df, meta = read_csv(first, "gain_table")
        assert len(df) == 32
        assert meta["N_window"] == "full"
        assert sorted(df["eps"].unique()) == pytest.approx([0.0, 0.6])

        manifest = json.loads((tmp_path / "first.csv.manifest.json").read_text(encoding="utf-8"))
        assert manifest["command"] == "gain-table"
        assert manifest["output_path"] == str(first)
        assert manifest["parameters"]["N"] == 4

    def test_default_output_directory_is_created(self, small_config, output_dir):
        assert not output_dir.exists()
        assert main(["gain-table", "--config", str(small_config)]) == 0
        assert (output_dir / "gain_table.csv").is_file()
        assert (output_dir / "gain_table.csv.manifest.json").is_file()

    def test_tradeoff_rows(self, write_scenario, tmp_path):
        config = write_scenario(**{**SMALL, "values": "1.0, 0.5"})
        out = tmp_path / "rho.csv"
        assert main(["tradeoff", "--config", str(config), "--axis", "rho", "--out", str(out)]) == 0
        df, meta = read_csv(out, "tradeoff")
        assert len(df) == 2
        assert df["psi_self"].iloc[1] > df["psi_self"].iloc[0]

    def test_analytic_ber_matches_rayleigh(self, write_scenario, tmp_path):
        config = write_scenario(M=4, ebn0_db="0, 10, 20", scenario="none")
        out = tmp_path / "ber.csv"
        assert main(["ber", "--config", str(config), "--mode", "analytic", "--out", str(out)]) == 0
        df, meta = read_csv(out, "ber_curve")
        assert meta["mode"] == "analytic"
        expected = rayleigh_ber(db_to_linear(df["ebn0_db"].to_numpy()))
        np.testing.assert_allclose(df["ber"].to_numpy(), expected, rtol=1e-6)

    def test_seed_override_in_manifest(self, small_config, tmp_path):
        out = tmp_path / "g.csv"
        assert main(["gain-table", "--config", str(small_config), "--out", str(out), "--seed", "7"]) == 0
        manifest = json.loads((tmp_path / "g.csv.manifest.json").read_text(encoding="utf-8"))
        assert manifest["seed"] == 7
        assert manifest["parameters"]["seed"] == 7

    @pytest.mark.slow
    def test_both_modes_add_agreement(self, write_scenario, tmp_path):
        config = write_scenario(M=4, ebn0_db="10", bits_target=10 ** 5)
        out = tmp_path / "both.csv"
        assert main(["ber", "--config", str(config), "--mode", "both", "--out", str(out)]) == 0
        df, _ = read_csv(out, "ber_curve")
        assert list(df.columns) == ["ebn0_db", "ber_analytic", "ber_mc", "ci", "sigma", "bits", "errors", "agreement"]
        assert df["agreement"].iloc[0] <= 4


class TestValidate:
    def test_exit_code_follows_criteria(self, monkeypatch, tmp_path):
        monkeypatch.setattr(validation, "CRITERIA", [("ok", lambda: (True, "ok"), True)])
        assert main(["validate", "--quick"]) == 0

        monkeypatch.setattr(validation, "CRITERIA", [
            ("ok", lambda: (True, "ok"), True),
            ("broken", lambda: (False, "расхождение"), True),
        ])
        report = tmp_path / "report.csv"
        assert main(["validate", "--quick", "--out", str(report)]) == 1
        df, meta = read_csv(report, "validation")
        assert meta["passed"] == "1/2"
        assert df.loc[df["criterion"] == "broken", "passed"].item() == 0

    def test_slow_criteria_skipped_in_quick_mode(self, monkeypatch):
        def never():
            raise AssertionError("медленный критерий не должен запускаться")
        monkeypatch.setattr(validation, "CRITERIA", [("slow", never, False)])
        assert main(["validate", "--quick"]) == 0

    def test_corrupted_gain_table_fails_named_criterion(self, small_config, monkeypatch, tmp_path):
        table = tmp_path / "gain.csv"
        assert main(["gain-table", "--config", str(small_config), "--out", str(table)]) == 0
        lines = table.read_text(encoding="utf-8").splitlines()
        tau, eps, _ = lines[2].split(",")
        lines[2] = f"{tau},{eps},-1.0"
        table.write_text("\n".join(lines) + "\n", encoding="utf-8")

        monkeypatch.setattr(validation, "CRITERIA", [])
        report = tmp_path / "report.csv"
        assert main(["validate", "--quick", "--gain-table", str(table), "--out", str(report)]) == 1
        df, _ = read_csv(report, "validation")
        assert df["criterion"].tolist() == ["gain-table-input"]
        assert "ConfigurationError" in df["detail"].iloc[0]


def _curve(ber, sigma):
    grid = [10.0, 20.0]
    return BerCurve(np.array(grid), np.array(ber), sigma=np.array(sigma), bits=np.array([10 ** 5] * 2))


class TestNofdmCriterion:
    def _patch(self, monkeypatch, narrow, wide, clean):
        curves = iter([narrow, wide, clean])
        monkeypatch.setattr(validation, "ber_sweep", lambda cfg, grid: next(curves))

    def test_passes_when_whole_grid_agrees(self, monkeypatch):
        narrow = _curve([1e-2, 1e-3], [3e-4, 1e-4])
        self._patch(monkeypatch, narrow, _curve([0.1, 0.05], [1e-3, 7e-4]), _curve([1.01e-2, 1e-3], [3e-4, 1e-4]))
        passed, _ = validation.nofdm_reproduction()
        assert passed

    def test_deviation_at_high_snr_fails(self, monkeypatch):
        narrow = _curve([1e-2, 1e-3], [3e-4, 1e-4])
        clean = _curve([1e-2, 2e-4], [3e-4, 4e-5])
        self._patch(monkeypatch, narrow, _curve([0.1, 0.05], [1e-3, 7e-4]), clean)
        passed, detail = validation.nofdm_reproduction()
        assert not passed
        assert "20 дБ" in detail


class TestScenario:
    def test_subcarrier_window_defaults_to_full_band(self, write_scenario):
        scenario = load_scenario(write_scenario(n_sum="none", N=8))
        assert scenario.n_sum is None
        assert scenario.trial_config().n_sum == 8
        assert ScenarioConfig(n_sum=4).trial_config().n_sum == 4
        assert ScenarioConfig().tradeoff_config().n_sum is None

    def test_parsing(self, write_scenario):
        path = write_scenario(**{
            "lambda": 1e-4, "span": "none", "cfo_eps": "0.25, 0.5", "cfo_probs": "0.5, 0.5",
            "F": 1.2, "fading": "false", "scenario": "ppp",
        })
        scenario = load_scenario(path)
        assert scenario.span is None
        assert scenario.fading is False
        assert scenario.network().lam == 1e-4
        assert scenario.cfo().eps_levels == pytest.approx([0.3, 0.6])
        assert scenario.trial_config().scenario == "ppp"

    def test_defaults_without_file(self):
        scenario = load_scenario(None)
        assert scenario == ScenarioConfig()
        assert scenario.trial_config().scenario == "none"
        assert scenario.eps_values() == pytest.approx([0.0, 0.6])

    def test_single_aggressor_cfo_is_fraction_of_spacing(self):
        cfg = ScenarioConfig(scenario="single", F=1.5, aggressor_eps=0.5, sir_db=3.0).trial_config()
        assert cfg.eps == pytest.approx(0.75)
        assert cfg.sir_db == 3.0

    def test_duplicate_keys_rejected(self, tmp_path):
        path = tmp_path / "dup.txt"
        path.write_text("F = 1.2\nF = 1.5\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_scenario(path)
