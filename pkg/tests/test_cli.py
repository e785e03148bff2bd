import json
import os

import pytest

from cfran.cli import _FLAG_TWINS, build_parser, main
from cfran.config import ConfigError, SimConfig, parse_config


class TestParseConfig:
    def test_no_file_gives_defaults(self):
        cfg = parse_config(None)
        assert cfg == SimConfig()

    def test_literal_default_token(self):
        assert parse_config("default") == SimConfig()

    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.ini"
        path.write_text("")
        assert parse_config(str(path)) == SimConfig()

    def test_file_values_applied(self, tmp_path):
        path = tmp_path / "cfg.ini"
        path.write_text("[campaign]\nn_setups = 5\noptions = 1, 3\n\n[channel]\ntx_power = 2.0\n")
        cfg = parse_config(str(path))
        assert cfg.n_setups == 5
        assert cfg.options == (1, 3)
        assert cfg.tx_power == 2.0

    def test_flag_overrides_file(self, tmp_path):
        path = tmp_path / "cfg.ini"
        path.write_text("[campaign]\nn_setups = 100\n")
        cfg = parse_config(str(path), {"n_setups": 5})
        assert cfg.n_setups == 5

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "cfg.ini"
        path.write_text("[campaign]\nn_stups = 5\n")
        with pytest.raises(ConfigError, match="n_stups"):
            parse_config(str(path))

    def test_unknown_section_rejected(self, tmp_path):
        path = tmp_path / "cfg.ini"
        path.write_text("[campain]\nn_setups = 5\n")
        with pytest.raises(ConfigError, match="campain"):
            parse_config(str(path))

    def test_invariant_violation_names_key(self):
        with pytest.raises(ConfigError, match="n_odus"):
            parse_config(None, {"n_odus": 0})

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            parse_config("/nonexistent/cfg.ini")

    def test_env_seed_fallback(self, monkeypatch):
        monkeypatch.setenv("CFRAN_SEED", "777")
        assert parse_config(None).master_seed == 777

    def test_flag_beats_env_seed(self, monkeypatch):
        monkeypatch.setenv("CFRAN_SEED", "777")
        assert parse_config(None, {"master_seed": 5}).master_seed == 5

    def test_file_beats_env_seed(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CFRAN_SEED", "777")
        path = tmp_path / "cfg.ini"
        path.write_text("[campaign]\nmaster_seed = 9\n")
        assert parse_config(str(path)).master_seed == 9

    def test_bad_env_seed(self, monkeypatch):
        monkeypatch.setenv("CFRAN_SEED", "not-a-seed")
        with pytest.raises(ConfigError, match="CFRAN_SEED"):
            parse_config(None)

    def test_noise_power_auto(self, tmp_path):
        path = tmp_path / "cfg.ini"
        path.write_text("[channel]\nnoise_power = auto\n")
        assert parse_config(str(path)).noise_power is None
        assert parse_config(None, {"noise_power": "auto"}).noise_power is None
        assert parse_config(None, {"noise_power": "1e-8"}).noise_power == 1e-8

    def test_options_validation(self):
        with pytest.raises(ConfigError, match="option"):
            parse_config(None, {"options": "1,9"})
        with pytest.raises(ConfigError):
            parse_config(None, {"options": ""})

    def test_seed_range(self):
        with pytest.raises(ConfigError, match="master_seed"):
            parse_config(None, {"master_seed": 2**64})


class TestFlagTwins:
    def test_every_config_key_has_a_flag(self):
        from dataclasses import fields

        twinned = {key for _, key, _ in _FLAG_TWINS}
        assert twinned == {f.name for f in fields(SimConfig)}

    def test_help_lists_every_flag(self, capsys):
        parser = build_parser()
        with pytest.raises(SystemExit):
            parser.parse_args(["run", "--help"])
        text = capsys.readouterr().out
        for flag, _, _ in _FLAG_TWINS:
            assert flag in text
        assert "--config" in text


def tiny_args(out_dir, extra=()):
    return [
        "--setups", "2", "--users", "3", "--seed", "11", "--threads", "1",
        "--out", str(out_dir), *extra,
    ]


class TestMain:
    def test_run_writes_outputs(self, tmp_path, capsys):
        rc = main(["run", *tiny_args(tmp_path / "out")])
        assert rc == 0
        out = capsys.readouterr().out
        assert "seed 11" in out
        assert (tmp_path / "out" / "results.csv").is_file()
        assert (tmp_path / "out" / "summary.json").is_file()

    def test_run_deterministic_across_invocations(self, tmp_path, capsys):
        assert main(["run", *tiny_args(tmp_path / "a")]) == 0
        assert main(["run", *tiny_args(tmp_path / "b")]) == 0
        a = (tmp_path / "a" / "results.csv").read_bytes()
        b = (tmp_path / "b" / "results.csv").read_bytes()
        assert a == b

    def test_run_with_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.ini"
        cfg.write_text("[campaign]\nn_setups = 1\nk_users = 2\nthreads = 1\n")
        rc = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
        assert rc == 0
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["config"]["n_setups"] == 1

    def test_validate_ok(self, capsys):
        assert main(["validate"]) == 0
        assert "config OK" in capsys.readouterr().out

    def test_validate_broken_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.ini"
        cfg.write_text("[campaign]\nn_setups = 0\n")
        rc = main(["validate", "--config", str(cfg)])
        assert rc == 1
        assert "n_setups" in capsys.readouterr().err
        assert not (tmp_path / "results.csv").exists()

    def test_validate_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.ini"
        cfg.write_text("[campaign]\nbogus = 1\n")
        assert main(["validate", "--config", str(cfg)]) == 1
        assert "bogus" in capsys.readouterr().err

    def test_dump_channels(self, tmp_path, capsys):
        rc = main(["dump-channels", *tiny_args(tmp_path / "dumps")])
        assert rc == 0
        files = sorted(os.listdir(tmp_path / "dumps"))
        assert files == ["channels_setup_0000.txt", "channels_setup_0001.txt"]

    def test_dump_then_import_round_trip(self, tmp_path, capsys):
        dumps = tmp_path / "dumps"
        assert main(["dump-channels", *tiny_args(dumps)]) == 0
        assert main(["run", *tiny_args(tmp_path / "gen")]) == 0
        rc = main(["run", *tiny_args(tmp_path / "imp", extra=["--import-channels", str(dumps)])])
        assert rc == 0
        gen = (tmp_path / "gen" / "results.csv").read_bytes()
        imp = (tmp_path / "imp" / "results.csv").read_bytes()
        assert gen == imp

    def test_load_report(self, tmp_path, capsys):
        rc = main(["load-report", *tiny_args(tmp_path / "out")])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert set(report["options"]) == {"1", "2", "3", "4", "5"}
        assert report["options"]["1"]["inter_odu_scalars_per_symbol"] == 0
        assert report["options"]["5"]["fronthaul_streams_per_oru"] == [3] * 8

    def test_error_exit_code(self, capsys):
        rc = main(["run", "--setups", "0"])
        assert rc == 1
        assert "n_setups" in capsys.readouterr().err

    def test_no_partial_outputs_on_error(self, tmp_path, capsys):
        out = tmp_path / "out"
        rc = main(["run", *tiny_args(out, extra=["--import-channels", str(tmp_path / "missing")])])
        assert rc == 1
        assert not (out / "results.csv").exists()
        assert not list(tmp_path.rglob("*.tmp"))

    def test_env_seed_used(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("CFRAN_SEED", "123")
        rc = main(["run", "--setups", "1", "--users", "2", "--threads", "1", "--out", str(tmp_path / "o")])
        assert rc == 0
        summary = json.loads((tmp_path / "o" / "summary.json").read_text())
        assert summary["seed"] == 123
