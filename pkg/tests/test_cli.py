"""CLI behavior: subcommands, outputs, exit codes, determinism."""

import json

import pytest

from heritagecrime.cli import main
from heritagecrime.config import CONFIG_KEYS, resolve_config
from heritagecrime.funnel import bundled_dataset_path


def run_cli(args):
    return main(args)


def read_report(out_dir):
    return json.loads((out_dir / "report.json").read_text(encoding="utf-8"))


class TestFunnelSubcommand:
    def test_reproduces_published_risks(self, tmp_path, capsys):
        out = tmp_path / "run"
        assert run_cli(["funnel", "--out", str(out), "--no-figures"]) == 0
        report = read_report(out)
        risks = {cat: payload["detection_risk"]
                 for cat, payload in report["sections"]["funnel"]["categories"].items()}
        assert risks == {"total": 0.01, "art208": 0.001, "art277a": 0.01,
                         "art278": 0.01, "art278a": 0.001, "art278b": 0.0}
        stdout = capsys.readouterr().out
        assert json.loads(stdout)["subcommand"] == "funnel"

    def test_tables_written(self, tmp_path):
        out = tmp_path / "run"
        run_cli(["funnel", "--out", str(out), "--no-figures"])
        table = (out / "tables" / "funnel_stats.csv").read_text(encoding="utf-8")
        assert table.startswith("category,submission_rate")
        assert "\r" not in table

    def test_zero_registered_category_reports_null_stage_rates(self, tmp_path):
        data = tmp_path / "quiet.csv"
        data.write_text(
            "year,category,registered,submitted_to_court,convicted_persons,"
            "imprisoned_effective,synthetic_flag\n"
            "2001,total,100,60,60,1,0\n"
            "2001,art278b,0,0,0,0,0\n",
            encoding="utf-8",
        )
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"funnel_csv = {data}\n", encoding="utf-8")
        out = tmp_path / "out"
        assert run_cli(["funnel", "--config", str(cfg), "--out", str(out),
                        "--no-figures"]) == 0
        section = read_report(out)["sections"]["funnel"]
        quiet = section["categories"]["art278b"]
        assert quiet["submission_rate"] is None
        assert quiet["detection_risk"] == 0.0


class TestValidationFailures:
    def test_missing_funnel_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("funnel_csv = /nonexistent/file.csv\n", encoding="utf-8")
        code = run_cli(["funnel", "--config", str(cfg), "--out",
                        str(tmp_path / "out"), "--no-figures"])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["code"] == "FILE_NOT_FOUND"

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("not_a_key = 1\n", encoding="utf-8")
        code = run_cli(["funnel", "--config", str(cfg), "--out",
                        str(tmp_path / "out"), "--no-figures"])
        assert code == 1
        assert json.loads(capsys.readouterr().err)["error"]["code"] == "CONFIG_ERROR"

    def test_invalid_row_is_fail_fast(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text(
            "year,category,registered,submitted_to_court,convicted_persons,"
            "imprisoned_effective,synthetic_flag\n"
            "2001,total,10,20,1,0,0\n",
            encoding="utf-8",
        )
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"funnel_csv = {bad}\n", encoding="utf-8")
        out = tmp_path / "out"
        code = run_cli(["funnel", "--config", str(cfg), "--out", str(out),
                        "--no-figures"])
        assert code == 1
        assert json.loads(capsys.readouterr().err)["error"]["code"] == "INVARIANT_ERROR"
        # fail-fast: nothing was emitted
        assert not (out / "report.json").exists()


class TestSolverFailure:
    def test_no_crossing_exits_two(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        # tolerated level pinned to zero crimes: supply never meets it
        cfg.write_text("demand_tolerable_at_zero_cost = 0\n", encoding="utf-8")
        code = run_cli(["market", "--config", str(cfg), "--out",
                        str(tmp_path / "out"), "--no-figures"])
        assert code == 2
        assert json.loads(capsys.readouterr().err)["error"]["code"] == "NO_CROSSING"


class TestDeterminism:
    def test_run_all_twice_is_byte_identical(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert run_cli(["all", "--out", str(out), "--seed", "777",
                        "--no-figures"]) == 0
        first = {p.relative_to(out): p.read_bytes()
                 for p in sorted(out.rglob("*")) if p.is_file()}
        assert run_cli(["all", "--out", str(out), "--seed", "777",
                        "--no-figures"]) == 0
        second = {p.relative_to(out): p.read_bytes()
                  for p in sorted(out.rglob("*")) if p.is_file()}
        assert first == second
        assert any(str(k) == "report.json" for k in first)

    def test_seed_changes_report(self, tmp_path, capsys):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        run_cli(["simulate", "--out", str(out_a), "--seed", "1", "--no-figures"])
        run_cli(["simulate", "--out", str(out_b), "--seed", "2", "--no-figures"])
        a = read_report(out_a)["sections"]["simulate"]["at_config_p"]
        b = read_report(out_b)["sections"]["simulate"]["at_config_p"]
        assert a != b


class TestReportProvenance:
    def test_embeds_checksums_config_and_seed(self, tmp_path, capsys):
        out = tmp_path / "out"
        run_cli(["funnel", "--out", str(out), "--seed", "99", "--no-figures"])
        prov = read_report(out)["provenance"]
        assert prov["seed"] == 99
        assert len(prov["config_hash"]) == 64
        assert prov["datasets"]["funnel_csv"]["sha256"]
        assert prov["datasets"]["survey_csv"] is None
        effective = prov["effective_config"]
        assert set(effective) == {k.name for k in CONFIG_KEYS}

    def test_survey_checksum_present_when_used(self, tmp_path, capsys):
        survey = bundled_dataset_path().parent / "survey_example.csv"
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"survey_csv = {survey}\n", encoding="utf-8")
        out = tmp_path / "out"
        assert run_cli(["tev", "--config", str(cfg), "--out", str(out),
                        "--no-figures"]) == 0
        report = read_report(out)
        assert report["provenance"]["datasets"]["survey_csv"]["sha256"]
        breakdown = report["sections"]["tev"]["breakdown"]
        # survey_example.csv means: existence 14, option 10, educational 10,
        # prestige 5, donation 5, scaled to the default population of 1000
        by_kind = {c["kind"]: c["amount"]
                   for c in breakdown["indirect_components"]}
        assert by_kind == {"existence": 14_000.0, "option": 10_000.0,
                           "educational": 10_000.0, "prestige": 5_000.0,
                           "donation": 5_000.0}


class TestFigures:
    def test_figures_rendered_by_default(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert run_cli(["funnel", "--out", str(out)]) == 0
        png = out / "figures" / "funnel.png"
        assert png.is_file()
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_no_figures_flag(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert run_cli(["funnel", "--out", str(out), "--no-figures"]) == 0
        assert not (out / "figures").exists()


class TestCsvStdout:
    def test_csv_format_prints_flat_table(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert run_cli(["funnel", "--out", str(out), "--format", "csv",
                        "--no-figures"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "section,key,value"
        assert any("detection_risk" in line for line in lines)


class TestHelp:
    def test_help_lists_every_config_key(self, capsys):
        assert main(["--help"]) == 0
        text = capsys.readouterr().out
        for key in CONFIG_KEYS:
            assert key.name in text

    def test_usage_error_maps_to_validation_exit(self, capsys):
        assert main(["not-a-subcommand"]) == 1
        assert main([]) == 1


class TestSubcommandDispatch:
    @pytest.mark.parametrize("name", ["tev", "simulate", "scenario", "calibrate"])
    def test_each_subcommand_writes_its_section(self, tmp_path, capsys, name):
        out = tmp_path / name
        assert run_cli([name, "--out", str(out), "--no-figures"]) == 0
        assert name in read_report(out)["sections"]


class TestResolveConfig:
    def test_defaults_resolve(self):
        cfg = resolve_config()
        assert cfg.currency == "BGN"
        assert cfg.seed == 12345
        assert cfg.population.n_agents == 10_000

    def test_negative_elasticity_rejected_upstream(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("supply_elasticity = -1\n", encoding="utf-8")
        from heritagecrime.errors import ConfigError
        with pytest.raises(ConfigError):
            resolve_config(path)

    def test_overrides_win(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("seed = 5\npop_p = 0.2\n# comment line\n", encoding="utf-8")
        cfg = resolve_config(path, {"seed": "9"})
        assert cfg.seed == 9
        assert cfg.population.p == 0.2

    def test_risk_mix_weights_checked(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("pop_risk_mix = riskneutral=0.6, crra(2)=0.6\n",
                        encoding="utf-8")
        from heritagecrime.errors import ToolkitError
        with pytest.raises(ToolkitError):
            resolve_config(path)
