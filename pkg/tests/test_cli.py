import json

import pytest

from hardyvx.catalog import CATALOG, catalog_exponent
from hardyvx.cli import main
from hardyvx.config import ConfigError, parse_config
from hardyvx.report import emit, report_json, run_scenario


def minimal(name="constant-2", **extra):
    cfg = {"exponent": {"catalog": name}}
    cfg.update(extra)
    return json.dumps(cfg)


class TestParseConfig:
    def test_defaults_filled(self):
        cfg = parse_config('{"exponent":{"family":"constant","p0":2}}')
        assert cfg.x_min == 1e-12 and cfg.n == 1201
        assert cfg.criteria == ("A", "B", "C1", "C2", "C3", "C4", "C5")
        assert cfg.exponent.eval(0.5) == 2.0

    def test_p0_below_one_rejected_with_path(self):
        with pytest.raises(ConfigError) as exc:
            parse_config('{"exponent":{"family":"constant","p0":0.5}}')
        assert any("p0" in e and "minimum" in e for e in exc.value.errors)

    def test_catalog_resolution(self):
        cfg = parse_config(minimal("dyadic-jump-default"))
        entry = catalog_exponent("dyadic-jump-default")
        assert cfg.exponent == entry.exponent

    def test_unknown_catalog_name(self):
        with pytest.raises(ConfigError):
            parse_config(minimal("no-such-entry"))

    def test_invalid_json(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("{not json")
        assert "JSON" in exc.value.errors[0]

    def test_all_errors_listed(self):
        with pytest.raises(ConfigError) as exc:
            parse_config('{"exponent":{"catalog":"constant-2"},'
                         '"grid":{"n":4},"a_depth":1}')
        assert len(exc.value.errors) >= 2

    def test_every_family_constructible(self):
        specs = [
            {"family": "constant", "p0": 2},
            {"family": "log-perturbed", "p0": 2, "c": 1, "alpha": 0.5},
            {"family": "loglog-perturbed", "p0": 2, "c": 1},
            {"family": "piecewise-constant", "breakpoints": [0.5],
             "values": [2, 3]},
            {"family": "piecewise-linear", "breakpoints": [0.2, 0.8],
             "values": [2, 3]},
            {"family": "dyadic-jump", "p0": 2, "gammas": [0.5],
             "scales": [0.25]},
            {"family": "tabulated", "xs": [1e-6, 1.0], "ps": [2, 3]},
        ]
        for spec in specs:
            cfg = parse_config(json.dumps({"exponent": spec}))
            assert cfg.exponent.eval(0.5) >= 1.0


@pytest.fixture(scope="module")
def small_report():
    cfg = parse_config(minimal(
        "constant-2", grid={"x_min": 1e-8, "n": 401},
        a_depth=20, necessity_depth=20))
    return run_scenario(cfg)


class TestRunAndEmit:
    def test_json_round_trip(self, small_report, tmp_path):
        (path,) = emit(small_report, "json", tmp_path)
        data = json.loads(path.read_text())
        assert data == small_report.to_dict()

    def test_csv_series_files(self, small_report, tmp_path):
        paths = emit(small_report, "csv", tmp_path)
        names = {p.name for p in paths}
        assert "constant-2.C2.csv" in names
        c2 = next(p for p in paths if p.name == "constant-2.C2.csv")
        lines = c2.read_text().splitlines()
        assert lines[0] == "a,value,lo,hi"
        assert len(lines) >= 10

    def test_deterministic_modulo_timestamp(self):
        cfg_text = minimal("constant-2", grid={"x_min": 1e-8, "n": 401},
                           a_depth=12, necessity_depth=12)
        r1 = run_scenario(parse_config(cfg_text))
        r2 = run_scenario(parse_config(cfg_text))
        d1, d2 = r1.to_dict(), r2.to_dict()
        for d in (d1, d2):
            d.pop("timestamp")
            d.pop("wall_clock_seconds")
        assert json.dumps(d1, sort_keys=True) == json.dumps(d2,
                                                            sort_keys=True)

    def test_empty_criteria_selection(self, tmp_path):
        cfg = parse_config(minimal(
            "constant-2", criteria=[], families=["dyadic"],
            grid={"x_min": 1e-8, "n": 401}))
        report = run_scenario(cfg)
        paths = emit(report, "csv", tmp_path)
        names = {p.name for p in paths}
        # only the always-computed oscillation series remains
        assert names <= {"constant-2.oscillation.csv"}


class TestMain:
    def test_run_exit_codes(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(minimal("constant-2", grid={"x_min": 1e-8, "n": 401},
                               a_depth=12, necessity_depth=12))
        assert main(["run", "--config", str(cfg),
                     "--out", str(tmp_path / "out")]) == 0
        assert (tmp_path / "out" / "constant-2.json").exists()

    def test_missing_config_is_input_error(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "nope.json")]) == 1

    def test_invalid_config_is_input_error(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text('{"exponent":{"family":"constant","p0":0.5}}')
        assert main(["run", "--config", str(cfg)]) == 1
        assert "p0" in capsys.readouterr().err

    def test_catalog_lists_everything(self, capsys):
        assert main(["catalog"]) == 0
        out = capsys.readouterr().out
        for entry in CATALOG:
            assert entry.name in out

    def test_stdout_json_report(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(minimal("constant-2", grid={"x_min": 1e-8, "n": 401},
                               a_depth=12, necessity_depth=12))
        code = main(["run", "--config", str(cfg)])
        data = json.loads(capsys.readouterr().out)
        assert code == 0
        assert data["report"]["agreement"] is True


def test_report_json_is_stable_text(tmp_path):
    cfg = parse_config(minimal("constant-3", grid={"x_min": 1e-8, "n": 401},
                               a_depth=10, necessity_depth=10))
    text = report_json(run_scenario(cfg))
    assert text.endswith("\n")
    assert json.loads(text)["version"]
