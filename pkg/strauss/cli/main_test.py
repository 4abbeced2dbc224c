import json
import math
from pathlib import Path

import pytest
from typer.testing import CliRunner

from strauss.cli._config import OutputFormat, RunConfig
from strauss.cli.main import CHECK_COLUMNS, app, execute, parse_args
from strauss.core.domain.errors import ParameterError
from strauss.core.domain.phase import DMode
from strauss.core.domain.sweep import SweepTable
from strauss.core.explorer.f_max import E0, FM_COLUMNS

runner = CliRunner()

_SINGLE_FM = ["fm-curve", "--e-min", "0.15", "--e-max", "0.15", "--e-step", "0.01"]


class TestParseArgs:
    def test_fm_curve(self):
        config = parse_args(
            ["fm-curve", "--e-min", "0.033", "--e-max", "0.206", "--e-step", "0.001", "--out", "fm.csv"],
        )
        assert config.command == "fm-curve"
        assert config.e_range == (0.033, 0.206)
        assert config.e_step == 0.001
        assert config.out == "fm.csv"
        assert config.output_format == OutputFormat.CSV

    def test_boundary_defaults(self):
        config = parse_args(["boundary", "--d-mode", "free", "--e-min", "0.01", "--e-max", "0.21", "--out", "b.csv"])
        assert config.d_mode == DMode.FREE_D
        assert config.e_step == 0.001
        assert config.svg is None

    def test_overrides(self):
        config = parse_args(
            ["-v", "classify", "--e", "0.1", "--t", "0.0009", "--format", "json", "--step-tol", "1e-12"],
        )
        assert config.d_mode == DMode.ANSATZ
        assert config.output_format == OutputFormat.JSON
        assert config.newton.step_tol == 1e-12
        assert config.newton.grad_tol == 1e-10

    @pytest.mark.parametrize(
        "argv",
        [
            ["boundary", "--e-min", "0.3", "--e-max", "0.1"],
            ["fm-curve", "--e-min", "abc", "--e-max", "0.2", "--e-step", "0.01"],
            ["fm-curve", "--e-min", "0.1", "--e-max", "0.2"],
            [*_SINGLE_FM, "--bogus", "1"],
            ["trace", "--e", "0.1", "--delta-step", "0.01", "--delta-stop", "0.001"],
            ["fm-curve", "--e-min", "0.1", "--e-max", "0.2", "--e-step", "-0.01"],
            ["unknown"],
        ],
    )
    def test_usage_errors(self, argv: list[str]):
        with pytest.raises(ParameterError):
            parse_args(argv)

    def test_inverted_range_names_the_flag(self):
        with pytest.raises(ParameterError) as exc:
            parse_args(["boundary", "--e-min", "0.3", "--e-max", "0.1"])
        assert "--e-min" in exc.value.message


class TestExecute:
    def test_fm_curve_to_stdout(self):
        result = runner.invoke(app, _SINGLE_FM)
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "# kind: fm_curve"
        header = next(line for line in lines if not line.startswith("#"))
        assert header.split(",") == FM_COLUMNS
        assert len(SweepTable.from_csv(result.stdout)) == 1

    def test_bytes_are_deterministic(self):
        assert runner.invoke(app, _SINGLE_FM).stdout == runner.invoke(app, _SINGLE_FM).stdout

    def test_json_and_svg(self, tmp_path: Path):
        out, svg = tmp_path / "fm.json", tmp_path / "fm.svg"
        result = runner.invoke(app, [*_SINGLE_FM, "--format", "json", "--out", str(out), "--svg", str(svg)])
        assert result.exit_code == 0
        payload = json.loads(out.read_text())
        assert payload["columns"] == FM_COLUMNS
        assert len(payload["rows"]) == 1
        assert svg.read_text().startswith("<svg")

    def test_classify(self):
        result = runner.invoke(app, ["classify", "--e", "0.1", "--t", str(0.1**3 - 0.002**3)])
        assert result.exit_code == 0
        assert "# label: O_E" in result.stdout.splitlines()

    def test_classify_bipodal_winner_is_complete(self):
        result = runner.invoke(app, ["classify", "--e", "0.1", "--t", str(0.1**3 - 0.01**3)])
        assert result.exit_code == 0
        assert "# label: BIPODAL" in result.stdout.splitlines()
        row = SweepTable.from_csv(result.stdout).row_dict(0)
        assert math.isnan(row["A"])
        assert row["entropy"] == row["S_bipodal"]

    def test_classify_above_the_er_curve(self):
        assert runner.invoke(app, ["classify", "--e", "0.1", "--t", "0.002"]).exit_code == 2

    def test_no_tripodal_phase(self):
        result = runner.invoke(app, ["boundary", "--e-min", "0.25", "--e-max", "0.26", "--d-mode", "ansatz"])
        assert result.exit_code == 3

    def test_usage_error(self):
        assert runner.invoke(app, ["boundary", "--e-min", "0.3", "--e-max", "0.1"]).exit_code == 2

    def test_unwritable_output(self, tmp_path: Path):
        result = runner.invoke(app, [*_SINGLE_FM, "--out", str(tmp_path / "missing" / "fm.csv")])
        assert result.exit_code == 4

    def test_scaling_from_table(self, tmp_path: Path):
        table = SweepTable.create("fm_curve", FM_COLUMNS)
        for d in [0.005 * 1.2**i for i in range(14)]:
            table.append(e=E0 - d, A=2 * d, B=3 * d**2, F_m=0.0, Hpp=0.0, gap=5 * d**3)
        path = tmp_path / "fm.csv"
        path.write_text(table.to_csv())

        result = runner.invoke(app, ["scaling", "--e-min", "0.1", "--e-max", "0.21", "--table", str(path)])
        assert result.exit_code == 0
        row = SweepTable.from_csv(result.stdout).row_dict(0)
        assert row["slope_A"] == pytest.approx(1, abs=1e-10)
        assert row["slope_B"] == pytest.approx(2, abs=1e-10)
        assert row["slope_gap"] == pytest.approx(3, abs=1e-10)

    def test_scaling_missing_table(self, tmp_path: Path):
        args = ["scaling", "--e-min", "0.1", "--e-max", "0.2", "--table", str(tmp_path / "none.csv")]
        assert runner.invoke(app, args).exit_code == 4

    def test_check(self, tmp_path: Path):
        out = tmp_path / "check.csv"
        result = runner.invoke(app, ["check", "--draws", "20", "--n-grid", "64", "--out", str(out)])
        assert result.exit_code == 0
        table = SweepTable.from_csv(out.read_text())
        assert table.kind == "check"
        assert table.column("passed").tolist() == [1.0] * 6

    def test_check_as_json(self, tmp_path: Path):
        out = tmp_path / "check.json"
        args = ["check", "--draws", "20", "--n-grid", "64", "--format", "json", "--out", str(out)]
        assert runner.invoke(app, args).exit_code == 0
        table = SweepTable.from_json(out.read_text())
        assert table.columns == CHECK_COLUMNS
        assert len(table) == 6
        assert table.metadata["identity_3"] == "corner_coefficient(bipodal g0) = F"
        assert "failed" not in table.metadata

    def test_execute_returns_status(self):
        assert execute(RunConfig(command="classify", e=0.1)) == 2
