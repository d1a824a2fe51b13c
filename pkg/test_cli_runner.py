"""End-to-end tests of the magnls command line and the experiment runner."""

import json
from pathlib import Path
from types import SimpleNamespace

import pandas as pd
import pytest

from charting.chart_builder import ChartBuilder, ChartDataError
from core import experiment_runner
from core.command_line import main
from core.experiment_runner import SCAN_COLUMNS, blowup_scan
from dynamics.blowup import KINETIC_GROWTH, BlowupReport
from dynamics.sim_config import load_config
from logger.logging_manager import setup_application_logging
from observables.observable_series import SCALAR_COLUMNS

CONFIGS = Path(__file__).parent / "configs"
LARMOR = str(CONFIGS / "linear_larmor.json")
SMALL_LARMOR = ["--override", "n=64", "--override", "L=8", "--override", "dt=0.05",
                "--override", "t_end=0.5"]


def run_cli(*args):
    return main([*map(str, args), "-q"])


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


class TestEvolveMode:

    def test_writes_observables_and_manifest(self, tmp_path):
        assert run_cli("evolve", "--config", LARMOR, "--out", tmp_path, *SMALL_LARMOR) == 0
        frame = pd.read_csv(tmp_path / "observables.csv")
        assert list(frame.columns) == SCALAR_COLUMNS
        assert len(frame) == 11

        manifest = read_json(tmp_path / "manifest.json")
        assert manifest['mode'] == "evolve"
        assert manifest['config']['n'] == 64
        assert set(manifest['artifacts']) >= {"observables.csv", "summary.json"}
        assert manifest['summary']['variance_sup_gap'] <= 1e-7

        summary = read_json(tmp_path / "summary.json")
        assert summary['blowup']['detected'] is False
        assert summary['blowup']['time_label'] == "detected"
        assert summary['diamagnetic']['holds']

    def test_reruns_are_byte_identical(self, tmp_path):
        for name in ("first", "second"):
            assert run_cli("evolve", "--config", LARMOR, "--out", tmp_path / name, *SMALL_LARMOR) == 0
        for artifact in ("observables.csv", "summary.json"):
            assert (tmp_path / "first" / artifact).read_bytes() == (tmp_path / "second" / artifact).read_bytes()

    def test_snapshots_and_charts(self, tmp_path):
        code = run_cli("evolve", "--config", LARMOR, "--out", tmp_path, *SMALL_LARMOR,
                       "--override", "snapshot_stride=5", "--charts")
        assert code == 0
        assert sorted(p.name for p in (tmp_path / "snapshots").iterdir()) == [
            "snapshot_00000000.bin", "snapshot_00000005.bin", "snapshot_00000010.bin"]
        assert (tmp_path / "observables.html").exists()

    def test_seed_reaches_the_config(self, tmp_path):
        code = run_cli("evolve", "--out", tmp_path, "--seed", 3, "--override", "mu=0",
                       "--override", "t_end=0.02", "--override", 'initial.kind="random-bandlimited"',
                       "--override", "initial.cutoff=0.25")
        assert code == 0
        assert read_json(tmp_path / "manifest.json")['config']['seed'] == 3

    def test_pauli_mode(self, tmp_path):
        code = run_cli("evolve-pauli", "--config", CONFIGS / "pauli.json", "--out", tmp_path,
                       "--override", "n=64", "--override", "L=8", "--override", "dt=0.01",
                       "--override", "t_end=0.1", "--override", "observable_stride=2")
        assert code == 0
        columns = (tmp_path / "observables.csv").read_text(encoding="utf-8").splitlines()[0].split(",")
        assert columns[-4:] == ["T_P", "E_P", "F_P", "spin_z"]
        assert read_json(tmp_path / "manifest.json")['config']['equation'] == "pauli"


class TestExitCodes:

    def test_help(self, capsys):
        assert main(["--help"]) == 0

    def test_unknown_mode(self, tmp_path):
        assert main(["integrate", "--out", str(tmp_path)]) == 2
        assert experiment_runner.run("integrate", None, tmp_path) == 2

    @pytest.mark.parametrize("override", ["viscosity=1", "dt=-1", "n=48"])
    def test_config_errors(self, tmp_path, override):
        assert run_cli("evolve", "--out", tmp_path, "--override", override) == 2

    def test_missing_config_file(self, tmp_path):
        assert run_cli("evolve", "--config", tmp_path / "missing.json", "--out", tmp_path) == 2

    def test_pauli_config_in_scalar_mode(self, tmp_path):
        assert run_cli("evolve", "--config", CONFIGS / "pauli.json", "--out", tmp_path) == 2

    def test_empty_scan(self, tmp_path):
        assert run_cli("blowup-scan", "--out", tmp_path, "--override", "B_list=[]") == 2

    def test_too_few_virial_rows(self, tmp_path):
        assert run_cli("virial-check", "--out", tmp_path, "--override", "t_end=0.002",
                       "--override", "observable_stride=1") == 2

    def test_unresolved_state(self, tmp_path):
        assert run_cli("evolve", "--out", tmp_path, "--override", "initial.width=4") == 3

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "taken"
        blocker.write_text("not a directory", encoding="utf-8")
        assert run_cli("evolve", "--out", blocker, "--override", "t_end=0.01") == 1

    def test_unexpected_failure_exits_one(self, tmp_path, monkeypatch):
        def broken(self, context):
            raise ValueError("shape mismatch")
        monkeypatch.setattr(experiment_runner.EvolveMode, "execute", broken)
        assert run_cli("evolve", "--out", tmp_path) == 1
        assert not (tmp_path / "manifest.json").exists()


class TestCheckModes:

    def test_virial_check(self, tmp_path):
        code = run_cli("virial-check", "--config", LARMOR, "--out", tmp_path, *SMALL_LARMOR)
        assert code == 0
        report = read_json(tmp_path / "virial.json")
        assert report['functional'] == "F_S"
        assert report['forms_relative_gap'] <= 1e-9
        assert 3.0 <= report['stride_halving_ratio'] <= 4.5
        assert list(pd.read_csv(tmp_path / "virial.csv").columns) == ['t', 'g', 'rhs', 'rhs_instantaneous']

    @pytest.mark.slow
    def test_virial_check_in_three_dimensions(self, tmp_path):
        assert run_cli("virial-check", "--config", CONFIGS / "virial_3d.json", "--out", tmp_path) == 0
        report = read_json(tmp_path / "virial.json")
        assert report['functional'] == "F_S"
        assert report['blowup']['detected'] is False
        assert report['relative_gap'] <= 1e-3
        assert 3.0 <= report['stride_halving_ratio'] <= 4.5
        assert len(pd.read_csv(tmp_path / "observables.csv")) == 101

    @pytest.mark.slow
    def test_diamagnetic_bound_along_the_conservation_run(self, tmp_path):
        code = run_cli("evolve", "--config", CONFIGS / "focusing_conservation.json", "--out", tmp_path)
        assert code == 0
        summary = read_json(tmp_path / "summary.json")
        assert summary['snapshots'] == [0, 5000, 10000, 15000]
        assert summary['diamagnetic']['holds'] is True
        assert summary['diamagnetic']['max_excess'] <= summary['diamagnetic']['slack_at_worst']
        assert summary['drift']['mass'] <= 1e-10

    def test_strichartz_check(self, tmp_path):
        code = run_cli("strichartz-check", "--config", CONFIGS / "strichartz.json", "--out", tmp_path,
                       "--override", "strichartz.B_values=[1, 3]", "--override", "strichartz.nodes=32")
        assert code == 0
        document = read_json(tmp_path / "strichartz.json")
        assert document['sharp_constant_ratio'] == pytest.approx(2 ** -0.5, rel=1e-10)
        assert max(report['relative_gap'] for report in document['reports']) <= 5e-3
        assert len(pd.read_csv(tmp_path / "strichartz.csv")) == 2

    def test_certify_example(self, tmp_path):
        assert run_cli("certify-example", "--config", CONFIGS / "vortex_certify.json", "--out", tmp_path) == 0
        certificate = read_json(tmp_path / "certificate.json")
        assert certificate['agreement']['E0'] is True
        assert certificate['ratio'] == pytest.approx(400.0, rel=1e-9)
        summary = read_json(tmp_path / "manifest.json")['summary']
        assert summary['grid_max_relative_gap'] <= 1e-5

    @pytest.mark.slow
    def test_blowup_scan(self, tmp_path):
        assert run_cli("blowup-scan", "--config", CONFIGS / "blowup_scan.json", "--out", tmp_path) == 0
        frame = pd.read_csv(tmp_path / "blowup_scan.csv")
        assert list(frame.columns) == SCAN_COLUMNS
        assert list(frame['B']) == [2.0, 4.0, 8.0]
        assert (frame['F0'] < 0.0).all()
        assert (frame['sufficient'] == "blow-up").all()
        assert frame['detected'].all()
        assert frame['predicted_first_zero'].iloc[0] == pytest.approx(0.1074, abs=2e-3)

        times = list(frame['t_detect'])
        assert times[0] > times[1] > times[2]
        assert (frame['signed_gap'] <= 1e-4).all()

        summary = read_json(tmp_path / "manifest.json")['summary']
        assert summary['decreasing'] is True
        assert summary['bounded'] is True
        assert 0.0 < summary['max_relative_gap'] < 1.0


class TestBlowupScanVerdicts:

    @staticmethod
    def fake_evolver(times):
        def evolver(config):
            def run(scan_config):
                t_detect = times[scan_config.B]
                first_row = {'F_S': -44.0, 'g': 0.55, 'gdot': 0.0}
                if t_detect is None:
                    report = BlowupReport.quiet(first_row)
                else:
                    report = BlowupReport.fired(KINETIC_GROWTH, t_detect, 10.0, first_row)
                return SimpleNamespace(series=SimpleNamespace(first_row=lambda: first_row), blowup=report)
            return run
        return evolver

    def scan(self, monkeypatch, times):
        monkeypatch.setattr(experiment_runner, "_evolver", self.fake_evolver(times))
        return blowup_scan(load_config(None, ["B_list=[8, 2, 4]", "dt=1e-4"]))

    def test_detections_below_the_first_zero(self, monkeypatch):
        report = self.scan(monkeypatch, {2.0: 0.070, 4.0: 0.068, 8.0: 0.064})
        assert report.decreasing is True
        assert report.bounded is True
        assert [row['B'] for row in report.rows] == [8.0, 2.0, 4.0]
        assert all(row['signed_gap'] < 0.0 for row in report.rows)
        assert report.max_relative_gap == pytest.approx(
            max(abs(row['relative_gap']) for row in report.rows))

    def test_late_detection_is_unbounded(self, monkeypatch):
        report = self.scan(monkeypatch, {2.0: 0.2, 4.0: 0.068, 8.0: 0.064})
        assert report.decreasing is True
        assert report.bounded is False

    def test_missing_detection_leaves_order_open(self, monkeypatch):
        report = self.scan(monkeypatch, {2.0: 0.070, 4.0: 0.068, 8.0: None})
        assert report.decreasing is None
        assert report.bounded is True

    def test_equal_times_are_not_decreasing(self, monkeypatch):
        assert self.scan(monkeypatch, {2.0: 0.07, 4.0: 0.07, 8.0: 0.064}).decreasing is False


class TestCharts:

    def test_observables_chart_overlays_the_closed_form(self):
        frame = pd.DataFrame({column: [0.0, 1.0] for column in SCALAR_COLUMNS})
        chart = ChartBuilder.create_observables_chart(frame, "run", closed_form=lambda t: 1.0 + t)
        names = [trace.name for trace in chart.data]
        assert "g closed form" in names
        assert "T_P" not in names

    @pytest.mark.parametrize("build", [
        lambda: ChartBuilder.create_observables_chart(pd.DataFrame(), "empty"),
        lambda: ChartBuilder.create_blowup_scan_chart([]),
        lambda: ChartBuilder.create_strichartz_chart([]),
    ])
    def test_empty_input_is_rejected(self, build):
        with pytest.raises(ChartDataError) as info:
            build()
        assert info.value.exit_code == 1


class TestLoggingOptions:

    def test_log_file_receives_run_records(self, tmp_path):
        log_file = tmp_path / "logs" / "run.log"
        code = main(["evolve", "--config", LARMOR, "--out", str(tmp_path / "run"), *SMALL_LARMOR,
                     "--log-file", str(log_file), "--file-only", "-v"])
        assert code == 0
        text = log_file.read_text(encoding="utf-8")
        assert "magnls.core.experiment_runner: Mode evolve finished" in text
        setup_application_logging(quiet=True)

    def test_file_only_needs_a_file(self, tmp_path):
        assert main(["evolve", "--out", str(tmp_path), "--file-only"]) == 2

    def test_unexpected_failure_is_logged_with_traceback(self, tmp_path, monkeypatch):
        def broken(self, context):
            raise ValueError("shape mismatch")
        monkeypatch.setattr(experiment_runner.EvolveMode, "execute", broken)
        log_file = tmp_path / "run.log"
        code = main(["evolve", "--out", str(tmp_path / "run"), "--log-file", str(log_file), "--file-only"])
        assert code == 1
        text = log_file.read_text(encoding="utf-8")
        assert "ERROR    magnls.core.experiment_runner: Mode evolve failed unexpectedly" in text
        assert "ValueError: shape mismatch" in text
        setup_application_logging(quiet=True)
