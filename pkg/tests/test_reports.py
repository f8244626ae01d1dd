import pytest

from cubica import reports
from cubica.config import Settings
from cubica.models import CheckResult, Report
from cubica.reports import FileReportSink, MemoryReportSink, get_report_sink


def make_report(suite: str = "forms", passed: bool = True) -> Report:
    report = Report(suite=suite, seed=3, trials=1)
    report.add(CheckResult(case="b/theta-hat", passed=True, lhs="0", rhs="0"))
    report.add(CheckResult(case="a/stokes", passed=passed, lhs="1/1", rhs="1/1" if passed else "0/1"))
    return report


class TestReport:
    def test_finalize_sorts_checks(self):
        report = make_report().finalize()
        assert [check.case for check in report.checks] == ["a/stokes", "b/theta-hat"]

    def test_failures(self):
        report = make_report(passed=False)
        assert not report.passed
        assert [check.case for check in report.failures()] == ["a/stokes"]

    def test_json_uses_pass_key(self):
        assert '"pass": true' in make_report().to_json()


class TestSinks:
    def test_memory(self):
        sink = MemoryReportSink()
        sink.write(make_report())
        assert sink.read_all()[0].checks[0].case == "a/stokes"

    def test_file_appends(self, tmp_path):
        sink = FileReportSink(str(tmp_path / "reports.json"))
        sink.write(make_report("forms"))
        sink.write(make_report("stokes"))
        assert [report.suite for report in sink.read_all()] == ["forms", "stokes"]

    def test_file_overwrites(self, tmp_path):
        path = str(tmp_path / "reports.json")
        FileReportSink(path).write(make_report("forms"))
        FileReportSink(path, append=False).write(make_report("stokes"))
        assert [report.suite for report in FileReportSink(path).read_all()] == ["stokes"]

    def test_unreadable_file_is_ignored(self, tmp_path):
        path = tmp_path / "reports.json"
        path.write_text("[{", encoding="utf-8")
        assert FileReportSink(str(path)).read_all() == []

    def test_explicit_path_gives_a_file_sink(self, tmp_path):
        sink = get_report_sink(str(tmp_path / "out.json"))
        assert isinstance(sink, FileReportSink)
        assert not sink.append

    def test_default_sink_is_cached(self):
        sink = get_report_sink()
        assert isinstance(sink, MemoryReportSink)
        assert get_report_sink() is sink

    def test_file_sink_from_settings(self, monkeypatch, tmp_path):
        monkeypatch.setattr(reports.settings, "REPORT_SINK", "file")
        monkeypatch.setattr(reports.settings, "REPORT_PATH", str(tmp_path / "default.json"))
        sink = get_report_sink()
        assert isinstance(sink, FileReportSink)
        assert sink.path == tmp_path / "default.json"


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ("CUBICA_SEED", "CUBICA_TRIALS", "CUBICA_MAX_DIMENSION"):
            monkeypatch.delenv(name, raising=False)
        settings = Settings(_env_file=None)
        assert settings.SEED is None
        assert settings.TRIALS == 20
        assert settings.MAX_DIMENSION == 4

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("CUBICA_TRIALS", "5")
        monkeypatch.setenv("CUBICA_SEED", "11")
        settings = Settings(_env_file=None)
        assert settings.TRIALS == 5
        assert settings.SEED == 11

    def test_dimension_cap(self, monkeypatch):
        monkeypatch.setenv("CUBICA_MAX_DIMENSION", "6")
        with pytest.raises(ValueError):
            Settings(_env_file=None)
