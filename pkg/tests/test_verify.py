import pytest

from hyperdet import run_suite
from hyperdet.report import write_report
from hyperdet.verify import suite_lemma1, suite_locc, suite_props


class TestSuiteProps:
    def test_small_run_all_pass(self):
        rep = suite_props(trials=40)
        assert rep.suite == "props"
        assert rep.seed == 7
        assert rep.all_pass
        assert len(rep.checks) == 19
        assert rep.elapsed > 0.0
        for rec in rep.records():
            assert set(rec) == {"check", "params", "observed", "bound", "pass"}


class TestSuiteLocc:
    def test_sound_slices_pass_at_small_size(self):
        # the inverted qutrit-tangle check needs enough draws to catch a
        # violation, so only the monotone checks are asserted here
        rep = suite_locc(trials=60)
        names = {c.check: c for c in rep.checks}
        assert len(rep.checks) == 6
        for name, check in names.items():
            if name.startswith("average_monotone"):
                assert check.passed, name


class TestSuiteLemma1:
    def test_small_run_all_pass(self):
        rep = suite_lemma1(trials=2000)
        assert rep.all_pass

    def test_deterministic(self):
        a = suite_lemma1(trials=1500)
        b = suite_lemma1(trials=1500)
        assert [c.observed for c in a.checks] == [c.observed for c in b.checks]


class TestRunSuite:
    def test_rejects_unknown(self):
        with pytest.raises(ValueError, match="suite"):
            run_suite("nope")

    def test_dispatches_with_overrides(self):
        rep = run_suite("props", seed=7, trials=30)
        assert rep.suite == "props"
        assert rep.all_pass


class TestWriteReport:
    def test_files_land_on_disk(self, tmp_path):
        rep = suite_props(trials=30)
        paths = write_report(rep, tmp_path / "out")
        assert paths
        for p in paths:
            assert p.exists() and p.stat().st_size > 0
        names = {p.name for p in paths}
        assert "props.jsonl" in names
        assert "props_errors.png" in names
