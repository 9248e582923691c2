"""Every verification suite runs clean at small caps on both backends."""

import pytest

from treefock.suites import COMMANDS, RunConfig, SuiteReport


@pytest.mark.parametrize("backend", ["exact", "float"])
@pytest.mark.parametrize("command", sorted(COMMANDS))
def test_suite_passes_at_small_caps(command, backend):
    cfg = RunConfig(command=command, level_max=1, degree_max=3,
                    depth_max=6, samples=20_000, seed=13, backend=backend)
    cfg.validate()
    for report in COMMANDS[command](cfg):
        assert report.cases > 0, report.check
        assert report.passed, (report.check, report.failures[:3])


def test_report_records_failures():
    r = SuiteReport("demo", "check", "statement")
    assert not r.passed  # no cases ran
    r.case(True, detail="fine")
    assert r.passed
    for i in range(15):
        r.case(False, detail=i)
    assert not r.passed
    assert r.cases == 16
    assert len(r.failures) == 10  # capped
    assert r.failures[0] == {"detail": "0"}
    d = r.to_json_dict()
    assert d["passed"] is False and d["cases"] == 16


def test_config_validation():
    RunConfig().validate()
    with pytest.raises(ValueError):
        RunConfig(level_max=0).validate()
    with pytest.raises(ValueError):
        RunConfig(degree_max=9).validate()
    with pytest.raises(ValueError):
        RunConfig(samples=0).validate()
    with pytest.raises(ValueError):
        RunConfig(backend="decimal").validate()
    with pytest.raises(ValueError):
        RunConfig(fmt="yaml").validate()
