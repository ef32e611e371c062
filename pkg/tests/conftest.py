import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=50, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


_VERDICTS: dict = {}


def quick_verdict(cid: str, g: int = 2, **kw):
    """run_check with the default quick spec, memoised across test modules."""
    from symplift.checks import CheckSpec, run_check

    key = (cid, g, tuple(sorted(kw.items())))
    if key not in _VERDICTS:
        _VERDICTS[key] = run_check(CheckSpec(cid, g=g, **kw))
    return _VERDICTS[key]


_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        _CRITERIA[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    import test_acceptance

    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split("_")[2])):
        doc = (getattr(test_acceptance, name).__doc__ or "").strip().splitlines()[0]
        status = "PASS" if _CRITERIA[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {name.split('_')[2]:>2}: {status}  {doc}")
