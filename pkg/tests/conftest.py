import pytest

from ghostsim.config import fig2_config


@pytest.fixture
def fig2():
    return fig2_config()


@pytest.fixture
def fig2_lens():
    return fig2_config(lens_focal=0.25)


@pytest.fixture
def same_color():
    return fig2_config(lambda1=780e-9)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
