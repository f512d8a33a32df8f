import math

import pytest

from thinslit.geometry import WaveguideConfig

OMEGA = 0.8 * math.pi
EPS = 0.05


@pytest.fixture(autouse=True, scope="session")
def _cache_dir(tmp_path_factory):
    mp = pytest.MonkeyPatch()
    mp.setenv("THINSLIT_CACHE_DIR", str(tmp_path_factory.mktemp("constants")))
    yield
    mp.undo()


def paper_config(epsilon=EPS, **kw):
    """The distributor studied throughout: flush plus slit, minus slit at -2.5."""
    args = dict(omega=OMEGA, epsilon=epsilon, p_plus=-epsilon / 2, p_minus=-2.5)
    args.update(kw)
    return WaveguideConfig(**args)


@pytest.fixture
def paper():
    return paper_config()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod._lines():
        terminalreporter.write_line(line)
