import numpy as np
import pytest

from rgvcs.image import half_white_secret


class ScriptedSource:
    """Single-stream stand-in for RandomSource that replays fixed draws."""

    def __init__(self, bits=(), picks=()):
        self._bits = list(bits)
        self._picks = list(picks)

    def __len__(self):
        return 1

    def bits(self):
        return np.array([self._bits.pop(0)], dtype=np.uint8)

    def below(self, m):
        pick = self._picks.pop(0) if self._picks else 0
        assert 0 <= pick < m, f"scripted pick {pick} outside [0, {m})"
        return np.array([pick], dtype=np.int64)


@pytest.fixture
def scripted():
    return ScriptedSource


@pytest.fixture(scope="session")
def half_white():
    return half_white_secret(512, 512)


_VERDICTS = pytest.StashKey[dict]()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker.args
    verdicts = item.config.stash.setdefault(_VERDICTS, {})
    ok = report.passed and verdicts.get(number, (True,))[0]
    details = [v for k, v in item.user_properties if k == "detail"]
    verdicts[number] = (ok, title, "; ".join(details))


def pytest_terminal_summary(terminalreporter, config):
    verdicts = config.stash.get(_VERDICTS, {})
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        ok, title, detail = verdicts[number]
        line = f"{'PASS' if ok else 'FAIL'} {number:>2}. {title}"
        terminalreporter.write_line(line + (f" [{detail}]" if detail else ""))


@pytest.fixture
def note(request):
    """Attach a short measurement summary to the acceptance report line."""
    def add(text):
        print(text)
        request.node.user_properties.append(("detail", text))
    return add
