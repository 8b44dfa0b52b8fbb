import random
import sys
from contextlib import contextmanager
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(20240613)


# -- acceptance bookkeeping: one PASS/FAIL line per criterion ----------------------

_ACCEPTANCE: list[tuple[int, str]] = []


class _Recorder:
    @contextmanager
    def criterion(self, number: int, title: str):
        info = {"detail": ""}
        try:
            yield info
        except BaseException as exc:
            msg = str(exc).splitlines()[0] if str(exc) else ""
            _ACCEPTANCE.append((number, f"FAIL  {number:>2}. {title}: {type(exc).__name__} {msg}".rstrip()))
            raise
        suffix = f" [{info['detail']}]" if info["detail"] else ""
        _ACCEPTANCE.append((number, f"PASS  {number:>2}. {title}{suffix}"))


@pytest.fixture
def acceptance():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
