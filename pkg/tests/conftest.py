import json
from pathlib import Path

import pytest

from critline.hermitian_form import FormConfig
from critline.zeros import find_zeros_upto

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def oracle():
    return json.loads(Path(__file__).with_name("oracle_values.json").read_text())


@pytest.fixture(scope="session")
def cfg():
    return FormConfig()


@pytest.fixture(scope="session")
def zeros100():
    return find_zeros_upto(100)


@pytest.fixture(scope="session")
def zeros_first50():
    zt = find_zeros_upto(150)
    return zt.head(50)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
    terminalreporter.section("acceptance by criterion")
    verdicts: dict[str, list[str]] = {}
    for line in ACCEPTANCE_LINES:
        status, _, tag = line.split(":", 1)[0].split()
        verdicts.setdefault(tag.rstrip("abc"), []).append(status)
    for num in sorted(verdicts, key=int):
        ok = all(v == "PASS" for v in verdicts[num])
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}")
