import shutil

import pytest

from jmprelax.relax import available_backends


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


def pytest_report_header(config):
    return f"jmprelax kernels: {', '.join(available_backends())}"


have_binutils = shutil.which("as") is not None and shutil.which("objcopy") is not None


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
