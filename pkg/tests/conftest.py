import pytest

from loopalgebra import SurfaceGroup, build_representation

# filled by tests/test_acceptance.py: criterion number -> (passed, detail)
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def G2():
    return SurfaceGroup(2)


@pytest.fixture(scope="session")
def G3():
    return SurfaceGroup(3)


@pytest.fixture(scope="session")
def rep2():
    return build_representation(2)


@pytest.fixture(scope="session")
def rep3():
    return build_representation(3)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
