import numpy as np
import pytest
from hypothesis import settings

from addbasis import goldbach as gb
from addbasis import sequences as sq

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")

# acceptance criteria report one line each through this registry; the
# terminal-summary hook prints them after the run regardless of capture
ACCEPTANCE_LINES: list[str] = []


def record_criterion(ident: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {ident}: {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def primes_1e4():
    return sq.generate("primes", 10**4)


@pytest.fixture(scope="session")
def naturals_2k():
    return sq.generate("naturals", 2000)


@pytest.fixture(scope="session")
def arith_tables():
    return gb.ArithTables(2_200_000)


@pytest.fixture(scope="session")
def random_seq_1e4():
    rng = np.random.default_rng(0)
    members = np.flatnonzero(rng.random(10**4 + 1) < 0.2)
    return sq.from_elements(members, 10**4, "random")
