import numpy as np
import pytest

from sixlength.degrees import DegreeSequence


def compositions(n: int, cap: int):
    """All length-n non-negative integer vectors with sum n and max <= cap."""
    def rec(prefix, left, slots):
        if slots == 0:
            if left == 0:
                yield tuple(prefix)
            return
        for d in range(min(left, cap) + 1):
            yield from rec(prefix + [d], left - d, slots - 1)
    yield from rec([], n, n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def square_mod5():
    # f(x) = x^2 mod 5
    return [x * x % 5 for x in range(5)]


@pytest.fixture
def small_sequences():
    return [DegreeSequence(d) for n in range(1, 6) for d in compositions(n, n)]


def random_sequence(gen: np.random.Generator, n: int, moves: int) -> DegreeSequence:
    """All-ones sequence perturbed by ``moves`` unit transfers between vertices."""
    d = np.ones(n, dtype=np.int64)
    for _ in range(moves):
        src = gen.choice(np.flatnonzero(d > 0))
        dst = gen.integers(n)
        d[src] -= 1
        d[dst] += 1
    return DegreeSequence(d)



# criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def record(num: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[num] = (title, bool(ok), detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {num:2d} {title}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num:2d} {title}: {detail}")
