import numpy as np
import pytest

from hierconsensus.hierarchy import HierarchyConfig

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one line per acceptance criterion; printed in the terminal summary."""

    def record(name: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE.append((name, bool(passed), detail))
        assert passed, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


def random_l2_configs(count: int, seed: int, lo: float = 0.05, hi: float = 20.0) -> list[HierarchyConfig]:
    rng = np.random.default_rng(seed)
    return [
        HierarchyConfig(2, int(rng.integers(2, 7)), float(rng.uniform(lo, hi)), float(rng.uniform(lo, hi)))
        for _ in range(count)
    ]


@pytest.fixture
def example3():
    return HierarchyConfig(2, 3, 1.0, 1.0)
