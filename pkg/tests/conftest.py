from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from batchcodes.gf import GFMatrix
from batchcodes.strong import Service

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "data"

R38 = [(1,), (2, 3), (6, 7), (6, 8), (2,), (4, 6), (5, 7), (5, 8), (4,), (1, 5), (3, 7), (3, 8)]
R38_TAGS = [1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3]


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def G73() -> GFMatrix:
    return GFMatrix.from_strings(["1010101", "0110011", "0001111"])


@pytest.fixture(scope="session")
def G32() -> GFMatrix:
    return GFMatrix.from_strings(["101", "011"])


@pytest.fixture(scope="session")
def G38() -> GFMatrix:
    return GFMatrix.from_strings(["10101011", "01100111", "00011111"])


@pytest.fixture(scope="session")
def R38_sets() -> list[tuple[int, ...]]:
    return list(R38)


@pytest.fixture(scope="session")
def S38() -> list[Service]:
    return [Service.of(i, r) for i, r in zip(R38_TAGS, R38)]


# acceptance summary ------------------------------------------------------------

CRITERIA: dict[int, list[tuple[str, bool, float]]] = {}


def record(criterion: int, name: str, ok: bool, seconds: float) -> None:
    CRITERIA.setdefault(criterion, []).append((name, ok, seconds))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(CRITERIA):
        subs = CRITERIA[c]
        ok = all(s[1] for s in subs)
        secs = sum(s[2] for s in subs)
        failed = [s[0] for s in subs if not s[1]]
        tail = f" (failed: {'; '.join(failed)})" if failed else ""
        terminalreporter.write_line(
            f"criterion {c}: {'PASS' if ok else 'FAIL'} [{len(subs)} checks, {secs:.2f} s]{tail}"
        )
