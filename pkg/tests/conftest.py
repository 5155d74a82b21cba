from fractions import Fraction

from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

primes = st.sampled_from([2, 3, 5, 7])
rationals = st.builds(Fraction, st.integers(-(10**6), 10**6), st.integers(1, 10**4))
nonzero_rationals = rationals.filter(lambda q: q != 0)

import pytest

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record ``(k, ok, detail)`` for the acceptance summary, then assert."""

    def record(k: int, ok: bool, detail: str):
        _ACCEPTANCE[k] = (ok, detail)
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}"
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}")
