import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from marczewski import FiniteAlgebra, Operation  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def operations(draw, n=None, max_arity=2, support=None):
    n = draw(st.integers(1, 3)) if n is None else n
    if support is None:
        k = draw(st.integers(0, max_arity))
        support = tuple(sorted(draw(st.sets(st.integers(0, 6), min_size=k, max_size=k))))
    table = draw(st.lists(st.integers(0, n - 1), min_size=n ** len(support), max_size=n ** len(support)))
    return Operation(tuple(support), n, table)


@st.composite
def algebras(draw, carriers=(2, 3), max_ops=2, max_arity=2):
    n = draw(st.sampled_from(carriers))
    count = draw(st.integers(1, max_ops))
    ops = {}
    for i in range(count):
        k = draw(st.integers(0, max_arity))
        ops[f"o{i}"] = draw(operations(n=n, support=tuple(range(k))))
    return FiniteAlgebra(n, ops)


# (criterion, passed, seconds, detail) rows appended by test_acceptance
ACCEPTANCE: list[tuple[int, bool, float, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, secs, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} ({secs:.2f}s) {detail}")
