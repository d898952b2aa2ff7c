import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from lhomdc.exactlinalg import FieldSpec, Mat  # noqa: E402
from lhomdc.sublattice import span  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

F2, F3, F5, QQ = FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(None)
FIELDS = [F2, F3, QQ]

fields = st.sampled_from(FIELDS)


def scalars(f: FieldSpec):
    if f.p is None:
        return st.fractions(min_value=-3, max_value=3, max_denominator=3)
    return st.integers(0, f.p - 1)


@st.composite
def matrices(draw, f=None, rows=None, cols=None, max_dim=5):
    f = draw(fields) if f is None else f
    r = draw(st.integers(0, max_dim)) if rows is None else rows
    c = draw(st.integers(0, max_dim)) if cols is None else cols
    # sparse entries make kernels and coincidences more likely
    entries = [[draw(st.one_of(st.just(0), scalars(f))) for _ in range(c)] for _ in range(r)]
    return Mat.from_rows(f, entries, cols=c)


@st.composite
def subspaces(draw, f, n, max_gens=None):
    k = draw(st.integers(0, n + 1 if max_gens is None else max_gens))
    vecs = [[draw(st.one_of(st.just(0), scalars(f))) for _ in range(n)] for _ in range(k)]
    return span(f, n, vecs)


acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
