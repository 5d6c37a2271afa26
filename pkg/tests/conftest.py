import pytest
from hypothesis import settings, strategies as st

from morsecert import words as W
from morsecert.builders import hexagon, hexagon_product, raag
from morsecert.complex_core import SimplicialComplex
from morsecert.group_models import DoubledFreeElement

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def hex_example():
    return hexagon()


@pytest.fixture(scope="session")
def hex_product_example():
    return hexagon_product()


@pytest.fixture(scope="session", params=[1, 2, 3])
def raag_example(request):
    return raag(request.param)


@st.composite
def simplicial_complexes(draw, max_vertices=7, max_facets=6, max_dim=3):
    n = draw(st.integers(1, max_vertices))
    verts = list(range(n))
    facets = draw(
        st.lists(
            st.sets(st.sampled_from(verts), min_size=1, max_size=min(n, max_dim + 1)),
            max_size=max_facets,
        )
    )
    return SimplicialComplex(verts, facets)


def free_words(rank, max_len=6):
    letters = st.sampled_from([x for i in range(1, rank + 1) for x in (i, -i)])
    return st.lists(letters, max_size=max_len).map(W.reduce_word)


@st.composite
def doubled_elements(draw, n=2, max_len=6, flip=None):
    coords = tuple(draw(free_words(2, max_len)) for _ in range(n))
    f = draw(st.booleans()) if flip is None else flip
    return DoubledFreeElement(coords, f)


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_acceptance" in report.nodeid and report.when == "call":
        props = dict(report.user_properties)
        _acceptance[props.get("criterion")] = (report.outcome, props.get("title", ""), props.get("seconds"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        outcome, title, secs = _acceptance[n]
        mark = "PASS" if outcome == "passed" else "FAIL"
        timing = f" ({secs}s)" if secs is not None else ""
        terminalreporter.write_line(f"criterion {n}: {mark}  {title}{timing}")
