import itertools

import numpy as np
import pytest

from transversals import ConvexBody, Family, ball_polytope


def box(lo, hi, label=""):
    corners = list(itertools.product(*zip(lo, hi)))
    return ConvexBody(np.array(corners, dtype=float), label=label)


def prism(poly2, z0, z1, label=""):
    p = np.asarray(poly2, dtype=float)
    bottom = np.column_stack([p, np.full(len(p), z0)])
    top = np.column_stack([p, np.full(len(p), z1)])
    return ConvexBody(np.vstack([bottom, top]), label=label)


@pytest.fixture(scope="session")
def two_cubes():
    return Family([box((-1, -1, -4), (1, 1, -2), "bottom"), box((-1, -1, 2), (1, 1, 4), "top")])


@pytest.fixture(scope="session")
def two_balls():
    return Family([ball_polytope((0, -2, 0), 1.0, 200, "west"),
                   ball_polytope((0, 2, 0), 1.0, 200, "east")])


@pytest.fixture(scope="session")
def three_slabs():
    # projections along +z pairwise overlap but the three only touch at the origin
    k3 = box((-2, -1, 0), (2, 0, 1), "K3")
    k1 = prism([(0, 0), (2, -1), (2, 2), (-1, 2)], 2, 3, "K1")
    k2 = prism([(0, 0), (-2, -1), (-2, 2), (1, 2)], 4, 5, "K2")
    return Family([k1, k2, k3])


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_unit(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1)[:, None]


# acceptance results, filled by test_acceptance.py and echoed in the summary
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {k}. {title}: {detail}")
