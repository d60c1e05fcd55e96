from __future__ import annotations

import pytest

from splitfinder import families


@pytest.fixture(scope="session")
def pentagon():
    return families.gen_convex_polygon(5, balanced=False)


@pytest.fixture(scope="session")
def pentagon_balanced():
    return families.gen_convex_polygon(5, balanced=True)


@pytest.fixture(scope="session")
def disjunction_d3m1():
    return families.gen_disjunction(3, 1)


@pytest.fixture(scope="session")
def disjunction_d4m2():
    return families.gen_disjunction(4, 2)


@pytest.fixture(scope="session")
def disjunction_d6m2():
    return families.gen_disjunction(6, 2)


@pytest.fixture(scope="session")
def box_d1r2():
    return families.gen_box_localization((2,))


@pytest.fixture(scope="session")
def box_d2r11():
    return families.gen_box_localization((1, 1))


@pytest.fixture(scope="session")
def cx_plus_d2l2():
    return families.gen_counterexample_plus(2, 2)
