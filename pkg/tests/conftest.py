"""Shared fixtures: field towers and the worked-example bundles are
expensive enough to build once per session."""

import pytest

from mtgoppa import examples_data
from mtgoppa.gf import field_build


@pytest.fixture(scope="session")
def f4():
    return field_build(2, [[1, 1, 1]])


@pytest.fixture(scope="session")
def f16():
    return field_build(2, [[1, 1, 1], [2, 1, 1]])


@pytest.fixture(scope="session")
def f32():
    return field_build(2, [[1, 0, 1, 0, 0, 1]])


@pytest.fixture(scope="session")
def f9():
    return field_build(3, [[2, 2, 1]])


@pytest.fixture(scope="session")
def f1024():
    # F2 <= F32 <= F1024 with stage modulus z^2 + z + a^3
    return field_build(2, [[1, 0, 1, 0, 0, 1], [8, 1, 1]])


@pytest.fixture(scope="session")
def f256_tower():
    # F2 <= F4 <= F16 <= F256 (the worked-example tower)
    return field_build(2, [[1, 1, 1], [2, 1, 1], [8, 2, 1]])


@pytest.fixture(scope="session")
def ex1():
    return examples_data.example1()


@pytest.fixture(scope="session")
def ex2():
    return examples_data.example2()


@pytest.fixture(scope="session")
def ex3():
    return examples_data.example3()


@pytest.fixture(scope="session")
def qc_ex():
    return examples_data.qc_f9()
