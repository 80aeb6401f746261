import hypothesis
import numpy as np
import pytest

from retroking import (
    build_physicist_basis,
    build_psi_basis,
    build_qubit_mubs,
    build_qutrit_mubs,
    trio_table,
)

hypothesis.settings.register_profile("default", deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def qutrit_mubs():
    return build_qutrit_mubs()


@pytest.fixture(scope="session")
def qubit_mubs():
    return build_qubit_mubs()


@pytest.fixture(scope="session")
def trios():
    return trio_table()


@pytest.fixture(scope="session")
def psi_basis():
    return build_psi_basis()


@pytest.fixture(scope="session")
def physicist():
    return build_physicist_basis()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
