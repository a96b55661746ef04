import pytest

from halfpos import fixtures


@pytest.fixture
def unsat_example():
    return fixtures.inf_a_or_reach_aa_unsaturated()


@pytest.fixture
def reach_aa():
    return fixtures.reach_aa()


@pytest.fixture
def inf_a_or_reach_aa():
    return fixtures.inf_a_or_reach_aa()


@pytest.fixture
def prefix_aa_or_bb():
    return fixtures.prefix_aa_or_bb()


@pytest.fixture
def inf_a_and_inf_b():
    return fixtures.inf_a_and_inf_b()


@pytest.fixture
def ladder():
    return fixtures.ladder_abc()
