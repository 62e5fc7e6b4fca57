import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
RULE_FIXTURES = FIXTURES / "rules"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def rule_fixtures_dir():
    return RULE_FIXTURES
