import json
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / 'golden'


def load_golden(name: str):
    with open(GOLDEN / name, encoding='utf-8') as file:
        return json.load(file)


def pytest_generate_tests(metafunc):
    """parametrizes published_case over every published solution table"""
    if 'published_case' in metafunc.fixturenames:
        cases = load_golden('published_tables.json')['cases']
        metafunc.parametrize('published_case', cases, ids=[case['type'] for case in cases])


@pytest.fixture
def golden():
    return load_golden
