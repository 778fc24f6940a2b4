from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def sample_workload_path() -> Path:
    return FIXTURES / "sample_workload.json"


@pytest.fixture
def energy_table_path() -> Path:
    return FIXTURES / "energy_table.json"
