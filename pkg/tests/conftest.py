"""
Pytest configuration and fixtures shared by the engine tests
"""
import json
from pathlib import Path
from typing import Callable, Dict, List

import pytest
from click.testing import CliRunner
from hypothesis import HealthCheck, settings

from app.algebra.poly import LaurentPoly2
from app.core.cache import reset_skein_cache
from app.core.config import get_settings

settings.register_profile("engine", deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("engine")


@pytest.fixture(autouse=True)
def fresh_settings_and_cache():
    """Every test sees default settings and an empty skein memo"""
    get_settings.cache_clear()
    reset_skein_cache()
    yield
    get_settings.cache_clear()
    reset_skein_cache()


@pytest.fixture
def trefoil() -> LaurentPoly2:
    """P of the closure of sigma_1^3"""
    return LaurentPoly2({(2, 0): 2, (4, 0): -1, (2, 2): 1})


@pytest.fixture
def figure_eight() -> LaurentPoly2:
    return LaurentPoly2({(2, 0): 1, (-2, 0): 1, (0, 0): -1, (0, 2): -1})


@pytest.fixture
def unknot() -> LaurentPoly2:
    return LaurentPoly2.constant(1)


@pytest.fixture
def cli_runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def bundled_records() -> List[Dict]:
    """Raw records of the bundled knot table"""
    path = Path(get_settings().KNOT_TABLE_PATH)
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


@pytest.fixture
def write_table(tmp_path) -> Callable[[List], Path]:
    """Write records (dicts or raw strings) as a JSON-lines table and return its path"""

    def _write(lines: List) -> Path:
        path = tmp_path / "knots.jsonl"
        rendered = [line if isinstance(line, str) else json.dumps(line) for line in lines]
        path.write_text("\n".join(rendered) + "\n", encoding="utf-8")
        return path

    return _write
