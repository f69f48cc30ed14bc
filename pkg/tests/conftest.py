"""
Test configuration and fixtures for dihedral-xi
"""
import json
from pathlib import Path
from typing import Any, Dict

import pytest

from dihedral_xi.cover import build_cover_complex
from dihedral_xi.diagram import load_scene, parse_scene

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# Test configuration
TEST_CONFIG = {
    "p": 3,
    "provider": "computed",
    "log_level": "WARNING",
    "max_workers": 1,
    "sign_digits": 30,
    "report_indent": 2,
    "mirror_convention": False,
}

# Trefoil with a meridian loop "m" around one of its arcs.
TREFOIL_WITH_MERIDIAN = {
    "name": "trefoil-meridian",
    "p": 3,
    "components": [
        {
            "name": "alpha",
            "role": "alpha",
            "walk": [
                ["a", "over"], ["m1", "over"], ["m2", "under"], ["b", "under"],
                ["c", "over"], ["a", "under"], ["b", "over"], ["c", "under"],
            ],
        },
        {"name": "m", "role": "companion", "walk": [["m1", "under"], ["m2", "over"]]},
    ],
    "crossings": {"a": 1, "b": 1, "c": 1, "m1": 1, "m2": 1},
    "zeroth_arcs": {"alpha": 4},
    "coloring": [1, 2, 3, 3],
}

# Trefoil next to two crossing-free companions.
TREFOIL_WITH_LOOPS = {
    "name": "trefoil-loops",
    "p": 3,
    "components": [
        {
            "name": "alpha",
            "role": "alpha",
            "walk": [
                ["a", "over"], ["b", "under"], ["c", "over"],
                ["a", "under"], ["b", "over"], ["c", "under"],
            ],
        },
        {"name": "u", "role": "companion", "walk": []},
        {"name": "v", "role": "companion", "walk": []},
    ],
    "crossings": {"a": 1, "b": 1, "c": 1},
    "zeroth_arcs": {"alpha": 2},
    "coloring": [1, 2, 3],
}


@pytest.fixture
def test_config() -> Dict[str, Any]:
    """Provide test configuration."""
    return TEST_CONFIG.copy()


@pytest.fixture
def data_dir() -> Path:
    """Directory holding the bundled scene and problem files."""
    return DATA_DIR


@pytest.fixture(scope="session")
def six_one_scene():
    """The 6_1 scene: alpha with the characteristic curve and its right push-off."""
    return load_scene(DATA_DIR / "6_1.scene.json")


@pytest.fixture(scope="session")
def six_one_cover(six_one_scene):
    """Cover complex of the 6_1 scene, built once per session."""
    return build_cover_complex(six_one_scene)


@pytest.fixture(scope="session")
def trefoil_scene():
    """Three-colored trefoil without companions."""
    return load_scene(DATA_DIR / "trefoil.scene.json")


@pytest.fixture
def hopf_scene():
    """Positive Hopf link; alpha has a single arc."""
    return load_scene(DATA_DIR / "hopf.scene.json")


@pytest.fixture
def meridian_scene():
    """Trefoil with a meridian companion around the arc colored 3."""
    return parse_scene(json.dumps(TREFOIL_WITH_MERIDIAN))


@pytest.fixture
def loops_scene():
    """Trefoil with two crossing-free companions."""
    return parse_scene(json.dumps(TREFOIL_WITH_LOOPS))


@pytest.fixture
def meridian_document() -> Dict[str, Any]:
    """Fresh copy of the trefoil-with-meridian scene document."""
    return json.loads(json.dumps(TREFOIL_WITH_MERIDIAN))


@pytest.fixture
def scene_text():
    """Factory returning scene JSON text from a dict, with optional edits."""

    def _make(base: Dict[str, Any], **changes: Any) -> str:
        doc = json.loads(json.dumps(base))
        doc.update(changes)
        return json.dumps(doc)

    return _make


@pytest.fixture
def config_file(tmp_path):
    """Write a YAML settings file and return its path."""
    import yaml

    def _write(**values: Any) -> Path:
        data = TEST_CONFIG.copy()
        data.update(values)
        path = tmp_path / "dihedral-xi.yaml"
        path.write_text(yaml.safe_dump(data))
        return path

    return _write


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "unit: marks tests as unit tests")
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "property: marks randomized property tests")
    config.addinivalue_line("markers", "slow: marks tests as slow running")
