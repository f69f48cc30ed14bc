"""
Unit tests for runtime settings
"""
import pytest

from dihedral_xi.config import XiSettings
from dihedral_xi.errors import XiError


@pytest.mark.unit
class TestSettings:
    """Test settings loading and validation."""

    def test_defaults(self):
        """Defaults describe the p = 3 engine."""
        settings = XiSettings()
        assert settings.p == 3
        assert settings.provider == "computed"
        assert settings.max_workers == 1

    def test_yaml_file(self, config_file):
        """Values come from the YAML file."""
        settings = XiSettings.from_yaml(config_file(max_workers=4, log_level="debug"))
        assert settings.max_workers == 4
        assert settings.log_level == "DEBUG"

    def test_overrides_win(self, config_file):
        """Explicit overrides beat the file; None overrides are ignored."""
        path = config_file(provider="table:data/8_11.blocks.json")
        settings = XiSettings.from_yaml(path, provider="computed", log_level=None)
        assert settings.provider == "computed"
        assert settings.log_level == "WARNING"

    def test_environment(self, tmp_path, monkeypatch):
        """DIHEDRAL_XI_* variables fill values the file leaves out."""
        path = tmp_path / "partial.yaml"
        path.write_text("p: 3\n")
        monkeypatch.setenv("DIHEDRAL_XI_SIGN_DIGITS", "50")
        assert XiSettings.from_yaml(path).sign_digits == 50

    def test_missing_explicit_file(self, tmp_path):
        """An explicitly named file must exist."""
        with pytest.raises(XiError, match="not found"):
            XiSettings.from_yaml(tmp_path / "missing.yaml")

    def test_non_mapping_file(self, tmp_path):
        """The file must hold a mapping."""
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(XiError, match="mapping"):
            XiSettings.from_yaml(path)

    @pytest.mark.parametrize("field,value", [
        ("p", 4),
        ("p", 1),
        ("log_level", "chatty"),
        ("max_workers", 0),
        ("sign_digits", -1),
    ])
    def test_invalid_values(self, config_file, field, value):
        """Bad values are configuration errors."""
        with pytest.raises(XiError, match="invalid configuration"):
            XiSettings.from_yaml(config_file(**{field: value}))
