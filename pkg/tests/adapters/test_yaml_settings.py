"""Tests for the YAML defaults."""
import copy

import pydantic
import pytest

import cevian.adapters.yaml_settings as yaml_settings


@pytest.fixture
def resource_file() -> str:
    """The resource file used on those tests."""
    return yaml_settings.DEFAULTS_FILE


def test_load_yaml_resource(resource_file):
    """Ensure we can access to data embedded in the package."""
    data = yaml_settings.load_yaml_resource(resource_file)
    assert data
    assert isinstance(data, dict)
    assert set(data) == {"constants", "optimize", "verify"}


def test_load_defaults(resource_file):
    defaults = yaml_settings.load_defaults(resource_file)
    assert defaults.constants.depth == 40
    assert defaults.optimize.restarts == 16
    assert defaults.optimize.tol == 1e-10
    assert defaults.verify.trials == 100_000
    assert defaults.verify.seed == 42
    assert defaults.verify.tol == 1e-9


def test_unknown_keys_are_rejected(resource_file):
    data = copy.deepcopy(yaml_settings.load_yaml_resource(resource_file))
    data["verify"]["trails"] = 10
    with pytest.raises(pydantic.ValidationError):
        yaml_settings.Defaults(**data)


def test_ranges_are_checked(resource_file):
    data = copy.deepcopy(yaml_settings.load_yaml_resource(resource_file))
    data["optimize"]["workers"] = 0
    with pytest.raises(pydantic.ValidationError):
        yaml_settings.Defaults(**data)
