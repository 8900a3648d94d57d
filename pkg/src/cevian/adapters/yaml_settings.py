"""Defaults of the command line, stored in a YAML file embedded in the package."""
from __future__ import annotations

import functools
import importlib.resources
from typing import Any

import pydantic
import yaml

DEFAULTS_FILE = "defaults.yaml"


@functools.cache
def load_yaml_resource(resource_file: str) -> dict[str, Any]:
    """Open and load a YAML resource file of ``cevian.data``."""
    text = importlib.resources.files("cevian.data").joinpath(resource_file).read_text()
    return yaml.safe_load(text)


class _Section(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True, extra="forbid")


class ConstantsDefaults(_Section):
    depth: int = pydantic.Field(ge=1)


class OptimizeDefaults(_Section):
    restarts: int = pydantic.Field(ge=1)
    tol: float = pydantic.Field(gt=0.0)
    seed: int = pydantic.Field(ge=0, lt=2**64)
    workers: int = pydantic.Field(ge=1)


class VerifyDefaults(_Section):
    trials: int = pydantic.Field(ge=1)
    seed: int = pydantic.Field(ge=0, lt=2**64)
    tol: float = pydantic.Field(gt=0.0)
    workers: int = pydantic.Field(ge=1)


class Defaults(_Section):
    """Validated content of the defaults file."""

    constants: ConstantsDefaults
    optimize: OptimizeDefaults
    verify: VerifyDefaults


def load_defaults(resource_file: str = DEFAULTS_FILE) -> Defaults:
    return Defaults(**load_yaml_resource(resource_file))
