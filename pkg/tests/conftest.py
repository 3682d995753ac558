"""Shared fixtures: the bundled material and the simulator instances."""

from importlib import resources

import pytest

from pwqpe.crystal import parse_material
from pwqpe.statesim import reference_instances


@pytest.fixture(scope="session")
def li_material():
    document = resources.files("pwqpe").joinpath("data/li2fesio4.json").read_text()
    return parse_material(document)


@pytest.fixture(scope="session")
def instances():
    return reference_instances()


@pytest.fixture(scope="session")
def instances_by_label(instances):
    return {inst["label"]: inst for inst in instances}
