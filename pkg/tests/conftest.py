import json
import math

import pytest

from divergences.measure import AtomSpace, FiniteMeasure
from dynsys.system import DynamicalSystem, TransferOperator


@pytest.fixture
def two_atoms():
    return AtomSpace(("a", "b"))


@pytest.fixture
def uniform_pair(two_atoms):
    """mu = (0.5, 0.5), nu = (0.25, 0.75): KL(mu || nu) = 0.143841..."""
    return FiniteMeasure(two_atoms, [0.5, 0.5]), FiniteMeasure(two_atoms, [0.25, 0.75])


@pytest.fixture
def identity_system():
    """Identity map on two atoms with weights (e, e^2)."""
    space = AtomSpace.of_size(2)
    return TransferOperator(DynamicalSystem(space, [0, 1]), [math.e, math.e**2])


@pytest.fixture
def two_cycle():
    def build(weights):
        return TransferOperator(DynamicalSystem(AtomSpace.of_size(2), [1, 0]), weights)

    return build


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document under tmp_path and return its path as a string."""

    def write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return write