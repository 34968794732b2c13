"""File formats accepted by the CLI.

    measure:    {"space": [labels], "weights": [numbers]}
    system:     {"space": [labels], "map": [0-based indices], "weights": [numbers], "phi": [numbers]?}
    potential:  {"space": [labels]?, "phi": [numbers]}
"""

import math
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

Label = Union[str, int]


def _finite(values):
    if not all(math.isfinite(value) for value in values):
        raise ValueError("values must be finite numbers")
    return values


def _unique(labels):
    if not labels:
        raise ValueError("space must contain at least one atom")
    if len(set(labels)) != len(labels):
        raise ValueError("space labels must be unique")
    return labels


class MeasureFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    space: List[Label]
    weights: List[float]

    @field_validator("space")
    @classmethod
    def check_space(cls, value):
        return _unique(value)

    @field_validator("weights")
    @classmethod
    def check_weights(cls, value):
        return _finite(value)

    @model_validator(mode="after")
    def check_lengths(self):
        if len(self.weights) != len(self.space):
            raise ValueError(f"{len(self.weights)} weights for {len(self.space)} atoms")
        return self


class SystemFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    space: List[Label]
    map: List[int]
    weights: List[float]
    phi: Optional[List[float]] = None

    @field_validator("space")
    @classmethod
    def check_space(cls, value):
        return _unique(value)

    @field_validator("weights", "phi")
    @classmethod
    def check_values(cls, value):
        return value if value is None else _finite(value)

    @model_validator(mode="after")
    def check_lengths(self):
        n = len(self.space)
        for name in ("map", "weights", "phi"):
            values = getattr(self, name)
            if values is not None and len(values) != n:
                raise ValueError(f"{name} has {len(values)} entries for {n} atoms")
        if any(index < 0 or index >= n for index in self.map):
            raise ValueError("map entries must be 0-based atom indices")
        if any(weight < 0.0 for weight in self.weights):
            raise ValueError("weights must be nonnegative")
        return self


class PotentialFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    space: Optional[List[Label]] = None
    phi: List[float]

    @field_validator("phi")
    @classmethod
    def check_phi(cls, value):
        return _finite(value)

    @model_validator(mode="after")
    def check_lengths(self):
        if self.space is not None and len(self.space) != len(self.phi):
            raise ValueError(f"{len(self.phi)} values for {len(self.space)} atoms")
        return self
