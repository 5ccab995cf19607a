"""Result record shared by the exact and Monte Carlo routes."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Method(str, enum.Enum):
    FamilyEnumeration = "FamilyEnumeration"
    MainTermFiniteQ = "MainTermFiniteQ"
    ErrorTermFiniteQ = "ErrorTermFiniteQ"
    CombinatorialLimit = "CombinatorialLimit"
    MonteCarlo = "MonteCarlo"


EXACT_METHODS = {Method.FamilyEnumeration, Method.MainTermFiniteQ, Method.ErrorTermFiniteQ, Method.CombinatorialLimit}


@dataclass(frozen=True)
class MomentEstimate:
    value: complex
    n_samples: int
    method: Method
    params: dict = field(default_factory=dict)
    stderr: float | None = None

    def __post_init__(self):
        if self.method in EXACT_METHODS and self.stderr is not None:
            raise ValueError("exact methods carry no standard error")
        if self.stderr is not None and self.stderr < 0:
            raise ValueError("stderr must be nonnegative")

    def to_dict(self) -> dict:
        v = complex(self.value)
        return {
            "value": {"re": v.real, "im": v.imag},
            "n_samples": self.n_samples,
            "method": self.method.value,
            "params": self.params,
            "stderr": self.stderr,
        }
