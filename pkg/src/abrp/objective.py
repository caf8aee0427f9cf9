"""Objective of the allocation problem under a linear satisfaction function."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SatisfactionParams",
    "aabrp_cost",
    "completion_times",
    "satisfaction",
    "sizes_of",
]


@dataclass(frozen=True)
class SatisfactionParams:
    """``S(t) = a - b t`` with route duration ``kappa * sqrt(n)``.

    ``kappa`` is ``beta * sqrt(area)`` for the tour-length estimate.
    """

    a: float = 1.0
    b: float = 0.01
    kappa: float = 1.0

    def __post_init__(self):
        if not self.b >= 0:
            raise ValueError(f"b must be >= 0, got {self.b}")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")

    @classmethod
    def from_geometry(cls, a: float, b: float, beta: float, area: float) -> "SatisfactionParams":
        return cls(a=a, b=b, kappa=beta * math.sqrt(area))


def sizes_of(alloc) -> tuple:
    """Route sizes of an allocation object or a plain sequence."""
    sizes = getattr(alloc, "sizes", alloc)
    return tuple(sizes)


def aabrp_cost(alloc) -> float:
    """``sum_i n_i * sum_{j<=i} sqrt(n_j)``, the time-weighted load."""
    total = 0.0
    prefix = 0.0
    for n in sizes_of(alloc):
        if n < 0:
            raise ValueError(f"route sizes must be nonnegative, got {n}")
        prefix += math.sqrt(n)
        total += n * prefix
    return total


def satisfaction(alloc, params: SatisfactionParams = SatisfactionParams()) -> float:
    """Total satisfaction ``a N - b kappa cost`` of an allocation."""
    sizes = sizes_of(alloc)
    n_total = math.fsum(sizes)
    return params.a * n_total - params.b * params.kappa * aabrp_cost(sizes)


def completion_times(alloc, kappa: float = 1.0) -> list[float]:
    """Completion time of every route, ``T_i = kappa * sum_{j<=i} sqrt(n_j)``."""
    if not kappa > 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    out = []
    prefix = 0.0
    for n in sizes_of(alloc):
        if n < 0:
            raise ValueError(f"route sizes must be nonnegative, got {n}")
        prefix += math.sqrt(n)
        out.append(kappa * prefix)
    return out
