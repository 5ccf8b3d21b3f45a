"""
Pairwise overlap interaction of Gibbs particle processes
"""

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .particles import Particle, intersects


@dataclass(frozen=True)
class OverlapFunctional:
    """V(K) = c * 1{K nonempty}, c in [0, inf]; c = inf gives hard particles"""

    c: float

    def __post_init__(self):
        if math.isnan(self.c) or self.c < 0:
            raise ValueError(f"overlap constant must lie in [0, inf], got {self.c}")

    @property
    def is_hard(self) -> bool:
        return math.isinf(self.c)

    @classmethod
    def parse(cls, value: Union[float, str]) -> "OverlapFunctional":
        if isinstance(value, str):
            if value.strip().lower() in ("inf", "infinity"):
                return cls(math.inf)
            raise ValueError(f"overlap constant must be a number or 'inf', got {value!r}")
        return cls(float(value))


def count_overlaps(particle: Particle, particles: Sequence[Particle]) -> int:
    return sum(1 for other in particles if intersects(particle, other))


def gibbs_particle_kappa(beta: float, functional: OverlapFunctional, particle: Particle,
                         particles: Sequence[Particle]) -> float:
    """
    exp(-beta * c * #{L in mu : K meets L})

    With c = inf any overlap gives 0 regardless of beta.
    """
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    overlaps = count_overlaps(particle, particles)
    if overlaps == 0:
        return 1.0
    if functional.is_hard:
        return 0.0
    return math.exp(-beta * functional.c * overlaps)
