"""
Isotropic pair potentials v(x, y) = phi(|x - y|)

Values may be +inf (hard exclusion). Each potential exposes the constant A
of its lower bound v >= -A and its interaction range.
"""

import math
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

import numpy as np


class PairPotential(ABC):
    family = "pair"

    @abstractmethod
    def energy(self, r: np.ndarray) -> np.ndarray:
        """phi at distances r (array), values in R u {+inf}"""

    @property
    @abstractmethod
    def lower_bound(self) -> float:
        """A >= 0 with v >= -A everywhere"""

    @property
    @abstractmethod
    def range(self) -> float:
        """Distance beyond which phi vanishes (inf if unbounded)"""

    @property
    def is_repulsive(self) -> bool:
        return self.lower_bound == 0

    def __call__(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(self.energy(np.atleast_1d(np.linalg.norm(np.asarray(x) - np.asarray(y))))[0])

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        ...


class HardCorePotential(PairPotential):
    """+inf within distance R (closed), 0 beyond"""

    family = "hard_core"

    def __init__(self, R: float):
        if not R > 0:
            raise ValueError(f"hard core radius must be positive, got {R}")
        self.R = float(R)

    def energy(self, r: np.ndarray) -> np.ndarray:
        return np.where(np.asarray(r) <= self.R, np.inf, 0.0)

    @property
    def lower_bound(self) -> float:
        return 0.0

    @property
    def range(self) -> float:
        return self.R

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "R": self.R}


class StepPotential(PairPotential):
    """gamma within distance R (closed), 0 beyond; gamma = -log c reproduces Strauss(c)"""

    family = "step"

    def __init__(self, gamma: float, R: float):
        if not R > 0:
            raise ValueError(f"step radius must be positive, got {R}")
        if math.isnan(gamma) or gamma == -math.inf:
            raise ValueError(f"step height must be a real number or +inf, got {gamma}")
        self.gamma = float(gamma)
        self.R = float(R)

    def energy(self, r: np.ndarray) -> np.ndarray:
        return np.where(np.asarray(r) <= self.R, self.gamma, 0.0)

    @property
    def lower_bound(self) -> float:
        return max(0.0, -self.gamma)

    @property
    def range(self) -> float:
        return self.R

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "gamma": self.gamma, "R": self.R}


class InversePowerPotential(PairPotential):
    """(sigma / r)^exponent, truncated to 0 at r >= cutoff when a cutoff is given"""

    family = "inverse_power"

    def __init__(self, sigma: float, exponent: float, cutoff: Optional[float] = None):
        if not sigma > 0 or not exponent > 0:
            raise ValueError(f"inverse power potential needs sigma > 0 and exponent > 0, got {sigma}, {exponent}")
        if cutoff is not None and not cutoff > 0:
            raise ValueError(f"cutoff must be positive, got {cutoff}")
        self.sigma = float(sigma)
        self.exponent = float(exponent)
        self.cutoff = None if cutoff is None else float(cutoff)

    def energy(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            values = np.where(r > 0, (self.sigma / np.where(r > 0, r, 1.0)) ** self.exponent, np.inf)
        if self.cutoff is not None:
            values = np.where(r < self.cutoff, values, 0.0)
        return values

    @property
    def lower_bound(self) -> float:
        return 0.0

    @property
    def range(self) -> float:
        return math.inf if self.cutoff is None else self.cutoff

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "sigma": self.sigma, "exponent": self.exponent, "cutoff": self.cutoff}


def potential_from_config(section: Dict[str, Any]) -> PairPotential:
    family = section.get("family")
    if family == "hard_core":
        return HardCorePotential(section["R"])
    if family == "step":
        return StepPotential(section["gamma"], section["R"])
    if family == "inverse_power":
        return InversePowerPotential(section["sigma"], section["exponent"], section.get("cutoff"))
    raise ValueError(f"unknown pair potential family '{family}'")
