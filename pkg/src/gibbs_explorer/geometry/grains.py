"""
Grain distributions

A grain is drawn from a single uniform mark in [0, 1]: the mark's binary
expansion is de-interleaved into one uniform per random ingredient (radius,
then orientation angles), so marked point configurations carry their
particles losslessly up to float resolution.
"""

import math
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from scipy import stats

from gibbs_explorer.core.errors import GeometryError

from .particles import Ball, Particle, Segment

MARK_BITS = 52
HALO_QUANTILE = 0.9999


def split_mark(mark: float, parts: int) -> List[float]:
    """De-interleave the bits of a uniform mark into `parts` uniforms"""
    if parts == 1:
        return [float(mark)]
    word = min(int(float(mark) * 2 ** MARK_BITS), 2 ** MARK_BITS - 1)
    values = [0] * parts
    widths = [0] * parts
    for bit in range(MARK_BITS):
        part = bit % parts
        values[part] = (values[part] << 1) | ((word >> (MARK_BITS - 1 - bit)) & 1)
        widths[part] += 1
    return [(v + 0.5) / 2 ** w for v, w in zip(values, widths)]


class RadiusLaw:
    """Named distribution of grain radii on (0, inf)"""

    FAMILIES = ("constant", "uniform", "pareto")

    def __init__(self, family: str, **params: float):
        if family not in self.FAMILIES:
            raise ValueError(f"unknown radius law '{family}', expected one of {', '.join(self.FAMILIES)}")
        self.family = family
        self.params = {k: float(v) for k, v in params.items()}
        self._dist = None
        if family == "constant":
            if not self.params.get("radius", 0) > 0:
                raise ValueError("constant radius law needs radius > 0")
        elif family == "uniform":
            low, high = self.params.get("low", 0.0), self.params.get("high", 0.0)
            if not 0 < low < high:
                raise ValueError(f"uniform radius law needs 0 < low < high, got [{low}, {high}]")
            self._dist = stats.uniform(loc=low, scale=high - low)
        else:
            scale, exponent = self.params.get("scale", 0.0), self.params.get("exponent", 0.0)
            if not scale > 0 or not exponent > 0:
                raise ValueError("pareto radius law needs scale > 0 and exponent > 0")
            self._dist = stats.pareto(b=exponent, scale=scale)

    def ppf(self, u: float) -> float:
        if self._dist is None:
            return self.params["radius"]
        return float(self._dist.ppf(u))

    def cdf(self, r):
        if self._dist is None:
            return np.where(np.asarray(r) >= self.params["radius"], 1.0, 0.0)
        return self._dist.cdf(r)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.array([self.ppf(u) for u in rng.uniform(size=size)])

    def has_finite_moment(self, order: int) -> bool:
        """E[R^order] < inf, decided analytically per family"""
        if self.family == "pareto":
            return self.params["exponent"] > order
        return True

    def moment(self, order: int) -> float:
        if self._dist is None:
            return self.params["radius"] ** order
        if not self.has_finite_moment(order):
            return math.inf
        return float(self._dist.moment(order))

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, **self.params}

    @classmethod
    def from_config(cls, section: Dict[str, Any]) -> "RadiusLaw":
        params = {k: v for k, v in section.items() if k != "family"}
        return cls(section.get("family", "constant"), **params)


class GrainLaw:
    """
    The grain distribution Q: a shape, a radius law and an orientation law

    Segment grains use the radius as half length. The radius law must have a
    finite d-th moment.
    """

    def __init__(self, dim: int, radius_law: RadiusLaw, shape: str = "ball",
                 orientation: Union[str, Sequence[float]] = "uniform"):
        if shape not in ("ball", "segment"):
            raise ValueError(f"grain shape must be ball or segment, got {shape!r}")
        if not radius_law.has_finite_moment(dim):
            raise ValueError(f"radius law {radius_law.to_dict()} has no finite moment of order d={dim}")
        self.dim = int(dim)
        self.radius_law = radius_law
        self.shape = shape
        self.fixed_direction: Optional[np.ndarray] = None
        if orientation != "uniform":
            direction = np.asarray(orientation, dtype=float)
            if direction.shape != (dim,) or not np.linalg.norm(direction) > 0:
                raise ValueError(f"fixed orientation must be a nonzero vector of length {dim}")
            self.fixed_direction = direction / np.linalg.norm(direction)

    @property
    def mark_parts(self) -> int:
        """Number of uniforms a grain consumes"""
        if self.shape == "ball" or self.fixed_direction is not None:
            return 1
        return 1 + (2 if self.dim == 3 else 1)

    def _direction(self, uniforms: Sequence[float]) -> np.ndarray:
        if self.fixed_direction is not None:
            return self.fixed_direction
        if self.dim == 1:
            return np.array([1.0 if uniforms[0] < 0.5 else -1.0])
        if self.dim == 2:
            angle = 2.0 * math.pi * uniforms[0]
            return np.array([math.cos(angle), math.sin(angle)])
        z = 2.0 * uniforms[0] - 1.0
        phi = 2.0 * math.pi * uniforms[1]
        rho = math.sqrt(max(0.0, 1.0 - z * z))
        return np.array([rho * math.cos(phi), rho * math.sin(phi), z])

    def decode(self, center: Sequence[float], mark: float) -> Particle:
        """Particle with germ `center` and the grain encoded by `mark`"""
        uniforms = split_mark(mark, self.mark_parts)
        radius = self.radius_law.ppf(uniforms[0])
        if self.shape == "ball":
            return Ball(tuple(center), radius)
        direction = self._direction(uniforms[1:])
        return Segment(tuple(center), tuple(direction / np.linalg.norm(direction)), radius)

    def sample(self, center: Sequence[float], rng: np.random.Generator) -> Particle:
        return self.decode(center, float(rng.uniform()))

    def halo(self, test_radius: float = 0.0) -> float:
        """High quantile of grain reach plus a test particle's reach"""
        reach = self.radius_law.ppf(HALO_QUANTILE)
        if not math.isfinite(reach):
            raise GeometryError(f"radius law {self.radius_law.to_dict()} has no finite halo quantile")
        return reach + test_radius

    def to_dict(self) -> Dict[str, Any]:
        orientation = "uniform" if self.fixed_direction is None else self.fixed_direction.tolist()
        return {"shape": self.shape, "radius_law": self.radius_law.to_dict(), "orientation": orientation}

    @classmethod
    def from_config(cls, section: Dict[str, Any], dim: int) -> "GrainLaw":
        return cls(
            dim,
            RadiusLaw.from_config(section.get("radius_law", {"family": "constant", "radius": 0.5})),
            section.get("shape", "ball"),
            section.get("orientation", "uniform"),
        )
