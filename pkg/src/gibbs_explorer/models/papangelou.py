"""
Papangelou conditional intensities

Every model maps (x, mu) to kappa(x, mu) >= 0 and knows its activity, its
local-stability bound theta (None when no bound is available) and its
interaction range. kappa_m is the telescoping product
kappa(x_m, mu) * kappa(x_{m-1}, mu + d_{x_m}) * ... evaluated in log space.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist, pdist

from gibbs_explorer.core.counting import CountingMeasure, Point
from gibbs_explorer.core.reference import ConstantIntensity, Intensity
from gibbs_explorer.core.window import Window
from gibbs_explorer.geometry.clusters import cluster
from gibbs_explorer.geometry.grains import GrainLaw
from gibbs_explorer.geometry.interaction import OverlapFunctional, gibbs_particle_kappa
from gibbs_explorer.geometry.particles import Particle

from .pair_potentials import PairPotential


def _as_intensity(theta: Union[Intensity, float]) -> Intensity:
    return theta if isinstance(theta, Intensity) else ConstantIntensity(float(theta))


class PapangelouModel(ABC):
    """Base class of all conditional-intensity variants"""

    name = "model"
    marked = False

    def __init__(self, activity: Union[Intensity, float]):
        self.activity = _as_intensity(activity)

    @abstractmethod
    def kappa(self, x: Point, mu: CountingMeasure) -> float:
        """kappa(x, mu)"""

    @property
    def theta(self) -> Optional[Intensity]:
        """Local-stability bound, kappa(x, mu) <= theta(x) for all mu"""
        return self.activity

    @property
    def is_locally_stable(self) -> bool:
        return self.theta is not None

    @property
    def interaction_range(self) -> float:
        return math.inf

    def local_stability_bound(self, x: Point) -> Optional[float]:
        return None if self.theta is None else self.theta(x.coords)

    def log_kappa_m(self, xs: Sequence[Point], mu: CountingMeasure) -> float:
        """log kappa_m(x_1, ..., x_m, mu); -inf when a factor vanishes"""
        if not xs:
            raise ValueError("kappa_m needs at least one point")
        logs = []
        current = mu
        for x in reversed(xs):
            value = self.kappa(x, current)
            if value <= 0:
                return -math.inf
            logs.append(math.log(value))
            current = current.add(x)
        return math.fsum(logs)

    def kappa_m(self, xs: Sequence[Point], mu: CountingMeasure) -> float:
        log_value = self.log_kappa_m(xs, mu)
        return 0.0 if log_value == -math.inf else math.exp(log_value)

    def parameters(self) -> Dict[str, Any]:
        return {}

    def to_dict(self) -> Dict[str, Any]:
        return {"variant": self.name, "activity": self.activity.to_dict(), **self.parameters()}

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.parameters().items())
        return f"{type(self).__name__}({params})" if params else f"{type(self).__name__}()"


class PoissonModel(PapangelouModel):
    """kappa(x, mu) = theta(x)"""

    name = "poisson"

    @property
    def interaction_range(self) -> float:
        return 0.0

    def kappa(self, x: Point, mu: CountingMeasure) -> float:
        return self.activity(x.coords)

    def log_kappa_m(self, xs: Sequence[Point], mu: CountingMeasure) -> float:
        if not xs:
            raise ValueError("kappa_m needs at least one point")
        values = self.activity.evaluate(np.array([x.coords for x in xs]))
        if np.any(values <= 0):
            return -math.inf
        return math.fsum(np.log(values))


class PairwiseModel(PapangelouModel):
    """kappa(x, mu) = theta(x) exp(-sum_y phi(|x - y|)), 0 when a summand is +inf"""

    @abstractmethod
    def pair_energy(self, r: np.ndarray) -> np.ndarray:
        ...

    def kappa(self, x: Point, mu: CountingMeasure) -> float:
        base = self.activity(x.coords)
        if base == 0 or len(mu) == 0:
            return base
        energies = self.pair_energy(mu.distances_to(x.coords))
        if np.any(np.isposinf(energies)):
            return 0.0
        return base * math.exp(-math.fsum(energies))

    def log_kappa_m(self, xs: Sequence[Point], mu: CountingMeasure) -> float:
        if not xs:
            raise ValueError("kappa_m needs at least one point")
        coords = np.array([x.coords for x in xs])
        base = self.activity.evaluate(coords)
        if np.any(base <= 0):
            return -math.inf
        energies = [self.pair_energy(pdist(coords))] if len(xs) > 1 else []
        if len(mu):
            energies.append(self.pair_energy(cdist(coords, mu.coords).ravel()))
        flat = np.concatenate(energies) if energies else np.empty(0)
        if np.any(np.isposinf(flat)):
            return -math.inf
        return math.fsum(np.log(base)) - math.fsum(flat)


class StraussModel(PairwiseModel):
    """kappa(x, mu) = theta(x) * c^{mu(B(x, R))}, closed ball"""

    name = "strauss"

    def __init__(self, theta: Union[Intensity, float], c: float, R: float):
        super().__init__(theta)
        if not 0.0 <= c <= 1.0:
            raise ValueError(f"Strauss interaction parameter c must lie in [0, 1], got {c}")
        if not R > 0:
            raise ValueError(f"interaction radius R must be positive, got {R}")
        self.c = float(c)
        self.R = float(R)

    @property
    def interaction_range(self) -> float:
        return self.R

    def pair_energy(self, r: np.ndarray) -> np.ndarray:
        step = -math.log(self.c) if self.c > 0 else math.inf
        return np.where(np.asarray(r) <= self.R, step, 0.0)

    def kappa(self, x: Point, mu: CountingMeasure) -> float:
        base = self.activity(x.coords)
        if base == 0 or len(mu) == 0:
            return base
        neighbours = int(np.count_nonzero(mu.distances_to(x.coords) <= self.R))
        return base * self.c ** neighbours

    def parameters(self) -> Dict[str, Any]:
        return {"c": self.c, "R": self.R}


class HardSphereModel(StraussModel):
    """Strauss with c = 0"""

    name = "hard_sphere"

    def __init__(self, theta: Union[Intensity, float], R: float):
        super().__init__(theta, 0.0, R)

    def parameters(self) -> Dict[str, Any]:
        return {"R": self.R}


class PairPotentialModel(PairwiseModel):
    """
    Gibbs model of a pair potential with activity theta

    Locally stable with bound theta when the potential is nonnegative;
    attractive potentials carry no bound.
    """

    name = "pair_potential"

    def __init__(self, theta: Union[Intensity, float], potential: PairPotential):
        super().__init__(theta)
        self.potential = potential

    @property
    def theta(self) -> Optional[Intensity]:
        return self.activity if self.potential.is_repulsive else None

    @property
    def interaction_range(self) -> float:
        return self.potential.range

    def pair_energy(self, r: np.ndarray) -> np.ndarray:
        return self.potential.energy(r)

    def parameters(self) -> Dict[str, Any]:
        return {"potential": self.potential.to_dict()}


class ClusterParticleModel(PapangelouModel):
    """
    Gibbs particle process with pairwise overlap interaction

    Points carry marks that decode to grains through the grain law;
    kappa(x, mu) = theta(x) exp(-beta c #overlaps) is evaluated on the cluster
    of the new particle only, so it depends on mu through C(x, mu).
    """

    name = "cluster_particle"
    marked = True

    def __init__(self, theta: Union[Intensity, float], beta: float, overlap: OverlapFunctional,
                 grain_law: GrainLaw):
        super().__init__(theta)
        if not beta >= 0:
            raise ValueError(f"beta must be nonnegative, got {beta}")
        self.beta = float(beta)
        self.overlap = overlap
        self.grain_law = grain_law

    def particle(self, x: Point) -> Particle:
        if x.mark is None:
            raise ValueError("particle models need marked points")
        return self.grain_law.decode(x.coords, x.mark)

    def particles(self, mu: CountingMeasure) -> List[Particle]:
        return [self.particle(p) for p in mu.points]

    def kappa(self, x: Point, mu: CountingMeasure) -> float:
        base = self.activity(x.coords)
        if base == 0:
            return 0.0
        grain = self.particle(x)
        return base * gibbs_particle_kappa(self.beta, self.overlap, grain, cluster(grain, self.particles(mu)))

    def parameters(self) -> Dict[str, Any]:
        return {"beta": self.beta, "overlap_c": self.overlap.c, "grain": self.grain_law.to_dict()}


@dataclass(frozen=True)
class BoundaryCondition:
    """Configuration psi outside the active window"""

    psi: CountingMeasure
    window: Window

    def __post_init__(self):
        if self.psi.dim != self.window.dim:
            raise ValueError(f"boundary has d={self.psi.dim}, window has d={self.window.dim}")
        inside = self.psi.total(self.window)
        if inside:
            raise ValueError(f"boundary condition has {inside} point(s) inside the active window {self.window}")

    @classmethod
    def empty(cls, window: Window) -> "BoundaryCondition":
        return cls(CountingMeasure.empty(window.dim), window)


class RestrictedModel(PapangelouModel):
    """kappa^{(C, psi)}(x, mu) = kappa(x, psi + mu) 1_C(x)"""

    def __init__(self, base: PapangelouModel, boundary: BoundaryCondition):
        self.base = base
        self.boundary = boundary
        self.activity = base.activity
        self.marked = base.marked

    @property
    def name(self) -> str:
        return f"{self.base.name}|restricted"

    @property
    def window(self) -> Window:
        return self.boundary.window

    @property
    def psi(self) -> CountingMeasure:
        return self.boundary.psi

    @property
    def theta(self) -> Optional[Intensity]:
        return self.base.theta

    @property
    def interaction_range(self) -> float:
        return self.base.interaction_range

    def kappa(self, x: Point, mu: CountingMeasure) -> float:
        if not self.window.contains_point(x.coords):
            return 0.0
        return self.base.kappa(x, self.psi + mu)

    def log_kappa_m(self, xs: Sequence[Point], mu: CountingMeasure) -> float:
        if not xs:
            raise ValueError("kappa_m needs at least one point")
        if not all(self.window.contains_point(x.coords) for x in xs):
            return -math.inf
        return self.base.log_kappa_m(xs, self.psi + mu)

    def to_dict(self) -> Dict[str, Any]:
        return {**self.base.to_dict(), "window": self.window.to_dict(), "boundary_points": len(self.psi)}


def restricted_model(model: PapangelouModel, window: Window,
                     psi: Union[BoundaryCondition, CountingMeasure, None] = None) -> RestrictedModel:
    if psi is None:
        boundary = BoundaryCondition.empty(window)
    elif isinstance(psi, BoundaryCondition):
        boundary = psi if psi.window == window else BoundaryCondition(psi.psi, window)
    else:
        boundary = BoundaryCondition(psi, window)
    return RestrictedModel(model, boundary)
