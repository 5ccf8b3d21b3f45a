"""
Boolean model sampling and the boundary-reach subcriticality probe
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence

import numpy as np

from gibbs_explorer.core.estimate import Estimate
from gibbs_explorer.core.seeding import RandomStreams
from gibbs_explorer.core.window import Window

from .clusters import cluster
from .grains import GrainLaw
from .particles import Ball, Particle

logger = logging.getLogger(__name__)


def sampling_region(window: Window, law: GrainLaw, test_radius: float = 0.0) -> Window:
    """The window enlarged by the grain halo"""
    return window.expand(law.halo(test_radius))


def sample_boolean(z: float, law: GrainLaw, window: Window, rng: np.random.Generator,
                   test_radius: float = 0.0) -> List[Particle]:
    """
    Poisson germs of intensity z on the halo-enlarged window, each carrying
    an independent grain from the law
    """
    if not z > 0:
        raise ValueError(f"Boolean model intensity must be positive, got {z}")
    region = sampling_region(window, law, test_radius)
    count = rng.poisson(z * region.volume)
    centers = region.sample_uniform(rng, count)
    marks = rng.uniform(size=count)
    return [law.decode(c, m) for c, m in zip(centers, marks)]


def reaches_boundary(test: Particle, particles: Sequence[Particle], window: Window) -> bool:
    """Some particle of the test particle's cluster leaves the window interior"""
    if not test.inside(window):
        return True
    return any(not p.inside(window) for p in cluster(test, particles))


@dataclass(frozen=True)
class ReachRow:
    z: float
    window_scale: float
    estimate: Estimate

    def to_row(self) -> Dict[str, Any]:
        return {
            "z": self.z,
            "window_scale": self.window_scale,
            "reach_freq": self.estimate.value,
            "stderr": self.estimate.stderr,
            "n": self.estimate.n,
        }


def subcriticality_probe(z_values: Sequence[float], law: GrainLaw, window_scales: Sequence[float],
                         n: int, streams: RandomStreams, window: Window,
                         test_radius: float = 0.5) -> List[ReachRow]:
    """
    Boundary-reach frequency of a centered test ball per (z, window scale)

    All z share one Poisson draw at the largest z, thinned by uniform labels,
    so each replicate's configurations are nested and reach is monotone in z.
    """
    z_sorted = sorted(float(z) for z in z_values)
    z_max = z_sorted[-1]
    rows: List[ReachRow] = []
    for scale in window_scales:
        active = window.dilate(float(scale))
        region = sampling_region(active, law, test_radius)
        test = Ball(tuple(active.center), test_radius)

        def replicate(index: int, rng: np.random.Generator) -> List[bool]:
            count = rng.poisson(z_max * region.volume)
            centers = region.sample_uniform(rng, count)
            marks = rng.uniform(size=count)
            labels = rng.uniform(size=count)
            grains = [law.decode(c, m) for c, m in zip(centers, marks)]
            return [
                reaches_boundary(test, [g for g, v in zip(grains, labels) if v <= z / z_max], active)
                for z in z_sorted
            ]

        outcomes = np.array(streams.map_replicates(replicate, n, f"percolate/scale={float(scale)!r}"), dtype=float)
        for column, z in enumerate(z_sorted):
            estimate = Estimate.from_samples(outcomes[:, column])
            rows.append(ReachRow(z, float(scale), estimate))
            logger.debug(f"reach z={z:g} scale={scale:g}: {estimate}")
    return rows
