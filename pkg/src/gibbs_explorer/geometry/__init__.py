"""Particles, grain laws, clusters and Boolean-model probes"""

from .boolean import ReachRow, reaches_boundary, sample_boolean, subcriticality_probe
from .clusters import DisjointSet, cluster, component_statistics, components
from .grains import GrainLaw, RadiusLaw, split_mark
from .interaction import OverlapFunctional, gibbs_particle_kappa
from .particles import Ball, Particle, Segment, distance, intersects

__all__ = [
    "Ball", "Segment", "Particle", "intersects", "distance",
    "GrainLaw", "RadiusLaw", "split_mark",
    "cluster", "components", "component_statistics", "DisjointSet",
    "OverlapFunctional", "gibbs_particle_kappa",
    "sample_boolean", "subcriticality_probe", "reaches_boundary", "ReachRow",
]
