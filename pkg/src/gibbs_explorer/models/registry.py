"""Construct models from validated configuration mappings"""

from typing import Any, Dict, Optional

from gibbs_explorer.core.reference import intensity_from_config
from gibbs_explorer.geometry.grains import GrainLaw
from gibbs_explorer.geometry.interaction import OverlapFunctional

from .pair_potentials import potential_from_config
from .papangelou import (
    ClusterParticleModel,
    HardSphereModel,
    PairPotentialModel,
    PapangelouModel,
    PoissonModel,
    StraussModel,
)


def build_model(section: Dict[str, Any], dim: int, grain: Optional[Dict[str, Any]] = None) -> PapangelouModel:
    """Model for a `model:` section; the `grain:` section feeds particle models"""
    variant = section.get("variant")
    theta = intensity_from_config(section.get("theta", 1.0))
    if variant == "poisson":
        return PoissonModel(theta)
    if variant == "strauss":
        return StraussModel(theta, float(section["c"]), float(section["R"]))
    if variant == "hard_sphere":
        return HardSphereModel(theta, float(section["R"]))
    if variant == "pair_potential":
        return PairPotentialModel(theta, potential_from_config(section["potential"]))
    if variant == "cluster_particle":
        law = GrainLaw.from_config(grain or {}, dim)
        return ClusterParticleModel(theta, float(section.get("beta", 1.0)),
                                    OverlapFunctional.parse(section.get("overlap_c", 1.0)), law)
    raise ValueError(f"unknown model variant '{variant}'")
