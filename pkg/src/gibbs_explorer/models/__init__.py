"""Papangelou intensity models, the Hamiltonian and condition checks"""

from .checks import CheckResult, random_configuration, random_point, run_model_checks
from .hamiltonian import boltzmann_weight, hamiltonian
from .pair_potentials import (
    HardCorePotential,
    InversePowerPotential,
    PairPotential,
    StepPotential,
    potential_from_config,
)
from .papangelou import (
    BoundaryCondition,
    ClusterParticleModel,
    HardSphereModel,
    PairPotentialModel,
    PapangelouModel,
    PoissonModel,
    RestrictedModel,
    StraussModel,
    restricted_model,
)
from .registry import build_model

__all__ = [
    "PapangelouModel", "PoissonModel", "StraussModel", "HardSphereModel", "PairPotentialModel",
    "ClusterParticleModel", "RestrictedModel", "BoundaryCondition", "restricted_model",
    "PairPotential", "HardCorePotential", "StepPotential", "InversePowerPotential", "potential_from_config",
    "hamiltonian", "boltzmann_weight", "build_model",
    "CheckResult", "run_model_checks", "random_configuration", "random_point",
]
