"""
Gibbs Explorer - finite-volume Gibbs point process simulation

Papangelou-intensity models, exact and MCMC samplers, partition functions,
Janossy and factorial-moment estimators, and statistical checks of the
GNZ and DLR identities, driven by a single YAML configuration.
"""

__version__ = "0.1.0"
__author__ = "Gibbs Explorer Team"

from .main import main

__all__ = ["main"]
