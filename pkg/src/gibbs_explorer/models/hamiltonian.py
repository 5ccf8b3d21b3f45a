"""Hamiltonian H(mu, psi) = -log kappa_m(x_1, ..., x_m, psi)"""

import math

from gibbs_explorer.core.counting import CountingMeasure

from .papangelou import PapangelouModel


def hamiltonian(model: PapangelouModel, mu: CountingMeasure, psi: CountingMeasure) -> float:
    """Energy of mu against psi; 0 for the empty configuration, +inf when kappa_m vanishes"""
    if len(mu) == 0:
        return 0.0
    return 0.0 - model.log_kappa_m(mu.points, psi)


def boltzmann_weight(model: PapangelouModel, mu: CountingMeasure, psi: CountingMeasure) -> float:
    """exp(-H(mu, psi))"""
    energy = hamiltonian(model, mu, psi)
    return 0.0 if energy == math.inf else math.exp(-energy)
