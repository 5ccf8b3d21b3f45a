"""Poisson and finite-volume Gibbs samplers"""

from .gibbs import (
    BirthDeathChain,
    RejectionResult,
    SampleBatch,
    default_burn_in,
    mcmc_chain,
    proposal_measure,
    sample_batch,
    sample_gibbs_mcmc,
    sample_gibbs_rejection,
)
from .poisson import randomize, sample_poisson

__all__ = [
    "sample_poisson", "randomize",
    "sample_gibbs_rejection", "sample_gibbs_mcmc", "mcmc_chain", "sample_batch",
    "SampleBatch", "RejectionResult", "BirthDeathChain", "default_burn_in", "proposal_measure",
]
