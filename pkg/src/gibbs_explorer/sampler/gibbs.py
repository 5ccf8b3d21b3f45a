"""
Finite-volume Gibbs samplers

Both samplers target the finite Gibbs law with conditional intensity
kappa^{(C, psi)}: the boundary psi enters only through the restricted
model and never appears in a sample.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from gibbs_explorer.core.counting import CountingMeasure, Point
from gibbs_explorer.core.errors import NotLocallyStableError, RejectionBudgetExceeded
from gibbs_explorer.core.reference import ReferenceMeasure
from gibbs_explorer.core.seeding import RandomStreams, SeedRecord
from gibbs_explorer.core.window import Window
from gibbs_explorer.models.papangelou import BoundaryCondition, PapangelouModel, restricted_model

from .poisson import randomize, sample_poisson

logger = logging.getLogger(__name__)

Boundary = Union[BoundaryCondition, CountingMeasure, None]
METHODS = ("rejection", "mcmc")
MIN_BURN_IN = 200


@dataclass(frozen=True)
class RejectionResult:
    sample: CountingMeasure
    dominating: CountingMeasure
    attempts: int


def proposal_measure(model: PapangelouModel, ref: Optional[ReferenceMeasure] = None) -> ReferenceMeasure:
    """theta * lambda, the dominating Poisson intensity"""
    if model.theta is None:
        raise NotLocallyStableError(f"{model!r} has no local-stability bound to propose from")
    return (ref or ReferenceMeasure()).weighted(model.theta)


def sample_gibbs_rejection(model: PapangelouModel, window: Window, psi: Boundary = None,
                           rng: Optional[np.random.Generator] = None, max_attempts: int = 100000,
                           ref: Optional[ReferenceMeasure] = None) -> RejectionResult:
    """
    Exact sampler: propose Phi ~ Poisson(theta lambda on C) and accept with
    probability kappa_m(x_1, ..., x_m, psi) / prod theta(x_i)

    One proposal and one uniform are consumed per attempt whatever the
    outcome, so two calls sharing a generator see the same proposals.
    """
    rng = rng if rng is not None else np.random.default_rng()
    restricted = restricted_model(model, window, psi)
    proposal = proposal_measure(model, ref)
    empty = CountingMeasure.empty(window.dim)
    ratio_sum = 0.0
    for attempt in range(1, max_attempts + 1):
        phi = sample_poisson(proposal, window, rng)
        if model.marked:
            phi = randomize(phi, rng)
        u = rng.uniform()
        if len(phi) == 0:
            log_ratio = 0.0
        else:
            bounds = model.theta.evaluate(phi.coords)
            log_ratio = -math.inf if np.any(bounds <= 0) else (
                restricted.log_kappa_m(phi.points, empty) - math.fsum(np.log(bounds))
            )
        ratio = math.exp(min(0.0, log_ratio))
        ratio_sum += ratio
        if u < ratio:
            return RejectionResult(phi, phi, attempt)
    raise RejectionBudgetExceeded(max_attempts, ratio_sum / max_attempts)


class BirthDeathChain:
    """
    Birth-death Metropolis-Hastings chain for kappa^{(C, psi)}

    Births are proposed at x ~ lambda_C / lambda(C) and accepted with
    min(1, kappa(x, mu) lambda(C) / (n + 1)); deaths remove a uniform point
    with min(1, n / (lambda(C) kappa(x, mu - d_x))).
    """

    def __init__(self, model: PapangelouModel, window: Window, psi: Boundary = None,
                 rng: Optional[np.random.Generator] = None, ref: Optional[ReferenceMeasure] = None,
                 initial: Optional[CountingMeasure] = None):
        self.model = restricted_model(model, window, psi)
        self.window = window
        self.ref = ref or ReferenceMeasure()
        self.rng = rng if rng is not None else np.random.default_rng()
        self.mass = self.ref.mass(window)
        self.state = initial if initial is not None else CountingMeasure.empty(window.dim)
        self.births = 0
        self.deaths = 0

    def _propose_point(self) -> Point:
        coords = tuple(self.ref.sample_locations(self.window, self.rng, 1)[0])
        mark = float(self.rng.uniform()) if self.model.marked else None
        return Point(coords, mark)

    def birth_move(self):
        x = self._propose_point()
        n = len(self.state)
        acceptance = self.model.kappa(x, self.state) * self.mass / (n + 1)
        if self.rng.uniform() < acceptance:
            self.state = self.state.add(x)
            self.births += 1

    def death_move(self):
        n = len(self.state)
        if n == 0:
            return
        index = int(self.rng.integers(n))
        keep = np.ones(n, dtype=bool)
        keep[index] = False
        reduced = self.state.select(keep)
        denominator = self.mass * self.model.kappa(self.state.point(index), reduced)
        # zero denominator: the ratio is +inf and the death is accepted
        acceptance = math.inf if denominator == 0 else n / denominator
        if self.rng.uniform() < acceptance:
            self.state = reduced
            self.deaths += 1

    def step(self):
        if self.rng.uniform() < 0.5:
            self.birth_move()
        else:
            self.death_move()

    def run(self, steps: int) -> CountingMeasure:
        for _ in range(steps):
            self.step()
        return self.state


def sweep_size(model: PapangelouModel, window: Window, ref: Optional[ReferenceMeasure] = None) -> int:
    """Proposals per sweep: ceil(lambda(C) sup theta) + 1"""
    ref = ref or ReferenceMeasure()
    bound = model.theta if model.theta is not None else model.activity
    return int(math.ceil(ref.mass(window) * bound.sup(window))) + 1


def default_burn_in(model: PapangelouModel, window: Window, ref: Optional[ReferenceMeasure] = None) -> int:
    """10 x lambda(C) x sup theta sweeps, at least MIN_BURN_IN proposals"""
    ref = ref or ReferenceMeasure()
    bound = model.theta if model.theta is not None else model.activity
    sweeps = int(math.ceil(10 * ref.mass(window) * bound.sup(window)))
    return max(MIN_BURN_IN, sweeps * sweep_size(model, window, ref))


def sample_gibbs_mcmc(model: PapangelouModel, window: Window, psi: Boundary = None,
                      steps: Optional[int] = None, rng: Optional[np.random.Generator] = None,
                      ref: Optional[ReferenceMeasure] = None) -> CountingMeasure:
    """Final state of a birth-death chain started from the empty configuration"""
    steps = default_burn_in(model, window, ref) if steps is None else int(steps)
    if steps < 0:
        raise ValueError(f"step count must be nonnegative, got {steps}")
    return BirthDeathChain(model, window, psi, rng, ref).run(steps)


def mcmc_chain(model: PapangelouModel, window: Window, psi: Boundary = None,
               rng: Optional[np.random.Generator] = None, n_samples: int = 1000,
               thin: Optional[int] = None, burn_in: Optional[int] = None,
               ref: Optional[ReferenceMeasure] = None) -> Iterator[CountingMeasure]:
    """Post-burn-in states of one chain, one every `thin` proposals"""
    chain = BirthDeathChain(model, window, psi, rng, ref)
    chain.run(default_burn_in(model, window, ref) if burn_in is None else burn_in)
    thin = sweep_size(model, window, ref) if thin is None else thin
    for _ in range(n_samples):
        yield chain.run(thin)


@dataclass(frozen=True)
class SampleBatch:
    """Replicate configurations with their seed records and optional dominating draws"""

    configs: Tuple[CountingMeasure, ...]
    seeds: Tuple[SeedRecord, ...]
    dominating: Optional[Tuple[CountingMeasure, ...]] = None
    window: Optional[Window] = None
    attempts: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if len(self.configs) != len(self.seeds):
            raise ValueError("every configuration needs a seed record")
        if self.dominating is not None:
            if len(self.dominating) != len(self.configs):
                raise ValueError("dominating realizations must parallel the configurations")
            for index, (xi, phi) in enumerate(zip(self.configs, self.dominating)):
                if not xi.is_submeasure_of(phi):
                    raise ValueError(f"replicate {index} is not dominated by its Poisson realization")

    def __len__(self) -> int:
        return len(self.configs)

    def __iter__(self) -> Iterator[CountingMeasure]:
        return iter(self.configs)

    def counts(self, window: Optional[Window] = None) -> np.ndarray:
        return np.array([mu.total(window) for mu in self.configs], dtype=int)


def sample_batch(model: PapangelouModel, window: Window, psi: Boundary, n: int, streams: RandomStreams,
                 method: str = "rejection", max_attempts: int = 100000, mcmc_steps: Optional[int] = None,
                 ref: Optional[ReferenceMeasure] = None, tag: str = "sample") -> SampleBatch:
    """n independent replicates, replicate i drawn from stream (tag, i)"""
    if method not in METHODS:
        raise ValueError(f"unknown sampling method '{method}', expected one of {', '.join(METHODS)}")
    if n < 1:
        raise ValueError(f"replicate count must be positive, got {n}")
    boundary = psi if psi is None or isinstance(psi, BoundaryCondition) else BoundaryCondition(psi, window)

    if method == "rejection":
        def draw(index: int, rng: np.random.Generator) -> RejectionResult:
            return sample_gibbs_rejection(model, window, boundary, rng, max_attempts, ref)

        results: List[RejectionResult] = streams.map_replicates(draw, n, tag)
        configs = tuple(r.sample for r in results)
        dominating = tuple(r.dominating for r in results)
        attempts = tuple(r.attempts for r in results)
        logger.debug(f"rejection batch of {n}: mean attempts {np.mean(attempts):.2f}")
    else:
        steps = default_burn_in(model, window, ref) if mcmc_steps is None else mcmc_steps

        def run_chain(index: int, rng: np.random.Generator) -> CountingMeasure:
            return sample_gibbs_mcmc(model, window, boundary, steps, rng, ref)

        configs = tuple(streams.map_replicates(run_chain, n, tag))
        dominating = None
        attempts = None
    seeds = tuple(streams.record(tag, i) for i in range(n))
    return SampleBatch(configs, seeds, dominating, window, attempts)
