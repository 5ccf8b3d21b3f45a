"""
Partition functions Z_C(psi) and void probabilities

Two independent estimators:
- the series 1 + sum_m (1/m!) int_{C^m} kappa_m(x_1, ..., x_m, psi) dlambda^m
  with plain Monte Carlo per term,
- the Poisson expectation e^{lambda(C)} E[exp(-H(Phi_C, psi))].
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from gibbs_explorer.core.counting import CountingMeasure, Point
from gibbs_explorer.core.errors import NotLocallyStableError, SeriesNotSummableError
from gibbs_explorer.core.estimate import Estimate
from gibbs_explorer.core.reference import ReferenceMeasure
from gibbs_explorer.core.seeding import RandomStreams
from gibbs_explorer.core.window import Window
from gibbs_explorer.models.papangelou import BoundaryCondition, PapangelouModel, restricted_model
from gibbs_explorer.sampler.poisson import randomize, sample_poisson

logger = logging.getLogger(__name__)

Boundary = Union[BoundaryCondition, CountingMeasure, None]
METHODS = ("series", "poisson_mc")
EXTRA_TERMS = 100


@dataclass(frozen=True)
class SeriesTerm:
    order: int
    estimate: Estimate


@dataclass(frozen=True)
class PartitionResult:
    """A partition-function estimate with the method that produced it"""

    method: str
    window: Window
    estimate: Estimate
    terms: tuple = ()

    @property
    def value(self) -> float:
        return self.estimate.value

    def to_record(self, model: PapangelouModel) -> Dict[str, Any]:
        return {
            "op": "partition",
            "model": model.to_dict(),
            "window": self.window.to_dict(),
            "method": self.method,
            "value": self.estimate.value,
            "stderr": self.estimate.stderr,
            "n": self.estimate.n,
        }


def theta_mass(model: PapangelouModel, window: Window, ref: Optional[ReferenceMeasure] = None) -> float:
    """int_C theta dlambda"""
    if model.theta is None:
        raise NotLocallyStableError(f"{model!r} is not locally stable")
    return (ref or ReferenceMeasure()).weighted(model.theta).mass(window)


def local_stability_ceiling(model: PapangelouModel, window: Window,
                            ref: Optional[ReferenceMeasure] = None) -> float:
    """exp(int_C theta dlambda), an upper bound of Z_C(0)"""
    return math.exp(theta_mass(model, window, ref))


def _term_sampler(model, window: Window, ref: ReferenceMeasure, order: int):
    empty = CountingMeasure.empty(window.dim)

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        values = np.empty(size)
        for k in range(size):
            coords = ref.sample_locations(window, rng, order)
            marks = rng.uniform(size=order) if model.marked else [None] * order
            points = [Point(tuple(c), m) for c, m in zip(coords, marks)]
            log_value = model.log_kappa_m(points, empty)
            values[k] = 0.0 if log_value == -math.inf else math.exp(log_value)
        return values

    return draw


def partition_series(model: PapangelouModel, window: Window, psi: Boundary = None,
                     budget: int = 20000, eps: float = 1e-4, streams: Optional[RandomStreams] = None,
                     ref: Optional[ReferenceMeasure] = None) -> PartitionResult:
    """
    Truncated series for Z_C(psi)

    Term m is lambda(C)^m / m! times the mean of kappa_m at m i.i.d. points
    drawn from lambda_C / lambda(C). Summation stops at the first
    m >= ceil(e int theta dlambda) whose term is below eps times the running
    sum. Needs a local-stability bound for that floor.
    """
    ref = ref or ReferenceMeasure()
    streams = streams or RandomStreams(0)
    floor = math.ceil(math.e * theta_mass(model, window, ref))
    restricted = restricted_model(model, window, psi)
    mass = ref.mass(window)

    running = Estimate.exact(1.0)
    terms: List[SeriesTerm] = []
    order = 0
    while True:
        order += 1
        if order > floor + EXTRA_TERMS:
            raise SeriesNotSummableError("partition series terms below eps * running sum",
                                         order - 1, terms[-1].estimate.value)
        values = streams.map_chunks(_term_sampler(restricted, window, ref, order), budget,
                                    f"partition/series/m={order}")
        term = Estimate.from_samples(values).scaled(mass ** order / math.factorial(order))
        terms.append(SeriesTerm(order, term))
        running = Estimate(running.value + term.value, math.hypot(running.stderr, term.stderr),
                           running.n + term.n)
        logger.debug(f"series term m={order}: {term}")
        if order >= floor and term.value < eps * running.value:
            break
    logger.info(f"Z by series over {window}: {running} after {order} terms")
    return PartitionResult("series", window, running, tuple(terms))


def partition_poisson_mc(model: PapangelouModel, window: Window, psi: Boundary = None,
                         n: int = 100000, streams: Optional[RandomStreams] = None,
                         ref: Optional[ReferenceMeasure] = None) -> PartitionResult:
    """e^{lambda(C)} times the mean of exp(-H(Phi_C, psi)) over Poisson(lambda_C) draws"""
    ref = ref or ReferenceMeasure()
    streams = streams or RandomStreams(0)
    restricted = restricted_model(model, window, psi)
    empty = CountingMeasure.empty(window.dim)

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        values = np.empty(size)
        for k in range(size):
            phi = sample_poisson(ref, window, rng)
            if model.marked:
                phi = randomize(phi, rng)
            if len(phi) == 0:
                values[k] = 1.0
                continue
            log_value = restricted.log_kappa_m(phi.points, empty)
            values[k] = 0.0 if log_value == -math.inf else math.exp(log_value)
        return values

    weights = streams.map_chunks(draw, n, "partition/poisson_mc")
    estimate = Estimate.from_samples(weights).scaled(math.exp(ref.mass(window)))
    logger.info(f"Z by Poisson MC over {window}: {estimate}")
    return PartitionResult("poisson_mc", window, estimate)


def expected_partition_function(model: PapangelouModel, configs: Sequence[CountingMeasure], window: Window,
                                streams: Optional[RandomStreams] = None, ref: Optional[ReferenceMeasure] = None,
                                draws: int = 16) -> Estimate:
    """
    E[Z_B(eta)] over sampled configurations eta, where
    Z_B(eta) = 1 + sum_m (1/m!) int_{B^m} kappa_m(x_1, ..., x_m, eta) dlambda^m

    Proposals come from the dominating Poisson(theta lambda_B) process:
    each draw Phi gives exp(int_B theta dlambda) kappa_m(Phi, eta) / prod theta(x_i),
    unbiased for Z_B(eta) and bounded by exp(int_B theta dlambda) under local
    stability. A configuration contributes the mean of its `draws` weights.
    """
    if draws < 1:
        raise ValueError(f"draws per configuration must be positive, got {draws}")
    ref = ref or ReferenceMeasure()
    streams = streams or RandomStreams(0)
    if not model.is_locally_stable:
        raise NotLocallyStableError(f"{model!r} has no local-stability bound to propose from")
    proposal = ref.weighted(model.theta)
    scale = math.exp(proposal.mass(window))

    def weight(phi: CountingMeasure, eta: CountingMeasure) -> float:
        if len(phi) == 0:
            return 1.0
        log_value = model.log_kappa_m(phi.points, eta)
        if log_value == -math.inf:
            return 0.0
        return math.exp(log_value - float(np.sum(np.log(model.theta.evaluate(phi.coords)))))

    def draw(index: int, rng: np.random.Generator) -> float:
        total = 0.0
        for _ in range(draws):
            phi = sample_poisson(proposal, window, rng)
            if model.marked:
                phi = randomize(phi, rng)
            total += weight(phi, configs[index])
        return scale * total / draws

    estimate = Estimate.from_samples(streams.map_replicates(draw, len(configs), "partition/expected"))
    logger.info(f"E[Z_B(eta)] over {window} from {len(configs)} configurations: {estimate}")
    return estimate


def partition(model: PapangelouModel, window: Window, psi: Boundary = None, method: str = "series",
              samples: int = 20000, eps: float = 1e-4, streams: Optional[RandomStreams] = None,
              ref: Optional[ReferenceMeasure] = None) -> PartitionResult:
    if method == "series":
        return partition_series(model, window, psi, samples, eps, streams, ref)
    if method == "poisson_mc":
        return partition_poisson_mc(model, window, psi, samples, streams, ref)
    raise ValueError(f"unknown partition method '{method}', expected one of {', '.join(METHODS)}")


def void_probability(model: PapangelouModel, window: Window, psi: Boundary = None, method: str = "series",
                     samples: int = 20000, eps: float = 1e-4, streams: Optional[RandomStreams] = None,
                     ref: Optional[ReferenceMeasure] = None) -> Estimate:
    """P(no point in C | boundary psi) = 1 / Z_C(psi), delta-method error"""
    return partition(model, window, psi, method, samples, eps, streams, ref).estimate.reciprocal()


def partition_over_windows(model: PapangelouModel, window: Window, count: int, psi: Boundary = None,
                           method: str = "series", samples: int = 20000, eps: float = 1e-4,
                           streams: Optional[RandomStreams] = None,
                           ref: Optional[ReferenceMeasure] = None) -> List[PartitionResult]:
    """Z on the boxes C intersect B_l, B_l the localizing dilations of the central 1/count box"""
    base = window.central(1.0 / count)
    results = []
    for box in base.localizing_sequence(count):
        active = box.intersection(window) or box
        boundary = psi.psi if isinstance(psi, BoundaryCondition) else psi
        results.append(partition(model, active, boundary, method, samples, eps, streams, ref))
    return results
