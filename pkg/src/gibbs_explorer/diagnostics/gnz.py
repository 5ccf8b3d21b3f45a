"""
Georgii-Nguyen-Zessin checks

For each test function f the sides

    LHS = E[ sum_{x in eta} f(x, eta) ]
    RHS = E[ int_C f(x, eta + delta_x) kappa^{(C, psi)}(x, eta) lambda(dx) ]

are estimated on the same sample batch, the integral by `rhs_points`
reference draws per replicate.
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from gibbs_explorer.core.counting import CountingMeasure, Point, factorial_tuples
from gibbs_explorer.core.estimate import Estimate
from gibbs_explorer.core.reference import ReferenceMeasure
from gibbs_explorer.core.seeding import RandomStreams
from gibbs_explorer.core.window import Window
from gibbs_explorer.models.papangelou import PapangelouModel, restricted_model
from gibbs_explorer.sampler.gibbs import Boundary, SampleBatch, sample_batch

from .functions import PairFunction, PointFunction
from .report import TestReport

logger = logging.getLogger(__name__)


def _reference_points(ref: ReferenceMeasure, window: Window, rng: np.random.Generator,
                      size: int, marked: bool) -> List[Point]:
    coords = ref.sample_locations(window, rng, size)
    marks = rng.uniform(size=size) if marked else [None] * size
    return [Point(tuple(c), m) for c, m in zip(coords, marks)]


def _reports(identity: str, functions: Sequence, lhs: np.ndarray, rhs: np.ndarray) -> List[TestReport]:
    reports = []
    for j, f in enumerate(functions):
        report = TestReport(identity, f.function_id, Estimate.from_samples(lhs[:, j]),
                            Estimate.from_samples(rhs[:, j]))
        logger.info(f"{identity} {f.function_id}: lhs {report.lhs} rhs {report.rhs} z={report.z_score:+.2f}")
        reports.append(report)
    return reports


def _batch(model, window, psi, n, streams, samples, ref, tag) -> SampleBatch:
    if samples is not None:
        return samples
    return sample_batch(model, window, psi, n, streams, ref=ref, tag=tag)


def gnz_test(model: PapangelouModel, window: Window, functions: Sequence[PointFunction],
             psi: Boundary = None, n: int = 100000, streams: Optional[RandomStreams] = None,
             ref: Optional[ReferenceMeasure] = None, rhs_points: int = 4,
             samples: Optional[SampleBatch] = None) -> List[TestReport]:
    """One report per test function, in the order given"""
    ref = ref or ReferenceMeasure()
    streams = streams or RandomStreams(0)
    batch = _batch(model, window, psi, n, streams, samples, ref, "gnz/sample")
    restricted = restricted_model(model, window, psi)
    mass = ref.mass(window)

    def evaluate(index: int, rng: np.random.Generator) -> np.ndarray:
        eta = batch.configs[index]
        out = np.zeros((2, len(functions)))
        for x in eta:
            out[0] += [f(x, eta) for f in functions]
        for x in _reference_points(ref, window, rng, rhs_points, model.marked):
            weight = restricted.kappa(x, eta)
            if weight > 0:
                extended = eta.add(x)
                out[1] += [weight * f(x, extended) for f in functions]
        out[1] *= mass / rhs_points
        return out

    values = np.array(streams.map_replicates(evaluate, len(batch), "gnz/rhs"))
    return _reports("gnz", functions, values[:, 0, :], values[:, 1, :])


def gnz_multivariate_test(model: PapangelouModel, window: Window, functions: Sequence[PairFunction],
                          psi: Boundary = None, n: int = 100000, streams: Optional[RandomStreams] = None,
                          ref: Optional[ReferenceMeasure] = None, rhs_points: int = 4,
                          samples: Optional[SampleBatch] = None) -> List[TestReport]:
    """
    Two-point identity

        E[ sum_{(x1, x2) distinct in eta} f(x1, x2, eta) ]
            = E[ int f(x1, x2, eta + delta_x1 + delta_x2) kappa_2(x1, x2, eta) lambda^2(d(x1, x2)) ]
    """
    ref = ref or ReferenceMeasure()
    streams = streams or RandomStreams(0)
    batch = _batch(model, window, psi, n, streams, samples, ref, "gnz2/sample")
    restricted = restricted_model(model, window, psi)
    mass = ref.mass(window)

    def evaluate(index: int, rng: np.random.Generator) -> np.ndarray:
        eta = batch.configs[index]
        out = np.zeros((2, len(functions)))
        for x1, x2 in factorial_tuples(eta, 2):
            out[0] += [f(x1, x2, eta) for f in functions]
        for _ in range(rhs_points):
            x1, x2 = _reference_points(ref, window, rng, 2, model.marked)
            log_weight = restricted.log_kappa_m([x1, x2], eta)
            if log_weight > -math.inf:
                weight = math.exp(log_weight)
                extended = eta.add(x1).add(x2)
                out[1] += [weight * f(x1, x2, extended) for f in functions]
        out[1] *= mass ** 2 / rhs_points
        return out

    values = np.array(streams.map_replicates(evaluate, len(batch), "gnz2/rhs"))
    return _reports("gnz2", functions, values[:, 0, :], values[:, 1, :])


def count_identity(model: PapangelouModel, window: Window, samples: Sequence[CountingMeasure],
                   psi: Boundary = None, streams: Optional[RandomStreams] = None,
                   ref: Optional[ReferenceMeasure] = None, rhs_points: int = 16) -> TestReport:
    """E[eta(C)] = E[int_C kappa^{(C, psi)}(x, eta) lambda(dx)], the first-moment special case"""
    ref = ref or ReferenceMeasure()
    streams = streams or RandomStreams(0)
    restricted = restricted_model(model, window, psi)
    mass = ref.mass(window)
    configs = list(samples)

    def integral(index: int, rng: np.random.Generator) -> float:
        points = _reference_points(ref, window, rng, rhs_points, model.marked)
        return mass * math.fsum(restricted.kappa(x, configs[index]) for x in points) / rhs_points

    rhs = streams.map_replicates(integral, len(configs), "gnz/count")
    return TestReport("gnz", "count", Estimate.from_samples([mu.total(window) for mu in configs]),
                      Estimate.from_samples(rhs))
