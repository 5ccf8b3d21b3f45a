"""
DLR consistency check

    E[F(eta)] = E[ int F(mu + eta_{B^c}) P_B^{eta_{B^c}}(dmu) ]

for a B-local tame F, with eta sampled on an outer window C containing B
and the inner expectation estimated by resampling B with boundary
psi + eta_{C \\ B}.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from gibbs_explorer.core.counting import CountingMeasure
from gibbs_explorer.core.errors import RejectionBudgetExceeded
from gibbs_explorer.core.estimate import Estimate
from gibbs_explorer.core.reference import ReferenceMeasure
from gibbs_explorer.core.seeding import RandomStreams
from gibbs_explorer.core.window import Window
from gibbs_explorer.models.papangelou import BoundaryCondition, PapangelouModel
from gibbs_explorer.sampler.gibbs import Boundary, SampleBatch, sample_batch, sample_gibbs_rejection

from .functions import LocalFunction
from .report import TestReport

logger = logging.getLogger(__name__)


def _boundary_points(psi: Boundary, dim: int) -> CountingMeasure:
    if psi is None:
        return CountingMeasure.empty(dim)
    return psi.psi if isinstance(psi, BoundaryCondition) else psi


def dlr_test(model: PapangelouModel, outer: Window, inner: Window, functions: Sequence[LocalFunction],
             psi: Boundary = None, n_outer: int = 2000, n_inner: int = 20,
             streams: Optional[RandomStreams] = None, ref: Optional[ReferenceMeasure] = None,
             max_attempts: int = 100000, samples: Optional[SampleBatch] = None) -> List[TestReport]:
    """
    One report per local function

    Inner draws for outer replicate i come sequentially from stream
    ("dlr/inner", i). An exhausted inner rejection budget marks every
    report as failed rather than aborting the run.
    """
    if not outer.contains_window(inner):
        raise ValueError(f"inner window {inner} is not contained in {outer}")
    for f in functions:
        if not inner.contains_window(f.window):
            raise ValueError(f"function {f.function_id} is local to {f.window}, outside the inner window")
    streams = streams or RandomStreams(0)
    outer_psi = _boundary_points(psi, outer.dim)
    batch = samples if samples is not None else sample_batch(
        model, outer, psi, n_outer, streams, max_attempts=max_attempts, ref=ref, tag="dlr/outer")

    def resample(index: int, rng: np.random.Generator) -> Optional[np.ndarray]:
        eta = batch.configs[index]
        exterior = eta.outside(inner)
        boundary = BoundaryCondition(outer_psi + exterior, inner)
        total = np.zeros(len(functions))
        for _ in range(n_inner):
            try:
                mu = sample_gibbs_rejection(model, inner, boundary, rng, max_attempts, ref).sample
            except RejectionBudgetExceeded as exc:
                logger.warning(f"DLR inner resampling failed for outer replicate {index}: {exc}")
                return None
            total += [f(mu + exterior) for f in functions]
        return total / n_inner

    inner_means = streams.map_replicates(resample, len(batch), "dlr/inner")
    failures = sum(r is None for r in inner_means)
    lhs = np.array([[f(eta) for f in functions] for eta in batch.configs])

    reports = []
    for j, f in enumerate(functions):
        left = Estimate.from_samples(lhs[:, j])
        if failures:
            right = Estimate(float("nan"), 0.0, len(batch) - failures)
            report = TestReport("dlr", f.function_id, left, right, failed=True,
                                detail=f"{failures} inner resampling(s) exhausted the rejection budget")
        else:
            right = Estimate.from_samples([r[j] for r in inner_means])
            report = TestReport("dlr", f.function_id, left, right)
        logger.info(f"dlr {f.function_id}: lhs {report.lhs} rhs {report.rhs} verdict {report.verdict}")
        reports.append(report)
    return reports
