"""
Janossy masses and densities estimated from sample batches
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from gibbs_explorer.core.counting import CountingMeasure, Point
from gibbs_explorer.core.estimate import Estimate
from gibbs_explorer.core.reference import ReferenceMeasure
from gibbs_explorer.core.window import Window
from gibbs_explorer.models.papangelou import PapangelouModel

logger = logging.getLogger(__name__)


def _counts(samples: Iterable[CountingMeasure], window: Window) -> np.ndarray:
    return np.array([mu.total(window) for mu in samples], dtype=int)


def estimate_janossy_mass(samples: Iterable[CountingMeasure], window: Window, m: int) -> Estimate:
    """J_{B,m}(B^m) = P(eta(B) = m) as an empirical frequency"""
    if m < 0:
        raise ValueError(f"Janossy order must be nonnegative, got {m}")
    return Estimate.from_samples(_counts(samples, window) == m)


def janossy_masses(samples: Iterable[CountingMeasure], window: Window,
                   max_order: Optional[int] = None) -> List[Estimate]:
    """Masses for m = 0..max_order (default: the largest observed count)"""
    counts = _counts(samples, window)
    top = int(counts.max(initial=0)) if max_order is None else max_order
    return [Estimate.from_samples(counts == m) for m in range(top + 1)]


def janossy_from_kappa(model: PapangelouModel, samples: Iterable[CountingMeasure], window: Window,
                       xs: Sequence[Point]) -> Estimate:
    """Janossy density j_m(x_1, ..., x_m) = (1/m!) E[1{eta(B) = 0} kappa_m(xs, eta)]"""
    if not all(window.contains_point(x.coords) for x in xs):
        raise ValueError("Janossy evaluation points must lie in the window")
    scale = 1.0 / math.factorial(len(xs))
    values = [
        scale * model.kappa_m(xs, mu) if mu.total(window) == 0 else 0.0
        for mu in samples
    ]
    return Estimate.from_samples(values)


@dataclass(frozen=True)
class JanossyBoundRow:
    window_index: int
    order: int
    estimate: Estimate
    bound: float

    @property
    def ok(self) -> bool:
        return self.estimate.value <= self.bound + 3.0 * self.estimate.stderr

    def to_row(self) -> Dict[str, Any]:
        return {"window_index": self.window_index, "m": self.order, "value": self.estimate.value,
                "stderr": self.estimate.stderr, "n": self.estimate.n, "bound": self.bound, "ok": self.ok}


def janossy_bound_monitor(model: PapangelouModel, batches: Sequence[Sequence[CountingMeasure]],
                          window: Window, max_order: int,
                          ref: Optional[ReferenceMeasure] = None) -> List[JanossyBoundRow]:
    """
    P(N_B = m) <= (int_B theta dlambda)^m / m! across a finite-volume sequence

    batches[l] holds samples of the l-th finite Gibbs process; B is fixed.
    """
    if model.theta is None:
        raise ValueError("the Janossy bound needs a local-stability bound")
    mass = (ref or ReferenceMeasure()).weighted(model.theta).mass(window)
    rows = []
    for index, batch in enumerate(batches):
        for m, estimate in enumerate(janossy_masses(batch, window, max_order)):
            row = JanossyBoundRow(index, m, estimate, mass ** m / math.factorial(m))
            if not row.ok:
                logger.warning(f"Janossy bound exceeded at window {index}, m={m}: {estimate} > {row.bound:.4g}")
            rows.append(row)
    return rows
