"""
Factorial moment measures, correlation functions and their monitors
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from gibbs_explorer.core.counting import CountingMeasure, Point, factorial_mass, falling_factorial
from gibbs_explorer.core.estimate import Estimate
from gibbs_explorer.core.reference import ReferenceMeasure
from gibbs_explorer.core.seeding import RandomStreams
from gibbs_explorer.core.window import Window
from gibbs_explorer.models.papangelou import PapangelouModel
from gibbs_explorer.partition.partition import expected_partition_function

logger = logging.getLogger(__name__)


def estimate_factorial_moment(samples: Iterable[CountingMeasure], boxes: Sequence[Window]) -> Estimate:
    """alpha_m(D_1 x ... x D_m) as the mean factorial-tuple count in the product box"""
    if len(boxes) < 1:
        raise ValueError("factorial moment needs at least one box")
    return Estimate.from_samples([factorial_mass(mu, boxes) for mu in samples])


def converted_factorial_moment(samples: Iterable[CountingMeasure], window: Window, m: int) -> Estimate:
    """
    alpha_m(B^m) through the Janossy series sum_k k!/(k-m)! P(N_B = k)

    The standard error treats the empirical Janossy masses as multinomial
    frequencies.
    """
    counts = np.array([mu.total(window) for mu in samples], dtype=int)
    n = counts.size
    top = int(counts.max(initial=0))
    frequencies = np.bincount(counts, minlength=top + 1) / n
    weights = np.array([falling_factorial(k, m) for k in range(top + 1)], dtype=float)
    value = math.fsum(weights * frequencies)
    variance = max(0.0, math.fsum(weights ** 2 * frequencies) - value ** 2)
    stderr = math.sqrt(variance / (n - 1)) if n > 1 else 0.0
    return Estimate(value, stderr, n)


def correlation_from_kappa(model: PapangelouModel, samples: Iterable[CountingMeasure],
                           xs: Sequence[Point]) -> Estimate:
    """rho_m(x_1, ..., x_m) = E[kappa_m(xs, eta)]"""
    return Estimate.from_samples([model.kappa_m(xs, mu) for mu in samples])


def describe_boxes(boxes: Sequence[Window]) -> str:
    return " x ".join(str(b) for b in boxes)


@dataclass(frozen=True)
class MomentTable:
    """One factorial-moment estimate over a product of sub-boxes"""

    order: int
    boxes: Tuple[Window, ...]
    estimate: Estimate

    def to_row(self) -> Dict[str, Any]:
        return {"m": self.order, "boxes": describe_boxes(self.boxes), "value": self.estimate.value,
                "stderr": self.estimate.stderr, "n": self.estimate.n}


def moment_table(samples: Sequence[CountingMeasure], window: Window, max_order: int,
                 split_axis: int = 0) -> List[MomentTable]:
    """
    alpha_m(B^m) for m = 1..max_order, then the mixed products of the two
    halves of B split along `split_axis` for m = 2
    """
    rows = [MomentTable(m, (window,) * m, estimate_factorial_moment(samples, [window] * m))
            for m in range(1, max_order + 1)]
    if max_order >= 2:
        left, right = window.split(split_axis, 2)
        for boxes in ((left, right), (right, left), (left, left)):
            rows.append(MomentTable(2, boxes, estimate_factorial_moment(samples, boxes)))
    return rows


@dataclass(frozen=True)
class RuelleRow:
    order: int
    estimate: Estimate
    ceiling: float

    @property
    def ok(self) -> bool:
        return self.estimate.value <= self.ceiling + 3.0 * self.estimate.stderr

    def to_row(self) -> Dict[str, Any]:
        return {"m": self.order, "value": self.estimate.value, "stderr": self.estimate.stderr,
                "n": self.estimate.n, "ceiling": self.ceiling, "ok": self.ok}


def ruelle_monitor(model: PapangelouModel, samples: Sequence[CountingMeasure], window: Window,
                   max_order: int, ref: Optional[ReferenceMeasure] = None) -> List[RuelleRow]:
    """alpha_m(B^m) <= (int_B theta dlambda)^m for a locally stable model"""
    if model.theta is None:
        raise ValueError("Ruelle's condition is monitored against a local-stability bound")
    mass = (ref or ReferenceMeasure()).weighted(model.theta).mass(window)
    rows = []
    for m in range(1, max_order + 1):
        row = RuelleRow(m, estimate_factorial_moment(samples, [window] * m), mass ** m)
        if not row.ok:
            logger.warning(f"Ruelle bound exceeded at m={m}: {row.estimate} > {row.ceiling:.4g}")
        rows.append(row)
    return rows


@dataclass(frozen=True)
class TwoPowerCheck:
    """E[Z_B(eta)] from kappa against E[2^{eta(B)}], with the truncated moment series alongside"""

    partition: Estimate
    series: Estimate
    power: Estimate

    @property
    def z_score(self) -> float:
        return self.partition.z_score(self.power)

    @property
    def ok(self) -> bool:
        return abs(self.z_score) < 3.0

    def to_row(self) -> Dict[str, Any]:
        return {"partition": self.partition.value, "partition_stderr": self.partition.stderr,
                "series": self.series.value, "series_stderr": self.series.stderr,
                "power": self.power.value, "power_stderr": self.power.stderr,
                "n": self.power.n, "z_score": self.z_score, "ok": self.ok}


def two_power_identity(model: PapangelouModel, samples: Sequence[CountingMeasure], window: Window,
                       streams: Optional[RandomStreams] = None, ref: Optional[ReferenceMeasure] = None,
                       draws: int = 16, max_order: Optional[int] = None) -> TwoPowerCheck:
    """
    E[Z_B(eta)] = 1 + sum_m alpha_m(B^m) / m! = E[2^{eta(B)}] on sampled output

    The partition side evaluates kappa at each sampled eta; the series side
    is truncated at max_order (default: the largest observed count).
    """
    counts = [mu.total(window) for mu in samples]
    top = max(counts, default=0) if max_order is None else max_order
    check = TwoPowerCheck(
        expected_partition_function(model, samples, window, streams, ref, draws),
        Estimate.from_samples([sum(math.comb(n, m) for m in range(min(n, top) + 1)) for n in counts]),
        Estimate.from_samples([2.0 ** n for n in counts]),
    )
    if not check.ok:
        logger.warning(f"E[Z_B(eta)] {check.partition} disagrees with E[2^N] {check.power} (z={check.z_score:.2f})")
    return check
