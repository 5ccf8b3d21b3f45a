"""
Finite-volume convergence probes

local_convergence_probe tracks E_{P_{B_l}}[F] along a localizing sequence;
disagreement_probe couples two boundary conditions through shared
proposal randomness and measures how often they disagree on a central
sub-window.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from gibbs_explorer.core.counting import CountingMeasure
from gibbs_explorer.core.estimate import Estimate
from gibbs_explorer.core.reference import ReferenceMeasure
from gibbs_explorer.core.seeding import RandomStreams
from gibbs_explorer.core.window import Window
from gibbs_explorer.models.papangelou import PapangelouModel
from gibbs_explorer.sampler.gibbs import Boundary, sample_batch, sample_gibbs_rejection

from .functions import LocalFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvergenceRow:
    ell: int
    window: Window
    estimate: Estimate

    def to_row(self) -> Dict[str, Any]:
        return {"ell": self.ell, "window": str(self.window), "value": self.estimate.value,
                "stderr": self.estimate.stderr, "n": self.estimate.n}


@dataclass(frozen=True)
class DisagreementRow:
    window_scale: float
    window: Window
    central: Window
    estimate: Estimate

    def to_row(self) -> Dict[str, Any]:
        return {"window_scale": self.window_scale, "window": str(self.window), "central": str(self.central),
                "disagreement": self.estimate.value, "stderr": self.estimate.stderr, "n": self.estimate.n}


def local_convergence_probe(model: PapangelouModel, function: LocalFunction, window: Window, ell_max: int,
                            n: int, streams: Optional[RandomStreams] = None,
                            ref: Optional[ReferenceMeasure] = None, method: str = "rejection",
                            max_attempts: int = 100000, mcmc_steps: Optional[int] = None) -> List[ConvergenceRow]:
    """E[F] under the empty-boundary law on B_l = window dilated by l, l = 1..ell_max"""
    if not window.contains_window(function.window):
        raise ValueError(f"function window {function.window} must lie in the first window {window}")
    streams = streams or RandomStreams(0)
    rows = []
    for ell, box in enumerate(window.localizing_sequence(ell_max), start=1):
        batch = sample_batch(model, box, None, n, streams, method, max_attempts, mcmc_steps, ref,
                             tag=f"converge/ell={ell}")
        row = ConvergenceRow(ell, box, Estimate.from_samples([function(mu) for mu in batch]))
        logger.info(f"l={ell} on {box}: E[{function.function_id}] = {row.estimate}")
        rows.append(row)
    return rows


def disagreement_probe(model: PapangelouModel, window: Window, psi: Boundary, psi_alt: Boundary,
                       central: Window, n: int, streams: Optional[RandomStreams] = None,
                       ref: Optional[ReferenceMeasure] = None, max_attempts: int = 100000,
                       tag: str = "disagree") -> Estimate:
    """
    P(xi_B != xi'_B) for rejection samples under psi and psi'

    Replicate i runs both samplers on generators built from the same
    (tag, i), so they see identical proposals and uniforms.
    """
    if not window.contains_window(central):
        raise ValueError(f"central window {central} is not inside {window}")
    streams = streams or RandomStreams(0)

    def differs(index: int, _rng: np.random.Generator) -> float:
        xi = sample_gibbs_rejection(model, window, psi, streams.generator(tag, index), max_attempts, ref)
        xi_alt = sample_gibbs_rejection(model, window, psi_alt, streams.generator(tag, index), max_attempts, ref)
        return float(xi.sample.restrict(central) != xi_alt.sample.restrict(central))

    return Estimate.from_samples(streams.map_replicates(differs, n, tag))


def scale_configuration(mu: CountingMeasure, center: Sequence[float], factor: float) -> CountingMeasure:
    """Points moved radially about center by factor; marks kept"""
    center = np.asarray(center, dtype=float)
    return CountingMeasure(center + factor * (mu.coords - center), mu.marks)


def disagreement_sweep(model: PapangelouModel, window: Window, psi: CountingMeasure, psi_alt: CountingMeasure,
                       window_scales: Sequence[float], central_fraction: float, n: int,
                       streams: Optional[RandomStreams] = None, ref: Optional[ReferenceMeasure] = None,
                       max_attempts: int = 100000) -> List[DisagreementRow]:
    """
    Disagreement on a fixed central sub-window as the active window grows

    Both boundary configurations scale with the window about its center so
    they stay outside it; the central sub-window is the central fraction of
    the unscaled window.
    """
    central = window.central(central_fraction)
    rows = []
    for scale in window_scales:
        box = window.dilate(scale)
        estimate = disagreement_probe(
            model, box, scale_configuration(psi, window.center, scale),
            scale_configuration(psi_alt, window.center, scale), central, n, streams, ref, max_attempts,
            tag=f"disagree/scale={scale:g}")
        logger.info(f"scale {scale:g}: disagreement on {central} = {estimate}")
        rows.append(DisagreementRow(float(scale), box, central, estimate))
    return rows
