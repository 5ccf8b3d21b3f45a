"""
Runtime condition checks on Papangelou models

Each check draws random (x, mu) pairs in a window and reports the worst
deviation found. The checks exercise the structural conditions the
existence and uniqueness results rely on; they do not prove them.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from gibbs_explorer.core.counting import CountingMeasure, Point
from gibbs_explorer.core.window import Window

from .hamiltonian import hamiltonian
from .pair_potentials import PairPotential
from .papangelou import PapangelouModel

logger = logging.getLogger(__name__)

PAIR_SUPREMUM_CONDITION = (
    "sup_n of the n-fold integrals of exp(-sum v) against the Poisson law is bounded by "
    "theta(x_1)...theta(x_m); not computable in general and not verified"
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    trials: int
    worst: float = 0.0
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "trials": self.trials,
                "worst": self.worst, "detail": self.detail}


def random_point(rng: np.random.Generator, window: Window, marked: bool = False) -> Point:
    coords = tuple(window.sample_uniform(rng, 1)[0])
    return Point(coords, float(rng.uniform()) if marked else None)


def random_configuration(rng: np.random.Generator, window: Window, max_points: int = 6,
                         marked: bool = False) -> CountingMeasure:
    n = int(rng.integers(0, max_points + 1))
    coords = window.sample_uniform(rng, n)
    marks = rng.uniform(size=n) if marked else None
    return CountingMeasure(coords, marks)


def _relative_gap(a: float, b: float) -> float:
    if a == b:
        return 0.0
    if math.isinf(a) or math.isinf(b):
        return math.inf
    return abs(a - b) / max(abs(a), abs(b))


def check_cocycle(model: PapangelouModel, rng: np.random.Generator, window: Window,
                  trials: int = 500, rtol: float = 1e-12) -> CheckResult:
    """kappa(x, mu) kappa(y, mu + d_x) = kappa(y, mu) kappa(x, mu + d_y)"""
    worst = 0.0
    for _ in range(trials):
        mu = random_configuration(rng, window, marked=model.marked)
        x = random_point(rng, window, model.marked)
        y = random_point(rng, window, model.marked)
        left = model.kappa(x, mu) * model.kappa(y, mu.add(x))
        right = model.kappa(y, mu) * model.kappa(x, mu.add(y))
        worst = max(worst, _relative_gap(left, right))
    return CheckResult("cocycle", worst <= rtol, trials, worst)


def check_kappa_m_symmetry(model: PapangelouModel, rng: np.random.Generator, window: Window,
                           max_order: int = 4, trials: int = 200, rtol: float = 1e-12) -> CheckResult:
    """kappa_m is invariant under permutations of its point arguments"""
    worst = 0.0
    for _ in range(trials):
        mu = random_configuration(rng, window, marked=model.marked)
        m = int(rng.integers(1, max_order + 1))
        xs = [random_point(rng, window, model.marked) for _ in range(m)]
        reference = model.kappa_m(xs, mu)
        for order in itertools.permutations(xs):
            worst = max(worst, _relative_gap(reference, model.kappa_m(list(order), mu)))
    return CheckResult("kappa_m_symmetry", worst <= rtol, trials, worst)


def check_local_stability(model: PapangelouModel, rng: np.random.Generator, window: Window,
                          trials: int = 10 ** 4) -> CheckResult:
    """kappa(x, mu) <= theta(x)"""
    if model.theta is None:
        return CheckResult("local_stability", False, 0, math.inf, "model declares no bound")
    worst = 0.0
    for _ in range(trials):
        mu = random_configuration(rng, window, marked=model.marked)
        x = random_point(rng, window, model.marked)
        worst = max(worst, model.kappa(x, mu) - model.local_stability_bound(x))
    return CheckResult("local_stability", worst <= 0.0, trials, worst)


def check_finite_range(model: PapangelouModel, rng: np.random.Generator, window: Window,
                       trials: int = 1000) -> CheckResult:
    """kappa(x, mu) = kappa(x, mu restricted to B(x, R)) exactly"""
    radius = model.interaction_range
    if not math.isfinite(radius):
        return CheckResult("finite_range", False, 0, math.inf, "interaction range is unbounded")
    mismatches = 0
    for _ in range(trials):
        mu = random_configuration(rng, window, max_points=12, marked=model.marked)
        x = random_point(rng, window, model.marked)
        if model.kappa(x, mu) != model.kappa(x, mu.restrict_ball(x.coords, radius)):
            mismatches += 1
    return CheckResult("finite_range", mismatches == 0, trials, float(mismatches))


def check_energy_property(model: PapangelouModel, rng: np.random.Generator, window: Window,
                          trials: int = 200, rtol: float = 1e-9) -> CheckResult:
    """H(mu + nu, psi) = H(mu, psi) + H(nu, psi + mu), +inf matched exactly"""
    worst = 0.0
    for _ in range(trials):
        mu, nu, psi = (random_configuration(rng, window, 4, model.marked) for _ in range(3))
        left = hamiltonian(model, mu + nu, psi)
        right = hamiltonian(model, mu, psi) + hamiltonian(model, nu, psi + mu)
        if math.isinf(left) or math.isinf(right):
            gap = 0.0 if left == right else math.inf
        else:
            gap = abs(left - right) / max(1.0, abs(left), abs(right))
        worst = max(worst, gap)
    return CheckResult("energy_property", worst <= rtol, trials, worst)


def check_hereditary(model: PapangelouModel, rng: np.random.Generator, window: Window,
                     trials: int = 200) -> CheckResult:
    """H(mu, psi) = +inf implies H(mu + nu, psi) = +inf"""
    violations = 0
    infinite = 0
    for _ in range(trials):
        mu, nu, psi = (random_configuration(rng, window, 6, model.marked) for _ in range(3))
        if hamiltonian(model, mu, psi) == math.inf:
            infinite += 1
            if hamiltonian(model, mu + nu, psi) != math.inf:
                violations += 1
    return CheckResult("hereditary", violations == 0, trials, float(violations),
                       f"{infinite} infinite-energy configurations drawn")


def pair_potential_conditions(potential: PairPotential, rng: np.random.Generator, dim: int,
                              trials: int = 1000, scale: Optional[float] = None) -> List[CheckResult]:
    """Symmetry and lower bound of a pair potential; the supremum condition is only documented"""
    scale = scale or (potential.range if math.isfinite(potential.range) else 1.0) * 3.0
    asymmetric = 0
    lowest = math.inf
    for _ in range(trials):
        x, y = rng.uniform(-scale, scale, size=(2, dim))
        if potential(x, y) != potential(y, x):
            asymmetric += 1
        lowest = min(lowest, potential(x, y))
    bound_ok = lowest >= -potential.lower_bound
    return [
        CheckResult("pair_symmetry", asymmetric == 0, trials, float(asymmetric)),
        CheckResult("pair_lower_bound", bound_ok, trials, lowest, f"A = {potential.lower_bound}"),
        CheckResult("pair_supremum", True, 0, 0.0, f"unverified: {PAIR_SUPREMUM_CONDITION}"),
    ]


def run_model_checks(model: PapangelouModel, rng: np.random.Generator, window: Window,
                     trials: int = 200) -> List[CheckResult]:
    """The quick battery logged before every simulation run"""
    results = [
        check_cocycle(model, rng, window, trials),
        check_energy_property(model, rng, window, trials),
        check_hereditary(model, rng, window, trials),
    ]
    if model.is_locally_stable:
        results.append(check_local_stability(model, rng, window, trials))
    if math.isfinite(model.interaction_range):
        results.append(check_finite_range(model, rng, window, trials))
    potential = getattr(model, "potential", None)
    if potential is not None:
        results.extend(pair_potential_conditions(potential, rng, window.dim, trials))
    for result in results:
        level = logging.DEBUG if result.passed else logging.WARNING
        logger.log(level, f"check {result.name}: {'ok' if result.passed else 'FAILED'} "
                          f"(worst {result.worst:.3g} over {result.trials}) {result.detail}")
    return results
