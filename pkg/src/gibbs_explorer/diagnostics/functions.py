"""
Pre-registered test functions

The families are fixed ahead of any run; verification never selects
functions after seeing data.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional

from gibbs_explorer.core.counting import CountingMeasure, Point
from gibbs_explorer.core.window import Window

TRUNCATION = 5


@dataclass(frozen=True)
class PointFunction:
    """f(x, mu) >= 0, bounded and B-local"""

    function_id: str
    fn: Callable[[Point, CountingMeasure], float]

    def __call__(self, x: Point, mu: CountingMeasure) -> float:
        return float(self.fn(x, mu))


@dataclass(frozen=True)
class PairFunction:
    """f(x_1, x_2, mu) >= 0 for the two-point identity"""

    function_id: str
    fn: Callable[[Point, Point, CountingMeasure], float]

    def __call__(self, x1: Point, x2: Point, mu: CountingMeasure) -> float:
        return float(self.fn(x1, x2, mu))


@dataclass(frozen=True)
class LocalFunction:
    """
    F(mu) depending on mu only through mu_B

    `tame_constant` c certifies |F(mu)| <= c (1 + mu(B)).
    """

    function_id: str
    fn: Callable[[CountingMeasure], float]
    window: Window
    tame_constant: float = 1.0

    def __call__(self, mu: CountingMeasure) -> float:
        return float(self.fn(mu))

    def is_tame_at(self, mu: CountingMeasure) -> bool:
        return abs(self(mu)) <= self.tame_constant * (1 + mu.total(self.window))

    def is_local_at(self, mu: CountingMeasure, outside: CountingMeasure) -> bool:
        """F(mu) = F(mu_B + outside) for a configuration outside B"""
        return self(mu) == self(mu.restrict(self.window) + outside.outside(self.window))


def standard_family(window: Window, radius: float) -> List[PointFunction]:
    """Single-point functions localized in the window"""
    left, right = window.split(0, 2)

    def inside(x: Point, box: Window = window) -> bool:
        return box.contains_point(x.coords)

    return [
        PointFunction("window_indicator", lambda x, mu: float(inside(x))),
        PointFunction("sparse_window", lambda x, mu: float(inside(x) and mu.total(window) <= 1)),
        PointFunction("truncated_count", lambda x, mu: inside(x) * min(mu.total(window), TRUNCATION)),
        PointFunction("isolated_point",
                      lambda x, mu: float(inside(x) and mu.restrict(window).restrict_ball(x.coords, radius).total() <= 1)),
        PointFunction("crowded_point",
                      lambda x, mu: float(inside(x) and mu.restrict(window).restrict_ball(x.coords, radius).total() >= 2)),
        PointFunction("cross_window", lambda x, mu: float(inside(x, left) and mu.total(right) == 0)),
    ]


def pair_family(window: Window, radius: float) -> List[PairFunction]:
    """Two-point functions localized in the window"""

    def both_inside(x1: Point, x2: Point) -> bool:
        return window.contains_point(x1.coords) and window.contains_point(x2.coords)

    return [
        PairFunction("pair_in_window", lambda x1, x2, mu: float(both_inside(x1, x2))),
        PairFunction("close_pair",
                     lambda x1, x2, mu: float(both_inside(x1, x2) and math.dist(x1.coords, x2.coords) <= radius)),
        PairFunction("sparse_pair", lambda x1, x2, mu: float(both_inside(x1, x2) and mu.total(window) <= 3)),
    ]


def local_family(window: Window) -> List[LocalFunction]:
    """Local tame functions of mu_B"""
    return [
        LocalFunction("void", lambda mu: float(mu.total(window) == 0), window),
        LocalFunction("truncated_count", lambda mu: float(min(mu.total(window), TRUNCATION)), window),
        LocalFunction("sparse", lambda mu: float(mu.total(window) <= 1), window),
        LocalFunction("count", lambda mu: float(mu.total(window)), window),
        LocalFunction("constant", lambda mu: 1.0, window),
    ]


def select_functions(family: List, ids: Optional[List[str]]) -> List:
    """Members of a family by id, in registry order"""
    if not ids:
        return list(family)
    known = {f.function_id for f in family}
    unknown = [i for i in ids if i not in known]
    if unknown:
        raise ValueError(f"unknown test function(s) {unknown}; registered: {sorted(known)}")
    return [f for f in family if f.function_id in ids]
