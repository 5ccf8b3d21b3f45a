"""
Compact grains: closed balls and line segments in R^d

The intersection relation is evaluated exactly for balls and by closest-point
distance for segments.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from gibbs_explorer.core.window import MAX_DIMENSION, Window

# Closest-point computations on segments carry rounding; touching counts as
# intersecting up to this absolute slack.
CONTACT_TOLERANCE = 1e-12


def _as_coords(values: Sequence[float]) -> Tuple[float, ...]:
    coords = tuple(float(v) for v in np.ravel(values))
    if not 1 <= len(coords) <= MAX_DIMENSION:
        raise ValueError(f"particle dimension must be in 1..{MAX_DIMENSION}, got {len(coords)}")
    if not all(math.isfinite(c) for c in coords):
        raise ValueError(f"particle center must be finite: {coords}")
    return coords


@dataclass(frozen=True)
class Ball:
    center: Tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_coords(self.center))
        if not self.radius > 0 or not math.isfinite(self.radius):
            raise ValueError(f"ball radius must be positive and finite, got {self.radius}")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def reach(self) -> float:
        """Radius of the smallest ball about the center containing the grain"""
        return self.radius

    def inside(self, window: Window) -> bool:
        """Grain contained in the interior of the window"""
        return window.contains_point(self.center) and window.distance_to_boundary(self.center) > self.radius

    def translated(self, offset: Sequence[float]) -> "Ball":
        return Ball(tuple(np.add(self.center, offset)), self.radius)


@dataclass(frozen=True)
class Segment:
    """{center + s * direction : |s| <= half_length}"""

    center: Tuple[float, ...]
    direction: Tuple[float, ...]
    half_length: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_coords(self.center))
        direction = _as_coords(self.direction)
        if len(direction) != len(self.center):
            raise ValueError("segment direction and center differ in dimension")
        if abs(math.hypot(*direction) - 1.0) > 1e-12:
            raise ValueError(f"segment direction must be a unit vector, got norm {math.hypot(*direction)}")
        object.__setattr__(self, "direction", direction)
        if not self.half_length >= 0 or not math.isfinite(self.half_length):
            raise ValueError(f"segment half length must be nonnegative and finite, got {self.half_length}")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def reach(self) -> float:
        return self.half_length

    @property
    def endpoints(self) -> Tuple[np.ndarray, np.ndarray]:
        c = np.asarray(self.center)
        u = np.asarray(self.direction) * self.half_length
        return c - u, c + u

    def inside(self, window: Window) -> bool:
        a, b = self.endpoints
        return all(window.contains_point(p) and window.distance_to_boundary(p) > 0 for p in (a, b))

    def translated(self, offset: Sequence[float]) -> "Segment":
        return Segment(tuple(np.add(self.center, offset)), self.direction, self.half_length)


Particle = Union[Ball, Segment]


def point_segment_distance(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    length2 = float(ab @ ab)
    t = 0.0 if length2 == 0 else min(1.0, max(0.0, float((x - a) @ ab) / length2))
    return float(np.linalg.norm(x - (a + t * ab)))


def segment_segment_distance(p1: np.ndarray, q1: np.ndarray, p2: np.ndarray, q2: np.ndarray) -> float:
    """Distance between segments [p1, q1] and [p2, q2] via their closest points"""
    d1, d2, r = q1 - p1, q2 - p2, p1 - p2
    a, e, f = float(d1 @ d1), float(d2 @ d2), float(d2 @ r)
    if a == 0 and e == 0:
        return float(np.linalg.norm(r))
    if a == 0:
        s, t = 0.0, min(1.0, max(0.0, f / e))
    else:
        c = float(d1 @ r)
        if e == 0:
            s, t = min(1.0, max(0.0, -c / a)), 0.0
        else:
            b = float(d1 @ d2)
            denom = a * e - b * b
            s = min(1.0, max(0.0, (b * f - c * e) / denom)) if denom > 0 else 0.0
            t = (b * s + f) / e
            if t < 0:
                s, t = min(1.0, max(0.0, -c / a)), 0.0
            elif t > 1:
                s, t = min(1.0, max(0.0, (b - c) / a)), 1.0
    return float(np.linalg.norm((p1 + s * d1) - (p2 + t * d2)))


def distance(p: Particle, q: Particle) -> float:
    """Euclidean distance between the two grains (0 when they meet)"""
    if p.dim != q.dim:
        raise ValueError(f"particles live in different dimensions: {p.dim} vs {q.dim}")
    if isinstance(p, Ball) and isinstance(q, Ball):
        gap = math.dist(p.center, q.center) - p.radius - q.radius
    elif isinstance(p, Ball):
        gap = point_segment_distance(np.asarray(p.center), *q.endpoints) - p.radius
    elif isinstance(q, Ball):
        gap = point_segment_distance(np.asarray(q.center), *p.endpoints) - q.radius
    else:
        gap = segment_segment_distance(*p.endpoints, *q.endpoints)
    return max(0.0, gap)


def intersects(p: Particle, q: Particle) -> bool:
    """K intersect L is nonempty"""
    if isinstance(p, Ball) and isinstance(q, Ball):
        # exact form: center distance <= r1 + r2
        return math.dist(p.center, q.center) <= p.radius + q.radius
    return distance(p, q) <= CONTACT_TOLERANCE
