"""
Bounded boxes of R^d and the nested localizing sequence built from them
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

MAX_DIMENSION = 3


@dataclass(frozen=True)
class Window:
    """
    Axis-parallel box [lower, upper) in R^d, 1 <= d <= 3

    Membership is half-open per axis so that split windows partition
    their parent exactly.
    """

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != len(upper):
            raise ValueError(f"window bounds differ in length: {len(lower)} vs {len(upper)}")
        if not 1 <= len(lower) <= MAX_DIMENSION:
            raise ValueError(f"window dimension must be in 1..{MAX_DIMENSION}, got {len(lower)}")
        if not all(np.isfinite(lower)) or not all(np.isfinite(upper)):
            raise ValueError("window bounds must be finite")
        for axis, (lo, hi) in enumerate(zip(lower, upper)):
            if not lo < hi:
                raise ValueError(f"window axis {axis}: lower {lo} must be below upper {hi}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def unit(cls, dim: int = 2) -> "Window":
        return cls((0.0,) * dim, (1.0,) * dim)

    @classmethod
    def centered(cls, center: Sequence[float], half_side: float) -> "Window":
        return cls(tuple(c - half_side for c in center), tuple(c + half_side for c in center))

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def sides(self) -> np.ndarray:
        return np.subtract(self.upper, self.lower)

    @property
    def volume(self) -> float:
        return float(np.prod(self.sides))

    @property
    def center(self) -> np.ndarray:
        return (np.asarray(self.lower) + np.asarray(self.upper)) / 2.0

    def contains(self, coords: np.ndarray) -> np.ndarray:
        """Boolean mask of the rows of an (n, d) array lying in the window"""
        coords = np.asarray(coords, dtype=float)
        if coords.ndim == 1:
            coords = coords.reshape(1, -1)
        if coords.shape[0] == 0:
            return np.zeros(0, dtype=bool)
        return np.all((coords >= self.lower) & (coords < self.upper), axis=1)

    def contains_point(self, coords: Sequence[float]) -> bool:
        return bool(self.contains(np.asarray(coords, dtype=float))[0])

    def contains_window(self, other: "Window") -> bool:
        return all(a <= b for a, b in zip(self.lower, other.lower)) and all(
            a >= b for a, b in zip(self.upper, other.upper)
        )

    def intersection(self, other: "Window") -> Optional["Window"]:
        lower = np.maximum(self.lower, other.lower)
        upper = np.minimum(self.upper, other.upper)
        if np.any(lower >= upper):
            return None
        return Window(tuple(lower), tuple(upper))

    def is_disjoint(self, other: "Window") -> bool:
        return self.intersection(other) is None

    def dilate(self, factor: float) -> "Window":
        """Scale the window by factor about its center"""
        if factor <= 0:
            raise ValueError(f"dilation factor must be positive, got {factor}")
        half = self.sides * factor / 2.0
        return Window(tuple(self.center - half), tuple(self.center + half))

    def central(self, fraction: float) -> "Window":
        return self.dilate(fraction)

    def expand(self, margin: float) -> "Window":
        return Window(tuple(np.subtract(self.lower, margin)), tuple(np.add(self.upper, margin)))

    def localizing_sequence(self, count: int) -> List["Window"]:
        """B_1 subset B_2 subset ... realized as dilations by 1, 2, ..., count"""
        return [self.dilate(float(ell)) for ell in range(1, count + 1)]

    def split(self, axis: int, parts: int) -> List["Window"]:
        edges = np.linspace(self.lower[axis], self.upper[axis], parts + 1)
        pieces = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            lower = list(self.lower)
            upper = list(self.upper)
            lower[axis], upper[axis] = lo, hi
            pieces.append(Window(tuple(lower), tuple(upper)))
        return pieces

    def distance_to_boundary(self, coords: Sequence[float]) -> float:
        x = np.asarray(coords, dtype=float)
        return float(np.min(np.minimum(x - self.lower, np.asarray(self.upper) - x)))

    def sample_uniform(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(size, self.dim))

    def to_dict(self) -> Dict[str, Any]:
        return {"lower": list(self.lower), "upper": list(self.upper)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Window":
        return cls(tuple(data["lower"]), tuple(data["upper"]))

    def __str__(self) -> str:
        bounds = " x ".join(f"[{lo:g},{hi:g})" for lo, hi in zip(self.lower, self.upper))
        return bounds
