"""
Finite counting measures on R^d

A CountingMeasure is an immutable multiset of points stored as an (n, d)
coordinate array plus a mark column (NaN where a point carries no mark).
Multiplicities are represented by repeated rows and compared by exact
floating-point equality.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .window import MAX_DIMENSION, Window


@dataclass(frozen=True)
class Point:
    """Location in R^d with an optional mark in [0, 1]"""

    coords: Tuple[float, ...]
    mark: Optional[float] = None

    def __post_init__(self):
        coords = tuple(float(c) for c in np.ravel(self.coords))
        if not 1 <= len(coords) <= MAX_DIMENSION:
            raise ValueError(f"point dimension must be in 1..{MAX_DIMENSION}, got {len(coords)}")
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"point coordinates must be finite: {coords}")
        object.__setattr__(self, "coords", coords)
        if self.mark is not None:
            mark = float(self.mark)
            if not 0.0 <= mark <= 1.0:
                raise ValueError(f"mark must lie in [0, 1], got {mark}")
            object.__setattr__(self, "mark", mark)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords)

    def with_mark(self, mark: Optional[float]) -> "Point":
        return Point(self.coords, mark)

    def to_json(self) -> List[float]:
        values = list(self.coords)
        if self.mark is not None:
            values.append(self.mark)
        return values

    @classmethod
    def from_json(cls, values: Sequence[float], dim: int) -> "Point":
        if len(values) == dim:
            return cls(tuple(values))
        if len(values) == dim + 1:
            return cls(tuple(values[:dim]), values[dim])
        raise ValueError(f"expected {dim} coordinates (+ optional mark), got {len(values)} values")


class CountingMeasure:
    """Finite multiset of points, the element mu of N_f"""

    __slots__ = ("_coords", "_marks")

    def __init__(self, coords: np.ndarray, marks: Optional[np.ndarray] = None):
        coords = np.array(coords, dtype=float)
        if coords.ndim != 2 or not 1 <= coords.shape[1] <= MAX_DIMENSION:
            raise ValueError(f"coordinates must form an (n, d) array with 1 <= d <= {MAX_DIMENSION}")
        if not np.all(np.isfinite(coords)):
            raise ValueError("point coordinates must be finite")
        if marks is None:
            marks = np.full(coords.shape[0], np.nan)
        marks = np.array(marks, dtype=float).reshape(-1)
        if marks.shape[0] != coords.shape[0]:
            raise ValueError("marks and coordinates differ in length")
        present = marks[~np.isnan(marks)]
        if np.any((present < 0.0) | (present > 1.0)):
            raise ValueError("marks must lie in [0, 1]")
        coords.setflags(write=False)
        marks.setflags(write=False)
        self._coords = coords
        self._marks = marks

    # ------------------------------------------------------------------ #
    # Construction                                                       #
    # ------------------------------------------------------------------ #

    @classmethod
    def empty(cls, dim: int) -> "CountingMeasure":
        """The zero measure"""
        return cls(np.empty((0, dim)))

    @classmethod
    def from_points(cls, points: Iterable[Point], dim: Optional[int] = None) -> "CountingMeasure":
        points = list(points)
        if not points:
            if dim is None:
                raise ValueError("dimension is required for an empty point list")
            return cls.empty(dim)
        dims = {p.dim for p in points}
        if len(dims) != 1 or (dim is not None and dims != {dim}):
            raise ValueError(f"points have inconsistent dimensions: {sorted(dims)}")
        coords = np.array([p.coords for p in points])
        marks = np.array([np.nan if p.mark is None else p.mark for p in points])
        return cls(coords, marks)

    @classmethod
    def from_json(cls, data: Sequence[Sequence[float]], dim: int) -> "CountingMeasure":
        return cls.from_points([Point.from_json(entry, dim) for entry in data], dim)

    # ------------------------------------------------------------------ #
    # Views                                                              #
    # ------------------------------------------------------------------ #

    @property
    def dim(self) -> int:
        return self._coords.shape[1]

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def marks(self) -> np.ndarray:
        return self._marks

    @property
    def is_marked(self) -> bool:
        return len(self) > 0 and not np.any(np.isnan(self._marks))

    @property
    def points(self) -> Tuple[Point, ...]:
        return tuple(self.point(i) for i in range(len(self)))

    def point(self, index: int) -> Point:
        mark = self._marks[index]
        return Point(tuple(self._coords[index]), None if np.isnan(mark) else float(mark))

    def __len__(self) -> int:
        return self._coords.shape[0]

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __bool__(self) -> bool:
        return len(self) > 0

    # ------------------------------------------------------------------ #
    # Measure operations                                                 #
    # ------------------------------------------------------------------ #

    def total(self, window: Optional[Window] = None) -> int:
        """mu(B); the total mass when no window is given"""
        if window is None:
            return len(self)
        return int(np.count_nonzero(window.contains(self._coords)))

    def select(self, mask: np.ndarray) -> "CountingMeasure":
        return CountingMeasure(self._coords[mask], self._marks[mask])

    def restrict(self, window: Window) -> "CountingMeasure":
        """mu_B"""
        return self.select(window.contains(self._coords))

    def outside(self, window: Window) -> "CountingMeasure":
        """mu restricted to the complement of the window"""
        return self.select(~window.contains(self._coords))

    def restrict_ball(self, center: Sequence[float], radius: float) -> "CountingMeasure":
        """mu restricted to the closed ball B(center, radius)"""
        return self.select(self.distances_to(center) <= radius)

    def distances_to(self, center: Sequence[float]) -> np.ndarray:
        return np.sqrt(np.sum((self._coords - np.asarray(center, dtype=float)) ** 2, axis=1))

    def add(self, point: Point) -> "CountingMeasure":
        """mu + delta_x"""
        self._check_dim(point.dim)
        mark = np.nan if point.mark is None else point.mark
        return CountingMeasure(
            np.vstack([self._coords, np.asarray(point.coords).reshape(1, -1)]),
            np.append(self._marks, mark),
        )

    def __add__(self, other: Union["CountingMeasure", Point]) -> "CountingMeasure":
        if isinstance(other, Point):
            return self.add(other)
        self._check_dim(other.dim)
        return CountingMeasure(
            np.vstack([self._coords, other._coords]),
            np.concatenate([self._marks, other._marks]),
        )

    def index_of(self, point: Point) -> Optional[int]:
        """Index of the first occurrence of point, by exact equality"""
        if point.dim != self.dim or len(self) == 0:
            return None
        same = np.all(self._coords == np.asarray(point.coords), axis=1)
        if point.mark is None:
            same &= np.isnan(self._marks)
        else:
            same &= self._marks == point.mark
        hits = np.flatnonzero(same)
        return int(hits[0]) if hits.size else None

    def remove_point(self, point: Point) -> "CountingMeasure":
        """mu minus delta_x when mu({x}) > 0, mu otherwise"""
        index = self.index_of(point)
        if index is None:
            return self
        keep = np.ones(len(self), dtype=bool)
        keep[index] = False
        return self.select(keep)

    def drop_marks(self) -> "CountingMeasure":
        """Ground process obtained by forgetting the marks"""
        return CountingMeasure(self._coords)

    def with_marks(self, marks: np.ndarray) -> "CountingMeasure":
        return CountingMeasure(self._coords, marks)

    def multiset_key(self) -> Tuple[Tuple[float, ...], ...]:
        rows = []
        for coords, mark in zip(self._coords, self._marks):
            has_mark = not np.isnan(mark)
            rows.append(tuple(coords) + (float(has_mark), float(mark) if has_mark else 0.0))
        return tuple(sorted(rows))

    def is_submeasure_of(self, other: "CountingMeasure") -> bool:
        """mu <= nu as multisets"""
        remaining = other
        for point in self.points:
            index = remaining.index_of(point)
            if index is None:
                return False
            keep = np.ones(len(remaining), dtype=bool)
            keep[index] = False
            remaining = remaining.select(keep)
        return True

    def to_json(self) -> List[List[float]]:
        return [p.to_json() for p in self.points]

    def _check_dim(self, dim: int):
        if dim != self.dim:
            raise ValueError(f"dimension mismatch: measure has d={self.dim}, got d={dim}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountingMeasure):
            return NotImplemented
        return self.dim == other.dim and self.multiset_key() == other.multiset_key()

    def __hash__(self) -> int:
        return hash((self.dim, self.multiset_key()))

    def __repr__(self) -> str:
        return f"CountingMeasure(n={len(self)}, d={self.dim})"


# ---------------------------------------------------------------------- #
# Factorial measures                                                     #
# ---------------------------------------------------------------------- #

def total(mu: CountingMeasure, window: Window) -> int:
    return mu.total(window)


def remove_point(mu: CountingMeasure, point: Point) -> CountingMeasure:
    return mu.remove_point(point)


def factorial_indices(n: int, m: int) -> Iterator[Tuple[int, ...]]:
    """Ordered m-tuples of pairwise distinct indices in lexicographic order"""
    if m < 1:
        raise ValueError(f"factorial order must be at least 1, got {m}")
    return itertools.permutations(range(n), m)


def factorial_tuples(mu: CountingMeasure, m: int) -> Iterator[Tuple[Point, ...]]:
    """Lazily enumerate the atoms of the factorial measure mu^(m)"""
    points = mu.points
    for index in factorial_indices(len(points), m):
        yield tuple(points[i] for i in index)


def falling_factorial(n: int, m: int) -> int:
    return math.perm(n, m) if n >= m else 0


def set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]


def factorial_mass(mu: CountingMeasure, boxes: Sequence[Window]) -> int:
    """
    mu^(m)(D_1 x ... x D_m) without enumerating tuples

    Counts injective index assignments by inclusion-exclusion over set
    partitions of the m positions, weighted with the Moebius function of
    the partition lattice.
    """
    m = len(boxes)
    if m == 0:
        raise ValueError("at least one box is required")
    membership = np.stack([box.contains(mu.coords) for box in boxes], axis=1) if len(mu) else None
    if membership is None:
        return 0
    count = 0
    for partition in set_partitions(list(range(m))):
        weight = 1
        for block in partition:
            size = len(block)
            weight *= (-1) ** (size - 1) * math.factorial(size - 1)
            weight *= int(np.count_nonzero(np.all(membership[:, block], axis=1)))
            if weight == 0:
                break
        count += weight
    return count


def eval_by_representation(F: Callable[[CountingMeasure], float], mu: CountingMeasure) -> float:
    """
    Right-hand side of the factorial-measure representation of F

    F(mu) = 1{mu = 0} F(0) + sum_m (1/m!) 1{mu(X) = m} int F(sum delta_xj) dmu^(m)
    """
    n = len(mu)
    if n == 0:
        return float(F(CountingMeasure.empty(mu.dim)))
    # only the m = mu(X) summand survives the indicator
    terms = [F(CountingMeasure.from_points(atoms, mu.dim)) for atoms in factorial_tuples(mu, n)]
    return math.fsum(terms) / math.factorial(n)
