#!/usr/bin/env python3
"""
Counting measures, windows and factorial measures
"""

import math
from collections import Counter
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gibbs_explorer.core import CountingMeasure, Point, Window
from gibbs_explorer.core.counting import (
    eval_by_representation,
    factorial_mass,
    factorial_tuples,
    falling_factorial,
    remove_point,
    set_partitions,
    total,
)

LINE_BOXES = [
    Window((0.0,), (0.5,)),
    Window((0.25,), (1.0,)),
    Window((0.0,), (1.0,)),
    Window((0.6,), (0.9,)),
]


def _line(values):
    return CountingMeasure(np.array(values, dtype=float).reshape(-1, 1))


def test_window_is_half_open():
    window = Window.unit(2)
    mu = CountingMeasure(np.array([[0.0, 0.0], [0.5, 0.5], [1.0, 0.5], [0.5, 1.0]]))
    assert total(mu, window) == 2
    assert mu.total() == 4


def test_split_windows_partition_parent():
    window = Window((0.0, 0.0), (2.0, 1.0))
    left, right = window.split(0, 2)
    mu = CountingMeasure(np.array([[0.0, 0.2], [1.0, 0.2], [1.999, 0.9], [0.5, 0.5]]))
    assert mu.total(left) + mu.total(right) == mu.total(window)


def test_window_rejects_degenerate_axis():
    with pytest.raises(ValueError):
        Window((0.0, 1.0), (1.0, 1.0))


def test_remove_point_takes_one_copy():
    mu = _line([0.1, 0.1, 0.7])
    reduced = remove_point(mu, Point((0.1,)))
    assert len(reduced) == 2
    assert reduced == _line([0.1, 0.7])


def test_remove_absent_point_is_identity():
    mu = _line([0.1, 0.7])
    assert remove_point(mu, Point((0.3,))) is mu


def test_marks_distinguish_points():
    mu = CountingMeasure(np.array([[0.2], [0.2]]), np.array([0.1, 0.9]))
    assert mu.index_of(Point((0.2,), 0.9)) == 1
    assert mu.index_of(Point((0.2,))) is None


def test_equality_ignores_order():
    assert _line([0.3, 0.1, 0.2]) == _line([0.1, 0.2, 0.3])
    assert _line([0.1, 0.1]) != _line([0.1])


def test_set_partition_counts_are_bell_numbers():
    bell = [1, 1, 2, 5, 15, 52]
    for n, expected in enumerate(bell):
        assert sum(1 for _ in set_partitions(list(range(n)))) == expected


def test_factorial_tuples_count():
    mu = _line([0.1, 0.2, 0.3, 0.4])
    assert sum(1 for _ in factorial_tuples(mu, 2)) == 12
    assert falling_factorial(4, 2) == 12
    assert falling_factorial(3, 5) == 0


def test_factorial_mass_of_product_box():
    mu = _line([0.1, 0.3, 0.7])
    box = Window((0.0,), (1.0,))
    assert factorial_mass(mu, [box, box]) == 6
    assert factorial_mass(mu, [LINE_BOXES[0], LINE_BOXES[3]]) == 2


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False), max_size=6),
    st.lists(st.integers(min_value=0, max_value=len(LINE_BOXES) - 1), min_size=1, max_size=3),
)
def test_factorial_mass_matches_enumeration(values, box_indices):
    mu = _line(values) if values else CountingMeasure.empty(1)
    boxes = [LINE_BOXES[i] for i in box_indices]
    brute = sum(
        all(box.contains_point(x.coords) for box, x in zip(boxes, atoms))
        for atoms in factorial_tuples(mu, len(boxes))
    )
    assert factorial_mass(mu, boxes) == brute


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=-2.0, max_value=2.0, allow_nan=False), max_size=5))
def test_representation_reproduces_symmetric_function(values):
    mu = _line(values) if values else CountingMeasure.empty(1)

    def F(nu):
        return 1.0 + math.fsum(x * x for x in nu.coords[:, 0])

    assert math.isclose(eval_by_representation(F, mu), F(mu), rel_tol=1e-12, abs_tol=1e-12)


def test_two_power_representation_on_repeated_atom():
    mu = _line([0.25, 0.25, 0.75])
    assert eval_by_representation(lambda nu: 2.0 ** nu.total(), mu) == 8.0


grid_points = st.lists(st.integers(min_value=0, max_value=8), max_size=3)


def _grid(values):
    return _line([v / 8.0 for v in values]) if values else CountingMeasure.empty(1)


def _keys(mu, m):
    return Counter(tuple(x.coords[0] for x in atoms) for atoms in factorial_tuples(mu, m))


def _tuple_sum(f, mu, nu, j, k):
    """sum over mu^(j) x nu^(k) of f at the joined tuple"""
    left = list(factorial_tuples(mu, j)) if j else [()]
    right = list(factorial_tuples(nu, k)) if k else [()]
    return sum(f(x + y) for x in left for y in right)


def _weight(atoms):
    return math.prod(1 + int(8 * x.coords[0]) for x in atoms)


@settings(max_examples=60, deadline=None)
@given(grid_points, grid_points, st.integers(min_value=1, max_value=6))
def test_factorial_measure_of_a_sum_splits_binomially(left, right, n):
    mu, nu = _grid(left), _grid(right)
    joined = sum(_weight(atoms) for atoms in factorial_tuples(mu + nu, n))
    split = sum(math.comb(n, j) * _tuple_sum(_weight, mu, nu, j, n - j)
                for j in range(max(0, n - len(nu)), min(n, len(mu)) + 1))
    assert joined == split


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=8), max_size=5), st.integers(0, len(LINE_BOXES) - 1),
       st.integers(min_value=1, max_value=3))
def test_factorial_tuples_commute_with_restriction(values, box_index, m):
    mu, box = _grid(values), LINE_BOXES[box_index]
    inside = Counter({key: count for key, count in _keys(mu, m).items()
                      if all(box.contains_point((x,)) for x in key)})
    assert _keys(mu.restrict(box), m) == inside


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(min_value=0, max_value=8), st.booleans()), max_size=5),
       st.integers(min_value=1, max_value=3))
def test_factorial_tuples_are_monotone(atoms, m):
    mu = _grid([v for v, _ in atoms])
    nu = _grid([v for v, keep in atoms if keep])
    assert nu.is_submeasure_of(mu)
    smaller, larger = _keys(nu, m), _keys(mu, m)
    assert all(count <= larger[key] for key, count in smaller.items())
    boxes = [LINE_BOXES[2]] * m
    assert factorial_mass(nu, boxes) <= factorial_mass(mu, boxes)


def test_point_json_round_trip_with_mark():
    point = Point((0.25, 0.5), 0.75)
    assert Point.from_json(point.to_json(), 2) == point


def test_point_rejects_bad_mark():
    with pytest.raises(ValueError):
        Point((0.0,), 1.5)


def main():
    """Run the counting tests without pytest"""
    tests = [(name, fn) for name, fn in globals().items() if name.startswith("test_") and callable(fn)]
    passed = 0
    for name, fn in tests:
        try:
            fn()
            passed += 1
            print(f"PASS: {name}")
        except Exception as e:
            print(f"FAIL: {name} - {e}")
    print(f"\nTEST RESULTS: {passed}/{len(tests)} PASSED")
    return 0 if passed == len(tests) else 1


if __name__ == "__main__":
    sys.exit(main())
