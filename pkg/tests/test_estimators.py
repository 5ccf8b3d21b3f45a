#!/usr/bin/env python3
"""
Janossy masses, factorial moments and the conversion series between them
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gibbs_explorer.core import CountingMeasure, Point, RandomStreams, SeriesNotSummableError, Window
from gibbs_explorer.estimators import (
    converted_factorial_moment,
    correlation_from_kappa,
    estimate_factorial_moment,
    estimate_janossy_mass,
    factorial_from_janossy,
    janossy_bound_monitor,
    janossy_from_factorial,
    janossy_from_kappa,
    janossy_masses,
    moment_table,
    ruelle_monitor,
    two_power_identity,
)
from gibbs_explorer.models import HardSphereModel, PoissonModel, StraussModel
from gibbs_explorer.sampler import sample_batch

UNIT = Window.unit(2)


def _poisson_janossy(lam, length):
    return [math.exp(-lam) * lam ** k / math.factorial(k) for k in range(length)]


def _configs(counts):
    rng = np.random.default_rng(12)
    return [CountingMeasure(rng.uniform(size=(n, 2))) for n in counts]


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_poisson_factorial_moments_from_janossy(m):
    lam = 1.5
    assert factorial_from_janossy(_poisson_janossy(lam, 60), m) == pytest.approx(lam ** m, rel=1e-10)


@pytest.mark.parametrize("m", [0, 1, 2, 4])
def test_poisson_janossy_from_factorial_moments(m):
    lam = 1.5
    alphas = [lam ** k for k in range(60)]
    value, remainder = janossy_from_factorial(alphas, m)
    expected = math.exp(-lam) * lam ** m / math.factorial(m)
    assert value == pytest.approx(expected, abs=1e-10)
    assert remainder < 1e-10


def test_void_probability_of_poisson():
    value, _ = janossy_from_factorial([1.0] * 60, 0)
    assert value == pytest.approx(math.exp(-1.0), abs=1e-10)


def test_short_sequences_are_complete():
    janossy = [0.2, 0.5, 0.3]
    assert factorial_from_janossy(janossy, 1) == pytest.approx(1.1)
    assert factorial_from_janossy(janossy, 2) == pytest.approx(0.6)
    alphas = [1.0, 1.1, 0.6]
    for m, expected in enumerate(janossy):
        value, remainder = janossy_from_factorial(alphas, m)
        assert value == pytest.approx(expected)
        assert remainder == 0.0


def test_growing_factorial_moments_are_not_summable():
    with pytest.raises(SeriesNotSummableError):
        janossy_from_factorial([20.0 ** k for k in range(100)], 0)


def test_flat_janossy_sequence_is_not_summable():
    with pytest.raises(SeriesNotSummableError):
        factorial_from_janossy([0.01] * 100, 1)


def test_ruelle_ceiling_bounds_remainder():
    lam = 1.0
    alphas = [lam ** k for k in range(60)]
    _, remainder = janossy_from_factorial(alphas, 1, cutoff=20, ruelle_ceiling=lam)
    # c^m c^n / n! e^c with n = 20 summed terms
    assert remainder == pytest.approx(math.e / math.factorial(20))


def test_factorial_moment_of_fixed_configurations():
    samples = _configs([3, 3, 3])
    assert estimate_factorial_moment(samples, [UNIT, UNIT]).value == 6.0
    assert estimate_factorial_moment(samples, [UNIT]).value == 3.0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=6), min_size=2, max_size=12), st.integers(1, 4))
def test_converted_moment_matches_direct(counts, m):
    samples = _configs(counts)
    direct = estimate_factorial_moment(samples, [UNIT] * m)
    converted = converted_factorial_moment(samples, UNIT, m)
    assert converted.value == pytest.approx(direct.value, rel=1e-12, abs=1e-12)


def test_two_power_identity_holds_for_strauss():
    model = StraussModel(2.0, 0.5, 0.2)
    batch = sample_batch(model, UNIT, None, 2000, RandomStreams(43))
    check = two_power_identity(model, batch.configs, UNIT, RandomStreams(44))
    assert abs(check.z_score) < 4.0
    assert check.partition.value <= math.exp(2.0)
    assert check.series.value == check.power.value


def test_two_power_identity_flags_the_wrong_kernel():
    # Poisson(2) output has E[2^N] = e^2, while the hard core forbids all pairs
    batch = sample_batch(PoissonModel(2.0), UNIT, None, 1000, RandomStreams(45))
    check = two_power_identity(HardSphereModel(2.0, 2.0), batch.configs, UNIT, RandomStreams(46))
    assert not check.ok
    assert check.partition.value < check.power.value


def test_janossy_mass_is_count_frequency():
    samples = _configs([0, 1, 1, 2])
    assert estimate_janossy_mass(samples, UNIT, 1).value == 0.5
    assert estimate_janossy_mass(samples, UNIT, 3).value == 0.0
    with pytest.raises(ValueError):
        estimate_janossy_mass(samples, UNIT, -1)


def test_janossy_masses_sum_to_one():
    masses = janossy_masses(_configs([0, 1, 1, 2, 4]), UNIT)
    assert len(masses) == 5
    assert math.fsum(m.value for m in masses) == pytest.approx(1.0)
    assert masses[1].value == pytest.approx(0.4)


def test_moment_table_includes_mixed_boxes():
    rows = moment_table(_configs([2, 3]), UNIT, 2)
    assert [r.order for r in rows] == [1, 2, 2, 2, 2]
    assert rows[0].estimate.value == 2.5


def test_poisson_janossy_density_and_correlation():
    model = PoissonModel(2.0)
    empty = [CountingMeasure.empty(2)] * 4
    x = Point((0.5, 0.5))
    assert janossy_from_kappa(model, empty, UNIT, [x]).value == pytest.approx(2.0)
    assert correlation_from_kappa(model, _configs([1, 2]), [x, Point((0.2, 0.2))]).value == pytest.approx(4.0)


def test_hard_sphere_monitors_stay_below_bounds():
    model = HardSphereModel(5.0, 0.1)
    batch = sample_batch(model, UNIT, None, 200, RandomStreams(41))
    assert all(row.ok for row in ruelle_monitor(model, batch.configs, UNIT, 3))
    rows = janossy_bound_monitor(model, [batch.configs], UNIT, 4)
    assert all(row.ok for row in rows)


def main():
    """Run the estimator tests without pytest"""
    tests = [(name, fn) for name, fn in globals().items()
             if name.startswith("test_") and callable(fn) and not hasattr(fn, "pytestmark")]
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
