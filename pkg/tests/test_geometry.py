#!/usr/bin/env python3
"""
Particles, clusters, overlap interaction and the Boolean-model probe
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import kstest

from gibbs_explorer.core import CountingMeasure, Point, RandomStreams, Window
from gibbs_explorer.geometry import (
    Ball,
    DisjointSet,
    GrainLaw,
    OverlapFunctional,
    RadiusLaw,
    Segment,
    cluster,
    component_statistics,
    components,
    distance,
    gibbs_particle_kappa,
    intersects,
    sample_boolean,
    split_mark,
    subcriticality_probe,
)
from gibbs_explorer.geometry.grains import MARK_BITS
from gibbs_explorer.models import ClusterParticleModel
from gibbs_explorer.models.checks import check_cocycle

centers = st.tuples(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
radii = st.floats(0.01, 2.0)
angles = st.floats(0.0, 2.0 * math.pi)


def test_touching_balls_intersect():
    assert intersects(Ball((0.0, 0.0), 1.0), Ball((2.0, 0.0), 1.0))
    assert not intersects(Ball((0.0, 0.0), 1.0), Ball((2.1, 0.0), 1.0))


def test_crossing_and_parallel_segments():
    horizontal = Segment((0.0, 0.0), (1.0, 0.0), 1.0)
    vertical = Segment((0.0, 0.0), (0.0, 1.0), 1.0)
    lifted = Segment((0.0, 1.0), (1.0, 0.0), 1.0)
    assert intersects(horizontal, vertical)
    assert not intersects(horizontal, lifted)
    assert distance(horizontal, lifted) == pytest.approx(1.0)


def test_ball_touching_segment():
    segment = Segment((0.0, 0.0), (1.0, 0.0), 1.0)
    assert intersects(Ball((0.0, 0.5), 0.5), segment)
    assert not intersects(Ball((0.0, 0.6), 0.5), segment)


def test_segment_rejects_non_unit_direction():
    with pytest.raises(ValueError):
        Segment((0.0, 0.0), (1.0, 1.0), 1.0)


@settings(max_examples=80, deadline=None)
@given(centers, radii, centers, radii)
def test_ball_intersection_is_symmetric(c1, r1, c2, r2):
    p, q = Ball(c1, r1), Ball(c2, r2)
    assert intersects(p, q) == intersects(q, p)


@settings(max_examples=80, deadline=None)
@given(centers, radii, centers, angles, st.floats(0.0, 2.0))
def test_ball_segment_intersection_is_symmetric(c1, r1, c2, angle, half):
    ball = Ball(c1, r1)
    segment = Segment(c2, (math.cos(angle), math.sin(angle)), half)
    assert intersects(ball, segment) == intersects(segment, ball)


def test_cluster_follows_chains():
    chain = [Ball((0.0, 0.0), 0.5), Ball((0.9, 0.0), 0.5), Ball((1.8, 0.0), 0.5), Ball((5.0, 0.0), 0.5)]
    seed = Ball((-0.9, 0.0), 0.5)
    assert cluster(seed, chain) == chain[:3]
    assert cluster(Ball((10.0, 10.0), 0.5), chain) == []
    assert components(chain) == [[0, 1, 2], [3]]
    assert component_statistics(chain) == {"count": 2, "largest": 3, "mean_size": 2.0}


def test_disjoint_set_groups():
    forest = DisjointSet(5)
    assert forest.union(0, 3)
    assert forest.union(3, 4)
    assert not forest.union(0, 4)
    assert forest.groups() == [[0, 3, 4], [1], [2]]


def test_overlap_penalty_with_two_overlaps():
    particle = Ball((0.0, 0.0), 1.0)
    others = [Ball((1.5, 0.0), 1.0), Ball((0.0, 1.5), 1.0), Ball((9.0, 9.0), 1.0)]
    value = gibbs_particle_kappa(1.0, OverlapFunctional(math.log(2.0)), particle, others)
    assert value == pytest.approx(0.25)


def test_hard_particles_exclude_regardless_of_beta():
    particle = Ball((0.0, 0.0), 1.0)
    others = [Ball((1.5, 0.0), 1.0)]
    hard = OverlapFunctional.parse("inf")
    assert hard.is_hard
    assert gibbs_particle_kappa(0.0, hard, particle, others) == 0.0
    assert gibbs_particle_kappa(0.0, OverlapFunctional(3.0), particle, others) == 1.0


def test_overlap_constant_validation():
    with pytest.raises(ValueError):
        OverlapFunctional(-1.0)
    with pytest.raises(ValueError):
        OverlapFunctional.parse("large")


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 1.0), st.integers(1, 3))
def test_split_mark_yields_unit_uniforms(mark, parts):
    values = split_mark(mark, parts)
    assert len(values) == parts
    assert all(0.0 <= v <= 1.0 for v in values)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** MARK_BITS - 1), st.integers(2, 4))
def test_split_mark_re_interleaves_to_the_mark(word, parts):
    values = split_mark(word / 2 ** MARK_BITS, parts)
    widths = [len(range(part, MARK_BITS, parts)) for part in range(parts)]
    digits = [int(v * 2 ** w) for v, w in zip(values, widths)]
    rebuilt = 0
    for bit in range(MARK_BITS):
        part = bit % parts
        widths[part] -= 1
        rebuilt = (rebuilt << 1) | ((digits[part] >> widths[part]) & 1)
    assert rebuilt == word


@pytest.mark.parametrize("law", [
    RadiusLaw("uniform", low=0.1, high=0.3),
    RadiusLaw("pareto", scale=0.1, exponent=3.0),
])
def test_radius_draws_follow_their_law(law):
    draws = law.sample(np.random.default_rng(17), 800)
    assert kstest(draws, law.cdf).pvalue > 1e-3


def test_segment_grains_decode_deterministically():
    law = GrainLaw(2, RadiusLaw("uniform", low=0.1, high=0.3), shape="segment")
    first = law.decode((0.5, 0.5), 0.3141592)
    again = law.decode((0.5, 0.5), 0.3141592)
    assert first == again
    assert 0.1 <= first.half_length <= 0.3


def test_pareto_law_needs_finite_moment():
    with pytest.raises(ValueError):
        GrainLaw(2, RadiusLaw("pareto", scale=0.1, exponent=1.5))


def test_particle_model_satisfies_cocycle():
    law = GrainLaw(2, RadiusLaw("constant", radius=0.08))
    model = ClusterParticleModel(2.0, 1.0, OverlapFunctional(0.5), law)
    result = check_cocycle(model, np.random.default_rng(21), Window.unit(2), trials=100, rtol=1e-9)
    assert result.passed


def test_particle_model_kappa():
    law = GrainLaw(2, RadiusLaw("constant", radius=0.1))
    model = ClusterParticleModel(2.0, 1.0, OverlapFunctional(math.log(2.0)), law)
    mu = CountingMeasure(np.array([[0.15, 0.0], [0.0, 0.15], [0.8, 0.8]]), np.array([0.5, 0.5, 0.5]))
    assert model.kappa(Point((0.0, 0.0), 0.5), mu) == pytest.approx(0.5)


def test_boolean_germs_fill_the_halo():
    law = GrainLaw(2, RadiusLaw("constant", radius=0.1))
    grains = sample_boolean(50.0, law, Window.unit(2), np.random.default_rng(3))
    region = Window.unit(2).expand(law.halo())
    assert grains
    assert all(isinstance(g, Ball) and g.radius == 0.1 for g in grains)
    assert all(region.contains_point(g.center) for g in grains)
    with pytest.raises(ValueError):
        sample_boolean(0.0, law, Window.unit(2), np.random.default_rng(3))


def test_boundary_reach_is_monotone_in_z():
    law = GrainLaw(2, RadiusLaw("constant", radius=0.2))
    rows = subcriticality_probe([0.5, 0.1, 1.0], law, [1.0, 3.0], 20, RandomStreams(6), Window.unit(2),
                                test_radius=0.5)
    assert [row.z for row in rows[:3]] == [0.1, 0.5, 1.0]
    for scale in (1.0, 3.0):
        freqs = [row.estimate.value for row in rows if row.window_scale == scale]
        assert freqs == sorted(freqs)
    # the test ball already touches the unit window's boundary
    assert all(row.estimate.value == 1.0 for row in rows if row.window_scale == 1.0)


def test_boundary_reach_fades_with_window_at_small_z():
    law = GrainLaw(2, RadiusLaw("constant", radius=0.25))
    rows = subcriticality_probe([1.0], law, [2.0, 4.0, 8.0], 500, RandomStreams(18), Window.unit(2),
                                test_radius=0.5)
    assert [row.window_scale for row in rows] == [2.0, 4.0, 8.0]
    freqs = [row.estimate.value for row in rows]
    assert freqs[0] > freqs[1] > freqs[2]
    assert rows[0].estimate.z_score(rows[2].estimate) > 3.0


def main():
    """Run the geometry tests without pytest"""
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
