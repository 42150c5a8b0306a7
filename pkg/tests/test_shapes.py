import numpy as np
import pytest

from centroflow import Polygon, compute_signature, convexity_check, is_simple, reconstruct, regular_polygon
from centroflow.errors import Not2D, NotClosed
from centroflow.shapes import (hexagon_signature, parallel_opposite_polygon, random_convex_polygon,
                               random_parallel_opposite_polygon, random_planar_space_polygon,
                               random_polygon, segments_intersect)


def test_segment_intersection_cases():
    assert segments_intersect((0, 0), (2, 2), (0, 2), (2, 0))
    assert not segments_intersect((0, 0), (1, 0), (0, 1), (1, 1))
    assert segments_intersect((0, 0), (2, 0), (1, 0), (3, 0))  # collinear overlap
    assert segments_intersect((0, 0), (2, 0), (1, 0), (1, 5))  # touching
    assert not segments_intersect((0, 0), (1, 0), (2, 0), (3, 0))


def test_simple_and_star_polygons():
    assert is_simple(regular_polygon(7))
    assert not is_simple(regular_polygon(7, 2))
    bowtie = Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])
    assert not is_simple(bowtie)


def test_convexity_via_first_curvature(rng):
    for _ in range(50):
        report = convexity_check(random_convex_polygon(rng, int(rng.integers(3, 12))))
        assert report.is_convex and report.is_simple
    arrow = Polygon([(0, 0), (2, 1), (4, 0), (2, 3)])
    assert not convexity_check(arrow).is_convex
    star = convexity_check(regular_polygon(5, 2))
    assert not star.is_convex and not star.is_simple


def test_convex_polygons_satisfy_second_curvature_bounds(rng):
    for _ in range(100):
        P = random_convex_polygon(rng, int(rng.integers(5, 12)))
        report = convexity_check(P)
        assert report.is_convex
        assert report.diagnostics == []
        sig = compute_signature(P)
        assert np.all(sig.kappa_bar > -1)


def test_convexity_check_preconditions(rng):
    with pytest.raises(NotClosed):
        convexity_check(Polygon([(0, 0), (1, 0), (1, 1), (0, 1)], closed=False))
    with pytest.raises(Not2D):
        convexity_check(random_polygon(rng, 5, 3))


def test_convex_inequality_for_pentagram(rng):
    # kappa_n / (1 + kbar_n) < kappa_{n-1} + kbar_{n-1} on convex polygons
    for _ in range(200):
        sig = compute_signature(random_convex_polygon(rng, int(rng.integers(5, 12))))
        k, kb = sig.kappa, sig.kappa_bar
        assert np.all(k / (1 + kb) < np.roll(k, 1) + np.roll(kb, 1))


def test_generators_produce_requested_shapes(rng):
    P = random_planar_space_polygon(rng, 7, convex=True)
    assert P.dimension == 3
    assert np.abs(compute_signature(P).tau).max() < 1e-9
    H = random_parallel_opposite_polygon(rng, 4)
    t = H.tangents
    assert np.allclose(t[4:], -t[:4])
    assert convexity_check(H).is_convex


def test_parallel_opposite_polygons_have_positive_second_curvature(rng):
    for m in (3, 4, 5, 6):
        for _ in range(30):
            sig = compute_signature(random_parallel_opposite_polygon(rng, m))
            assert np.all(sig.kappa_bar > 0)
    square = compute_signature(parallel_opposite_polygon([(1, 0), (0, 1)]))
    assert np.allclose(square.kappa_bar, 0)


def test_hexagon_relations_from_geometry(rng):
    for _ in range(50):
        sig = compute_signature(random_parallel_opposite_polygon(rng, 3))
        k, kb = sig.kappa, sig.kappa_bar
        assert np.allclose(k, np.roll(k, -3), rtol=1e-9)
        assert np.allclose(kb, 1 / np.roll(k, 1), rtol=1e-9)
        assert np.allclose(k[:3].prod(), 1, rtol=1e-9)
        assert np.all(k > 0)


def test_hexagon_geometry_from_relations(rng):
    for _ in range(50):
        k1, k2 = rng.uniform(0.4, 2.5, 2)
        sig = hexagon_signature(k1, k2)
        P = reconstruct([(0, 0), (1, 0), (1.3, 0.8)], sig)
        t = P.tangents
        assert np.allclose(t[3:], -t[:3], atol=1e-9)
        assert np.allclose(compute_signature(P).values, sig.values, atol=1e-9)
