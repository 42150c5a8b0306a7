
import numpy as np
import pytest

from centroflow import (FlowCoefficients, Polygon, TransversalRecipe, compute_signature,
                        endpoint_flow_step, inverse_pentagram_step, pentagram_coefficients,
                        pentagram_step, planarity_betas, planarity_matrix, planarity_system,
                        predict_tangent, proportional_step, regular_polygon, tangent_step,
                        transversal_step)
from centroflow.errors import (NonPositiveKappaBarWarning, NotClosed, NotConvex, Not2D,
                               RankMismatch, ZeroBeta)
from centroflow.flows import inverse_pentagram_coefficients
from centroflow.shapes import (random_convex_polygon, random_parallel_opposite_polygon,
                               random_planar_space_polygon, random_polygon)
from centroflow.tables import TABLE1_POINTS, TABLE3_POINTS, TABLE4_POINTS
from oracles import line_intersection


def gap(new, predicted):
    return np.abs(compute_signature(new).values - predicted.values).max()


def test_transversal_prediction_on_reference_pentagon(rng):
    P = Polygon(TABLE1_POINTS)
    for _ in range(20):
        betas = rng.uniform(0.3, 3, 5) * rng.choice([-1, 1], 5)
        assert gap(*transversal_step(P, betas)) < 1e-9


def test_constant_and_unit_betas(rng):
    P = random_polygon(rng, 7, 3)
    new, pred = transversal_step(P, np.full(7, -2.5))
    assert np.allclose(pred.values, compute_signature(P).values, atol=1e-12)
    assert np.allclose(compute_signature(new).values, compute_signature(P).values, atol=1e-10)
    same, _ = transversal_step(P, np.ones(7))
    assert same.allclose(P, atol=0)


def test_transversal_rejects_zero_beta_and_planar_input(rng):
    P = random_polygon(rng, 5, 3)
    with pytest.raises(ZeroBeta) as info:
        transversal_step(P, [1, 1, 0, 1, 1])
    assert info.value.index == 2
    with pytest.raises(ValueError):
        transversal_step(random_polygon(rng, 5, 2), np.ones(5))


def test_planarity_matrix_annihilates_positions(rng):
    P = random_planar_space_polygon(rng, 9)
    S = planarity_matrix(compute_signature(P))
    assert np.abs(S @ P.vertices).max() < 1e-9 * P.scale()


@pytest.mark.parametrize("p", range(4, 13))
def test_planarity_rank_and_planar_step(rng, p):
    for _ in range(5):
        P = random_planar_space_polygon(rng, p)
        sig = compute_signature(P)
        system = planarity_system(sig, P)
        assert system.rank == p - 3
        betas = planarity_betas(sig, P)
        assert np.abs(system.S @ (1 / betas)).max() < 1e-9 * np.abs(1 / betas).max()
        new, pred = transversal_step(P, betas)
        assert np.abs(compute_signature(new).tau).max() < 1e-8
        assert gap(new, pred) < 1e-8


def test_constant_recipe_gives_constant_betas(rng):
    P = random_planar_space_polygon(rng, 6)
    betas = planarity_betas(compute_signature(P), P, TransversalRecipe.constant(2.0))
    # the standardized coordinates of a planar polygon sum to one per vertex
    assert np.allclose(betas, 0.5)


def test_planarity_betas_rejects_space_polygon(rng):
    P = random_polygon(rng, 6, 3)
    with pytest.raises(ValueError):
        planarity_betas(compute_signature(P), P)


def test_rank_mismatch_is_an_error(rng, monkeypatch):
    P = random_planar_space_polygon(rng, 6)
    monkeypatch.setattr("centroflow.flows.RANK_RTOL", 10.0)
    with pytest.raises(RankMismatch):
        planarity_betas(compute_signature(P), P)


def test_tangent_prediction_on_reference_heptagon(rng):
    P = Polygon(TABLE3_POINTS)
    for _ in range(20):
        coeffs = FlowCoefficients(rng.uniform(-0.3, 0.3, 7), rng.uniform(-0.3, 0.3, 7))
        assert gap(*tangent_step(P, coeffs)) < 1e-8


def test_tangent_identity_and_proportional_special_case(rng):
    P = random_polygon(rng, 6, 3)
    same, pred = tangent_step(P, FlowCoefficients(0.0, 0.0))
    assert same.allclose(P, atol=0)
    assert np.allclose(pred.values, compute_signature(P).values, atol=1e-10)
    a, _ = tangent_step(P, FlowCoefficients(0.3, 0.0))
    b, _ = proportional_step(P, 0.3)
    assert a.allclose(b, atol=1e-12)


def test_tangent_flow_keeps_planar_polygons_planar(rng):
    P = random_planar_space_polygon(rng, 8)
    coeffs = FlowCoefficients(rng.uniform(-0.3, 0.3, 8), rng.uniform(-0.3, 0.3, 8))
    new, pred = tangent_step(P, coeffs)
    assert np.abs(compute_signature(new).tau).max() < 1e-9
    assert np.abs(pred.tau).max() < 1e-8


def test_pentagram_as_tangent_flow(rng):
    P = random_convex_polygon(rng, 7)
    sig = compute_signature(P)
    coeffs = pentagram_coefficients(sig)
    assert np.array_equal(coeffs.alphas - coeffs.betas, np.ones(7))
    via_tangent = predict_tangent(sig, coeffs)
    new, pred = pentagram_step(P)
    assert np.allclose(via_tangent.values, pred.values, atol=1e-9)
    inv_coeffs = inverse_pentagram_coefficients(sig)
    assert np.allclose(predict_tangent(sig, inv_coeffs).values,
                       inverse_pentagram_step(P)[1].values, atol=1e-9)


def test_proportional_prediction(rng):
    for dim in (2, 3):
        for _ in range(20):
            P = random_polygon(rng, int(rng.integers(4, 10)), dim)
            assert gap(*proportional_step(P, rng.uniform(0.05, 0.95))) < 1e-8


def test_affinely_regular_polygon_is_fixed_by_proportional_division(rng):
    P = regular_polygon(7).transformed(rng.normal(size=(2, 2)), (1, 2))
    for alpha in (0.1, 0.5, 0.8):
        new, pred = proportional_step(P, alpha)
        assert np.allclose(compute_signature(new).values, compute_signature(P).values, atol=1e-10)
    with pytest.raises(ValueError):
        proportional_step(P, 1.0)


def test_pentagram_vertices_are_diagonal_intersections(rng):
    for _ in range(50):
        P = random_convex_polygon(rng, int(rng.integers(5, 12)))
        new, _ = pentagram_step(P)
        R, n = P.vertices, len(P)
        for k in range(n):
            x = line_intersection(R[k], R[(k + 2) % n], R[k - 1], R[(k + 1) % n])
            assert np.allclose(new.vertices[k], x, atol=1e-9)


def test_pentagram_image_is_convex_with_positive_second_curvature(rng):
    for _ in range(50):
        new, pred = pentagram_step(random_convex_polygon(rng, int(rng.integers(5, 12))))
        assert np.all(pred.kappa_bar > 0)
        assert gap(new, pred) < 1e-9


def test_pentagram_round_trips_up_to_relabeling(rng):
    for _ in range(50):
        P = random_convex_polygon(rng, int(rng.integers(5, 12)))
        fwd, _ = pentagram_step(P)
        back, _ = inverse_pentagram_step(fwd)
        # inverse(forward(P)) is P with vertex k carried to position k - 1
        assert back.allclose(P.rolled(1), atol=1e-9)
        if np.all(compute_signature(P).kappa_bar > 0):
            again, _ = pentagram_step(inverse_pentagram_step(P)[0])
            assert again.allclose(P.rolled(1), atol=1e-9)


def test_affinely_regular_polygons_are_fixed_by_both_maps(rng):
    for p in (5, 6, 7, 9):
        P = regular_polygon(p).transformed(rng.normal(size=(2, 2)) + 2 * np.eye(2), (3, -1))
        s = compute_signature(P)
        assert np.allclose(compute_signature(pentagram_step(P)[0]).values, s.values, atol=1e-9)
        assert np.allclose(compute_signature(inverse_pentagram_step(P)[0]).values, s.values, atol=1e-9)


def test_parallel_opposite_class_is_preserved(rng):
    for m in (3, 4, 5):
        P = random_parallel_opposite_polygon(rng, m)
        for step in (pentagram_step, inverse_pentagram_step):
            t = step(P)[0].tangents
            assert np.allclose(t[m:], -t[:m], atol=1e-9)


def test_hexagon_is_period_two_under_both_maps(rng):
    for _ in range(20):
        P = random_parallel_opposite_polygon(rng, 3)
        s0 = compute_signature(P)
        for step in (pentagram_step, inverse_pentagram_step):
            s2 = compute_signature(step(step(P)[0])[0])
            assert np.allclose(s2.values, s0.rolled(1).values, atol=1e-9)


def test_reference_octagon_has_period_four():
    P = Polygon(TABLE4_POINTS)
    sigs = [compute_signature(P)]
    for _ in range(4):
        P, pred = inverse_pentagram_step(P)
        assert gap(P, pred) < 1e-9
        sigs.append(compute_signature(P))
    assert np.allclose(sigs[4].values, sigs[0].rolled(2).values, atol=1e-9)


def test_pentagram_preconditions(rng):
    with pytest.raises(NotConvex):
        pentagram_step(Polygon([(0, 0), (2, 1), (4, 0), (2, 3)]))
    with pytest.raises(NotConvex):
        pentagram_step(regular_polygon(7, 2))
    with pytest.raises(Not2D):
        pentagram_step(random_polygon(rng, 6, 3))
    with pytest.raises(NotClosed):
        pentagram_step(Polygon(regular_polygon(6).vertices, closed=False))


def test_inverse_pentagram_warns_on_nonpositive_second_curvature():
    P = Polygon([(0, 0), (10, 0), (10.1, 0.1), (10, 0.2), (0, 1)])
    sig = compute_signature(P)
    assert np.any(sig.kappa_bar <= 0)
    with pytest.warns(NonPositiveKappaBarWarning):
        inverse_pentagram_step(P)


def test_endpoint_step_is_the_verbatim_rule(rng):
    P = random_polygon(rng, 7, 3)
    R = P.vertices
    new = endpoint_flow_step(P, 0.2).vertices
    assert np.allclose(new[:-1], 0.8 * R[:-1] + 0.2 * R[1:])
    assert np.allclose(new[-1], 0.2 * (R[0] + R[-1]))
    conv = endpoint_flow_step(P, 0.2, variant="convex").vertices
    assert np.allclose(conv, proportional_step(P, 0.2)[0].vertices)
    with pytest.raises(ValueError):
        endpoint_flow_step(P, 0.2, variant="other")


def test_flows_reject_open_polygons(rng):
    P = random_polygon(rng, 6, 3, closed=False)
    with pytest.raises(NotClosed):
        proportional_step(P, 0.5)
    with pytest.raises(NotClosed):
        endpoint_flow_step(P, 0.5)
