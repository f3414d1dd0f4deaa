import math

import numpy as np
import pytest

from spaceform_rigidity.errors import DomainError, SpaceFormError
from spaceform_rigidity.geometry import (
    ball_to_halfspace,
    geodesic_distance,
    halfspace_to_ball,
    metric_norm,
    poincare_ball,
    stereographic_sphere,
    upper_half_space,
)


def test_conformal_factors_at_reference_points():
    assert poincare_ball(2).conformal_factor(np.zeros((1, 2)))[0] == pytest.approx(2.0)
    assert upper_half_space(3).conformal_factor(np.array([[0.3, -1.0, 4.0]]))[0] == pytest.approx(0.25)
    assert stereographic_sphere(2).conformal_factor(np.array([[1.0, 0.0]]))[0] == pytest.approx(1.0)


def test_curvature_signs():
    assert poincare_ball(2).K == -1
    assert upper_half_space(2).K == -1
    assert stereographic_sphere(2).K == 1


def test_ball_distance_from_origin(rng):
    x = rng.uniform(-0.6, 0.6, size=(50, 2))
    d = geodesic_distance(poincare_ball(2), np.zeros_like(x), x)
    np.testing.assert_allclose(d, 2.0 * np.arctanh(np.linalg.norm(x, axis=1)), rtol=1e-12, atol=1e-14)


def test_halfspace_vertical_distance():
    t = np.linspace(0.1, 3.0, 7)
    a = np.stack([np.zeros_like(t), np.ones_like(t)], axis=1)
    b = np.stack([np.zeros_like(t), np.exp(t)], axis=1)
    np.testing.assert_allclose(geodesic_distance(upper_half_space(2), a, b), t, rtol=1e-12)


def test_sphere_distance_from_south_pole(rng):
    x = rng.uniform(-2.0, 2.0, size=(50, 3))
    d = geodesic_distance(stereographic_sphere(3), np.zeros_like(x), x)
    np.testing.assert_allclose(d, 2.0 * np.arctan(np.linalg.norm(x, axis=1)), rtol=1e-12)


def test_halfspace_ball_round_trip(rng):
    x = rng.uniform(-2.0, 2.0, size=(100, 3))
    x[:, -1] = rng.uniform(0.05, 3.0, 100)
    y = halfspace_to_ball(x)
    assert np.all(np.linalg.norm(y, axis=1) < 1.0)
    np.testing.assert_allclose(ball_to_halfspace(y), x, rtol=1e-10, atol=1e-10)


def test_metric_norm_scales_with_factor():
    p = np.array([[0.5, 0.0]])
    v = np.array([[1.0, 0.0]])
    assert metric_norm(poincare_ball(2), p, v)[0] == pytest.approx(2.0 / 0.75)


def test_points_outside_chart_rejected():
    with pytest.raises(SpaceFormError):
        poincare_ball(2).check(np.array([[1.2, 0.0]]))
    with pytest.raises(SpaceFormError):
        upper_half_space(2).check(np.array([[0.0, -1.0]]))
