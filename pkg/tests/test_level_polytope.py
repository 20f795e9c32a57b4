import numpy as np
import pytest

from farpoint.ball_cover import build_ball_cover
from farpoint.errors import DegenerateCenter, DimensionMismatch
from farpoint.geometry import BallIntersection, CircumscribedFrame, eval_g, eval_h
from farpoint.level_polytope import build_level_polytope

from _instances import random_instances, square_frame, unit_square


def test_single_ball_facet():
    Q = BallIntersection.from_arrays([[2.5, 0.5]], [np.sqrt(2.5)])
    fr = square_frame()
    for R in (0.0, 0.9):
        L = build_level_polytope(Q, fr, R)
        np.testing.assert_allclose(L.base.normals, [[-4.4, -0.2]])
        assert L.base.offsets[0] == pytest.approx(3.75 + R * R)
    L = build_level_polytope(Q, fr, 0.0)
    x = np.array([1.0, 1.0])
    assert L.base.values(x)[0] == pytest.approx(eval_h(Q, x) - eval_g(fr, x))
    assert L.base.values(x)[0] == pytest.approx(-0.85)


def test_one_ball_facet_is_orthogonal_to_center_offset():
    c = np.array([1.0, 2.0])
    Q = BallIntersection.from_arrays([c], [0.5])
    fr = CircumscribedFrame(np.zeros(2), 3.0, np.array([0.2, -0.1]), 7.0)
    a = build_level_polytope(Q, fr, 0.3).base.normals[0]
    d = fr.C0 - c
    assert abs(a[0] * d[1] - a[1] * d[0]) < 1e-12


def test_zero_level_contains_the_ball_intersection():
    Q = build_ball_cover(unit_square(), square_frame())
    L = build_level_polytope(Q, square_frame(), 0.0)
    rng = np.random.default_rng(0)
    for x in rng.uniform(-2, 3, size=(5000, 2)):
        if eval_h(Q, x) <= 0:
            assert np.max(L.base.values(x)) <= 1e-12


def test_pointwise_identity_and_parallel_facets():
    rng = np.random.default_rng(1)
    for P, fr in random_instances(5, 10):
        Q = build_ball_cover(P, fr, strict=False)
        X = fr.C + rng.uniform(-3, 3, (2000, P.dimension))
        h = np.array([eval_h(Q, x) for x in X])
        g = np.array([eval_g(fr, x) for x in X])
        for R in (0.0, 0.5, 1.7):
            L = build_level_polytope(Q, fr, R)
            lhs = np.max(X @ L.base.normals.T + L.base.offsets, axis=1)
            np.testing.assert_allclose(lhs, h - g + R * R, atol=1e-9)
        La, Lb = build_level_polytope(Q, fr, 2.0), build_level_polytope(Q, fr, 1.0)
        np.testing.assert_array_equal(La.base.normals, Lb.base.normals)
        assert np.all(La.base.offsets >= Lb.base.offsets)


def test_errors():
    Q = BallIntersection.from_arrays([[0.3, 0.4]], [1.0])
    with pytest.raises(DegenerateCenter):
        build_level_polytope(Q, square_frame(), 0.5)
    with pytest.raises(ValueError):
        build_level_polytope(Q, square_frame(), -1.0)
    Q3 = BallIntersection.from_arrays([[0.0, 0.0, 0.0]], [1.0])
    with pytest.raises(DimensionMismatch):
        build_level_polytope(Q3, square_frame(), 0.5)
