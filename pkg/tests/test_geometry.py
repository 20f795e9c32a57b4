import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from farpoint.ball_cover import build_ball_cover
from farpoint.errors import DimensionMismatch
from farpoint.geometry import (Ball, BallIntersection, CircumscribedFrame, HPolytope, eval_g,
                               eval_h, polytope_contains)

from _instances import square_frame, unit_square

coords = st.floats(-5, 5, allow_nan=False)


def test_eval_h_single_ball_center():
    Q = BallIntersection.from_arrays([[0.0, 0.0]], [1.0])
    assert eval_h(Q, [0.0, 0.0]) == pytest.approx(-1.0)


def test_eval_h_two_balls():
    Q = BallIntersection.from_arrays([[0.0, 0.0], [1.0, 0.0]], [1.0, 1.0])
    assert eval_h(Q, [1.0, 1.0]) == pytest.approx(1.0)


def test_eval_h_square_cover_vertex_is_zero():
    Q = build_ball_cover(unit_square(), square_frame())
    assert abs(eval_h(Q, [1.0, 1.0])) <= 1e-12


def test_eval_g_examples():
    fr = square_frame()
    assert eval_g(fr, [1.0, 1.0]) == pytest.approx(0.85)
    assert eval_g(fr, fr.C0) == 0.0
    fr3 = CircumscribedFrame(np.full(3, 0.5), np.sqrt(3) / 2, np.zeros(3), 2.0)
    assert eval_g(fr3, np.ones(3)) == pytest.approx(3.0)


def test_polytope_contains_examples():
    P = unit_square()
    assert polytope_contains(P, [0.5, 0.5], tol=0)
    assert not polytope_contains(P, [1.1, 0.5], tol=0)
    assert polytope_contains(P, [1 + 1e-12, 0.5], tol=1e-9)
    with pytest.raises(ValueError):
        polytope_contains(P, [0.5, 0.5], tol=-1)


def test_polytope_rejects_zero_normal():
    with pytest.raises(ValueError):
        HPolytope(np.array([[0.0, 0.0]]), np.array([1.0]))


def test_dimension_checks():
    P = unit_square()
    with pytest.raises(DimensionMismatch):
        polytope_contains(P, [0.5, 0.5, 0.5])
    with pytest.raises(ValueError):
        Ball(np.zeros(2), 0.0)


def test_frame_validation():
    with pytest.raises(ValueError):
        CircumscribedFrame(np.zeros(2), 1.0, np.zeros(2), 2.0)
    with pytest.raises(ValueError):
        CircumscribedFrame(np.zeros(2), 1.0, np.ones(2), 0.5)
    fr = square_frame()
    assert fr.trivial_upper_bound() == pytest.approx(np.sqrt(0.05) + np.sqrt(0.5))
    assert fr.with_rho(7.0).rho == 7.0


def test_arrays_are_read_only():
    P = unit_square()
    with pytest.raises(ValueError):
        P.normals[0, 0] = 3.0


@settings(max_examples=60, deadline=None)
@given(arrays(float, (4, 2), elements=coords),
       arrays(float, 4, elements=st.floats(0.1, 4)),
       arrays(float, 2, elements=coords))
def test_eval_h_sign_matches_per_ball_membership(centers, radii, x):
    Q = BallIntersection.from_arrays(centers, radii)
    inside_all = all(np.sum((x - c) ** 2) <= r * r for c, r in zip(centers, radii))
    assert (eval_h(Q, x) <= 0) == inside_all


@settings(max_examples=60, deadline=None)
@given(arrays(float, 3, elements=coords), arrays(float, 3, elements=coords),
       arrays(float, 3, elements=coords))
def test_eval_g_translation_invariant(x, C0, t):
    C = C0 + 1.0
    a = eval_g(CircumscribedFrame(C, 1.0, C0, 3.0), x)
    b = eval_g(CircumscribedFrame(C + t, 1.0, C0 + t, 3.0), x + t)
    assert a == pytest.approx(b, rel=1e-9, abs=1e-9)


def test_contains_agrees_with_max_value():
    rng = np.random.default_rng(3)
    P = HPolytope(rng.normal(size=(7, 3)), rng.uniform(-1, 0, 7))
    for x in rng.normal(size=(500, 3)):
        assert polytope_contains(P, x, tol=0) == (np.max(P.values(x)) <= 0)
