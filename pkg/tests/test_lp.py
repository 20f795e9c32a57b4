import numpy as np
import pytest

from farpoint.geometry import HPolytope
from farpoint.lp import (INFEASIBLE, OPTIMAL, UNBOUNDED, feasible_point, hull_membership_lp,
                         lp_maximize, solve_standard_form)
from farpoint.oracle import enumerate_vertices

from _instances import unit_square

CUT = HPolytope(np.array([[2.0, 4.0], [1, 0], [0, 1], [-1, 0], [0, -1]]),
                np.array([-3.0, -1, -1, 0, 0]))
SQUARE_CENTERS = [[2.5, 0.5], [0.5, 2.5], [-1.5, 0.5], [0.5, -1.5]]


def test_maximize_square():
    res = lp_maximize(np.array([1.0, 1.0]), unit_square())
    assert res.status == OPTIMAL
    np.testing.assert_allclose(res.x, [1, 1], atol=1e-12)
    assert res.objective == pytest.approx(2.0)


def test_maximize_infeasible():
    P = HPolytope(np.array([[-1.0, 0.0], [1.0, 0.0]]), np.array([1.0, 0.0]))
    assert lp_maximize(np.array([1.0, 0.0]), P).status == INFEASIBLE


def test_maximize_unbounded():
    P = HPolytope(np.array([[-1.0, 0.0]]), np.array([0.0]))
    assert lp_maximize(np.array([1.0, 0.0]), P).status == UNBOUNDED


def test_maximize_cut_square():
    res = lp_maximize(np.array([0.7, 0.6]), CUT)
    np.testing.assert_allclose(res.x, [1, 0.25], atol=1e-12)
    assert res.objective == pytest.approx(0.85)


def test_feasible_point_examples():
    res = feasible_point(unit_square())
    assert res.optimal and np.all(unit_square().values(res.x) <= 0)
    np.testing.assert_allclose(res.x, [0.5, 0.5], atol=1e-9)
    empty = HPolytope(np.array([[-1.0, 0.0], [1.0, 0.0]]), np.array([1.0, 0.0]))
    assert feasible_point(empty).status == INFEASIBLE
    slab = HPolytope(np.array([[-1.0, 0], [1, 0], [0, 1], [0, -1]]), np.array([0.0, -1, -1, -1]))
    np.testing.assert_allclose(feasible_point(slab).x, [0.5, 0.0], atol=1e-9)


def test_standard_form_small():
    # max x1 + x2  s.t. x1 + s = 1, x2 + t = 2
    A = np.array([[1.0, 0, 1, 0], [0, 1, 0, 1]])
    status, x = solve_standard_form(A, np.array([1.0, 2.0]), np.array([1.0, 1, 0, 0]))
    assert status == OPTIMAL
    np.testing.assert_allclose(x, [1, 2, 0, 0], atol=1e-12)
    status, _ = solve_standard_form(np.array([[1.0, 1.0]]), np.array([-1.0]), np.zeros(2))
    assert status == INFEASIBLE


def test_scale_invariance():
    c = np.array([0.7, 0.6])
    scaled = HPolytope(CUT.normals * np.array([[1e6], [1], [1e-4], [3], [1]]),
                       CUT.offsets * np.array([1e6, 1, 1e-4, 3, 1]))
    assert lp_maximize(c, scaled).objective == pytest.approx(0.85, abs=1e-9)


def test_hull_lp_examples():
    st = hull_membership_lp([[0.0], [1.0]], [0.5])
    assert st.inside
    np.testing.assert_allclose(st.weights, [0.5, 0.5], atol=1e-12)
    assert not hull_membership_lp([[0.0], [1.0]], [2.0]).inside
    assert hull_membership_lp(SQUARE_CENTERS, [0.3, 0.4]).inside
    out = hull_membership_lp(SQUARE_CENTERS, [3.0, 3.0])
    assert not out.inside and out.margin > 0


def test_maximize_matches_vertex_enumeration():
    rng = np.random.default_rng(7)
    for _ in range(40):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(n + 1, 13))
        A = rng.normal(size=(m, n))
        P = HPolytope(np.vstack([A, np.eye(n), -np.eye(n)]),
                      np.concatenate([-rng.uniform(0.1, 1, m), -np.ones(n), -np.ones(n)]))
        c = rng.normal(size=n)
        V = enumerate_vertices(P).vertices
        assert lp_maximize(c, P).objective == pytest.approx(np.max(V @ c), abs=1e-8)
