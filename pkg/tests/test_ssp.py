import numpy as np
import pytest

from farpoint.oracle import brute_maxdist, ssp_brute
from farpoint.pipeline import solve
from farpoint.ssp import SSPDecision, Verdict, build_instance, interpret, ssp_vertices


class _Report:
    def __init__(self, upper, x_lb=None, y_star=None):
        self.upper_bound = upper
        self.x_lb = x_lb
        self.y_star = y_star


def test_build_examples():
    inst = build_instance([1, 2, 3], 3, beta=1.0)
    np.testing.assert_allclose(inst.C0, [0, -0.5, -1])
    assert inst.threshold_sq == pytest.approx(4.25)
    for x in ([0, 0, 1], [1, 1, 0]):
        assert np.sum((np.array(x) - inst.C0) ** 2) == pytest.approx(4.25)
    inst = build_instance([2, 4], 3, beta=1.0)
    np.testing.assert_allclose(inst.C0, [-0.5, -1.5])
    assert inst.threshold_sq == pytest.approx(5.5)
    assert brute_maxdist(inst.P, inst.C0)[1] ** 2 == pytest.approx(5.3125)


def test_zero_target_is_trivially_solvable():
    inst = build_instance([3, 5], 0)
    assert inst.C0 @ inst.C0 == pytest.approx(inst.threshold_sq)
    dec = interpret(inst, _Report(10.0, x_lb=np.zeros(2)))
    assert dec.verdict is Verdict.ACHIEVED_YES


def test_default_beta_and_validation():
    assert build_instance([2, 8], 3).beta == pytest.approx(1 / 8)
    with pytest.raises(ValueError):
        build_instance([1, 2], -1)
    with pytest.raises(ValueError):
        build_instance([1.5, 2], 1)
    with pytest.raises(ValueError):
        build_instance([1, 2], 1, beta=0.0)
    with pytest.raises(ValueError):
        build_instance([1, 2], 1, frame="square")


def test_interpret_examples():
    no = build_instance([2, 4], 3, beta=1.0)
    assert interpret(no, _Report(np.sqrt(5.3125))).verdict is Verdict.CERTIFIED_NO
    assert interpret(no, _Report(np.sqrt(5.6))).verdict is Verdict.INCONCLUSIVE
    yes = build_instance([1, 2, 3], 3, beta=1.0)
    dec = interpret(yes, _Report(3.0, x_lb=np.array([0.0, 0.0, 1.0])))
    assert isinstance(dec, SSPDecision) and dec.verdict is Verdict.ACHIEVED_YES
    np.testing.assert_array_equal(dec.x, [0, 0, 1])
    near = interpret(yes, _Report(3.0, x_lb=np.array([1e-9, 0.0, 1.0 - 1e-9])))
    assert near.verdict is Verdict.ACHIEVED_YES
    off = interpret(yes, _Report(3.0, x_lb=np.array([0.0, 1.0, 1.0 / 3.0])))
    assert off.verdict is Verdict.INCONCLUSIVE


def test_objective_identity():
    rng = np.random.default_rng(1)
    inst = build_instance([3, 5, 7, 11], 12)
    X = rng.uniform(size=(10000, 4))
    X = X[X @ inst.S <= inst.T]
    lhs = np.array([inst.objective(x) for x in X])
    rhs = np.sum((X - inst.C0) ** 2, axis=1) - inst.C0 @ inst.C0
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


def test_vertices_of_cut_cube():
    V = ssp_vertices([2, 4], 3)
    np.testing.assert_allclose(V, [[0, 0], [0, 0.75], [1, 0], [1, 0.25]])


def test_cube_frame_never_certifies_no():
    inst = build_instance([2, 4], 3, beta=1.0, frame="cube")
    rep = solve(inst.P, inst.frame, max_generations=60, check_frame=False)
    assert rep.upper_bound ** 2 >= inst.threshold_sq - 1e-7
    assert interpret(inst, rep).verdict is Verdict.INCONCLUSIVE


def test_meb_frame_certifies_the_small_no_instance():
    inst = build_instance([2, 4], 3, beta=1.0)
    rep = solve(inst.P, inst.frame, max_generations=100, check_frame=False)
    assert interpret(inst, rep).verdict is Verdict.CERTIFIED_NO


def test_soundness_small_random():
    rng = np.random.default_rng(21)
    for _ in range(8):
        n = int(rng.integers(2, 6))
        S = rng.integers(1, 12, n)
        T = int(rng.integers(1, S.sum()))
        inst = build_instance(S, T)
        rep = solve(inst.P, inst.frame, max_generations=50, check_frame=False)
        v = interpret(inst, rep).verdict
        truth = ssp_brute(S, T)
        assert not (v is Verdict.CERTIFIED_NO and truth)
        assert not (v is Verdict.ACHIEVED_YES and not truth)
