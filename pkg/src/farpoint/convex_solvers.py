"""Convex subroutines: a deep-cut ellipsoid method and what is built on it.

Every minimizer here tracks a certified lower bound alongside the best value
found, so callers can tell a converged answer from a budget stop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import SolverConfig
from .errors import BracketError, DimensionMismatch, SolverIndeterminate
from .geometry import BallIntersection, CircumscribedFrame
from .level_polytope import LevelPolytope, build_level_polytope
from .lp import HullStatus, hull_membership_lp

__all__ = [
    "SolverConfig", "HullStatus", "EllipsoidResult", "PiecewiseMax",
    "FeasibilityResult", "MaxDistResult", "ellipsoid_minimize",
    "minimize_piecewise_max", "hull_membership", "intersection_feasible",
    "maxdist_outside_hull", "maxdist_direct", "minimum_enclosing_ball",
]


@dataclass(frozen=True, eq=False)
class EllipsoidResult:
    """Outcome of :func:`ellipsoid_minimize`.

    ``x``/``value`` are the best feasible iterate (``None``/``inf`` if no
    feasible iterate was met).  ``lower_bound`` is valid for the minimum over
    the feasible part of the starting ellipsoid.  ``infeasible`` means a
    constraint cut proved that part empty.
    """

    x: np.ndarray | None
    value: float
    lower_bound: float
    iterations: int
    converged: bool
    infeasible: bool = False

    @property
    def gap(self) -> float:
        return self.value - self.lower_bound


Oracle = Callable[[np.ndarray], tuple]


def ellipsoid_minimize(objective: Oracle, constraint: Oracle | None, center, shape,
                       tol: float, max_iters: int,
                       stop: Callable[[float, float], bool] | None = None) -> EllipsoidResult:
    """Minimize a convex function over a convex set inside an ellipsoid.

    ``objective(z)`` and ``constraint(z)`` return ``(value, subgradient)``;
    the feasible set is ``constraint <= 0``.  The starting ellipsoid is
    ``{z : (z - center)^T shape^{-1} (z - center) <= 1}`` and must contain
    the feasible minimizers.  Deep cuts are used for both cut types.
    Iteration stops when ``best - lower_bound <= tol`` or when
    ``stop(best, lower_bound)`` returns true.
    """
    z = np.array(center, dtype=float)
    P = np.array(shape, dtype=float)
    d = z.size
    if P.shape != (d, d):
        raise DimensionMismatch("shape matrix does not match the center")
    best, xbest, lb = np.inf, None, -np.inf

    def done(it, converged, infeasible=False):
        return EllipsoidResult(xbest, float(best), float(lb), it, converged, infeasible)

    for it in range(1, max_iters + 1):
        on_constraint = False
        if constraint is not None:
            v, g = constraint(z)
            if v > 0.0:
                on_constraint, f = True, v
        if not on_constraint:
            f0, g = objective(z)
            if f0 < best:
                best, xbest = f0, z.copy()
            f = f0 - best

        Pg = P @ g
        gPg = float(g @ Pg)
        if not gPg > 0.0:
            # zero subgradient: a global minimizer of whichever function was cut
            if on_constraint:
                return done(it, False, infeasible=True)
            lb = best
            return done(it, True)
        sq = np.sqrt(gPg)
        if on_constraint:
            if f >= sq:
                return done(it, False, infeasible=True)
        else:
            lb = max(lb, f0 - sq)
            if best - lb <= tol:
                return done(it, True)
        if stop is not None and stop(best, lb):
            return done(it, False)

        alpha = f / sq
        b = Pg / sq
        if d == 1:
            # interval update; the general formula divides by d^2 - 1
            w = np.sqrt(P[0, 0])
            lo, hi = z[0] - w, z[0] + w
            cut = z[0] - alpha * w * np.sign(g[0])
            if g[0] > 0:
                hi = min(hi, cut)
            else:
                lo = max(lo, cut)
            z[0] = 0.5 * (lo + hi)
            P[0, 0] = (0.5 * (hi - lo)) ** 2
            continue
        z -= ((1.0 + d * alpha) / (d + 1.0)) * b
        sigma = 2.0 * (1.0 + d * alpha) / ((d + 1.0) * (1.0 + alpha))
        delta = d * d * (1.0 - alpha * alpha) / (d * d - 1.0)
        P -= sigma * np.outer(b, b)
        P *= delta
        if it % 64 == 0:
            P = 0.5 * (P + P.T)
    return done(max_iters, False)


@dataclass(frozen=True, eq=False)
class PiecewiseMax:
    """``max_k  quad_k ||x||^2 + linear_k . x + const_k`` with ``quad_k >= 0``.

    Covers both ball functions ``||x - c||^2 - r^2`` and affine functions.
    Ties in the max go to the lowest index, which fixes the subgradient.
    """

    quad: np.ndarray
    linear: np.ndarray
    const: np.ndarray

    def __post_init__(self):
        q = np.atleast_1d(np.asarray(self.quad, dtype=float))
        L = np.atleast_2d(np.asarray(self.linear, dtype=float))
        c = np.atleast_1d(np.asarray(self.const, dtype=float))
        if not (q.shape[0] == L.shape[0] == c.shape[0]) or q.shape[0] == 0:
            raise ValueError("term arrays must be nonempty and of equal length")
        if np.any(q < 0):
            raise ValueError("quadratic coefficients must be nonnegative")
        object.__setattr__(self, "quad", q)
        object.__setattr__(self, "linear", L)
        object.__setattr__(self, "const", c)

    @property
    def dimension(self) -> int:
        return self.linear.shape[1]

    def __len__(self):
        return self.quad.shape[0]

    @classmethod
    def balls(cls, centers, radii) -> "PiecewiseMax":
        """Terms ``||x - c_k||^2 - r_k^2``."""
        C = np.atleast_2d(np.asarray(centers, dtype=float))
        r = np.atleast_1d(np.asarray(radii, dtype=float))
        return cls(np.ones(len(C)), -2.0 * C, np.einsum("ij,ij->i", C, C) - r * r)

    @classmethod
    def affine(cls, normals, offsets) -> "PiecewiseMax":
        A = np.atleast_2d(np.asarray(normals, dtype=float))
        return cls(np.zeros(len(A)), A, offsets)

    @classmethod
    def stack(cls, *parts: "PiecewiseMax") -> "PiecewiseMax":
        return cls(np.concatenate([p.quad for p in parts]),
                   np.vstack([p.linear for p in parts]),
                   np.concatenate([p.const for p in parts]))

    def terms(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.quad * (x @ x) + self.linear @ x + self.const

    def __call__(self, x) -> float:
        return float(np.max(self.terms(x)))

    def value_and_subgradient(self, x):
        vals = self.terms(x)
        k = int(np.argmax(vals))
        return float(vals[k]), 2.0 * self.quad[k] * np.asarray(x, float) + self.linear[k]


def minimize_piecewise_max(terms: PiecewiseMax, config: SolverConfig | None = None,
                           center=None, radius: float | None = None) -> EllipsoidResult:
    """Minimize ``terms`` over the ball of ``radius`` (default ``initial_radius``) about ``center``.

    A budget stop is reported through ``converged=False``; ``x``/``value``
    then hold the best point seen.
    """
    config = config or SolverConfig()
    n = terms.dimension
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    radius = config.initial_radius if radius is None else float(radius)
    return ellipsoid_minimize(terms.value_and_subgradient, None, center,
                              radius * radius * np.eye(n), config.tol_obj,
                              config.max_iters)


def hull_membership(centers, C0, config: SolverConfig | None = None) -> HullStatus:
    """Decide whether ``C0`` lies in the convex hull of ``centers``.

    Away-step Frank-Wolfe on ``min ||V^T lam - C0||^2`` over the simplex.
    Each iterate ``p`` gives the candidate separator ``d = C0 - p``; outside
    requires some ``d`` to separate with a margin above tolerance, and the
    iteration then runs on to the nearest point so the widest-margin
    direction is returned.  Inside is declared when ``p`` is within tolerance of ``C0``.  If the
    budget runs out first the LP oracle settles the question.
    """
    config = config or SolverConfig()
    V = np.atleast_2d(np.asarray(centers, dtype=float))
    C0 = np.asarray(C0, dtype=float)
    if V.shape[1] != C0.shape[0]:
        raise DimensionMismatch("centers and C0 have different dimensions")
    m = V.shape[0]
    spread = float(np.max(np.linalg.norm(V - C0, axis=1)))
    tol = config.tol_feas * max(1.0, spread)

    j0 = int(np.argmin(np.linalg.norm(V - C0, axis=1)))
    lam = np.zeros(m)
    lam[j0] = 1.0
    p = V[j0].copy()
    separator = None
    for _ in range(config.hull_max_iters):
        d = C0 - p
        dn = np.linalg.norm(d)
        if dn <= tol:
            lam /= lam.sum()
            return HullStatus(True, weights=lam, residual=float(np.linalg.norm(lam @ V - C0)))
        proj = V @ d
        s = int(np.argmax(proj))
        margin = (d @ C0 - proj[s]) / dn
        if margin > tol:
            if separator is None or margin > separator[1]:
                separator = (d / dn, float(margin))
            # keep going towards the nearest point, whose direction has the widest margin
            if proj[s] - d @ p <= 1e-9 * dn * max(dn, spread):
                break
        active = np.flatnonzero(lam > 0)
        a = int(active[np.argmin(proj[active])])
        gap_fw = proj[s] - d @ p
        gap_away = d @ p - proj[a]
        if gap_fw >= gap_away or lam[a] >= 1.0:
            r, gmax, away = V[s] - p, 1.0, False
        else:
            r, gmax, away = p - V[a], lam[a] / (1.0 - lam[a]), True
        rr = r @ r
        if rr == 0.0:
            break
        gamma = min(max((d @ r) / rr, 0.0), gmax)
        if away:
            lam *= 1.0 + gamma
            lam[a] -= gamma
            if gamma == gmax:
                lam[a] = 0.0
        else:
            lam *= 1.0 - gamma
            lam[s] += gamma
        p = p + gamma * r
    if separator is not None:
        return HullStatus(False, direction=separator[0], margin=separator[1])
    return hull_membership_lp(V, C0, config)


@dataclass(frozen=True, eq=False)
class FeasibilityResult:
    feasible: bool
    point: np.ndarray | None
    value: float
    lower_bound: float


def _bounding_ball(Q: BallIntersection):
    k = int(np.argmin(Q.radii))
    return Q.centers[k], float(Q.radii[k])


def intersection_feasible(Q: BallIntersection, L: LevelPolytope,
                          config: SolverConfig | None = None) -> FeasibilityResult:
    """Is ``Q`` intersected with the level polytope ``L`` nonempty?

    Minimizes ``phi = max(h_Q, facet values of L)`` over the smallest ball
    of ``Q``.  Raises :class:`SolverIndeterminate` when the budget runs out
    with the sign of the minimum still undecided.
    """
    config = config or SolverConfig()
    if Q.dimension != L.base.dimension:
        raise DimensionMismatch("ball intersection and level polytope dimensions differ")
    phi = PiecewiseMax.stack(PiecewiseMax.balls(Q.centers, Q.radii),
                             PiecewiseMax.affine(L.base.normals, L.base.offsets))
    c, r = _bounding_ball(Q)
    tf = config.tol_feas
    res = ellipsoid_minimize(
        phi.value_and_subgradient, None, c, (r * r) * np.eye(Q.dimension),
        config.tol_obj, config.max_iters,
        stop=lambda best, lb: best <= tf or lb > tf)
    if res.value <= tf:
        return FeasibilityResult(True, res.x, res.value, res.lower_bound)
    if res.lower_bound > tf or res.converged:
        return FeasibilityResult(False, None, res.value, res.lower_bound)
    raise SolverIndeterminate(
        f"feasibility undecided after {res.iterations} iterations "
        f"(best {res.value:.3e}, bound {res.lower_bound:.3e})")


@dataclass(frozen=True, eq=False)
class MaxDistResult:
    """Largest distance from ``C0`` over a ball intersection.

    ``R`` is the reported value, ``R_upper`` a value known to be at least
    the supremum (bisection upper end, or the certified bound of a direct
    solve), and ``y`` the maximizing point.
    """

    R: float
    y: np.ndarray
    R_upper: float
    steps: int


def maxdist_outside_hull(Q: BallIntersection, frame: CircumscribedFrame, R_bracket,
                         config: SolverConfig | None = None) -> MaxDistResult:
    """Bisect on the feasibility of ``Q`` intersected with the level polytope at ``R``.

    Requires ``C0`` outside the hull of the centers of ``Q``, ``R_lo``
    feasible and ``R_hi`` infeasible.  Stops once the bracket is shorter than
    ``tol_obj * max(1, R_hi)``.
    """
    config = config or SolverConfig()
    lo, hi = (float(v) for v in R_bracket)
    if not 0.0 <= lo <= hi:
        raise BracketError(f"bad bracket [{lo}, {hi}]")
    status = hull_membership(Q.centers, frame.C0, config)
    if status.inside:
        raise ValueError("C0 lies in the convex hull of the ball centers")
    first = intersection_feasible(Q, build_level_polytope(Q, frame, lo), config)
    if not first.feasible:
        raise BracketError(f"lower end R={lo} is infeasible")
    y = first.point
    if hi == lo:
        return MaxDistResult(lo, y, hi, 0)
    if intersection_feasible(Q, build_level_polytope(Q, frame, hi), config).feasible:
        raise BracketError(f"upper end R={hi} is feasible")
    steps = 0
    while hi - lo > config.tol_obj * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        res = intersection_feasible(Q, build_level_polytope(Q, frame, mid), config)
        if res.feasible:
            lo, y = mid, res.point
        else:
            hi = mid
        steps += 1
    return MaxDistResult(lo, y, hi, steps)


def maxdist_direct(Q: BallIntersection, C0, config: SolverConfig | None = None) -> MaxDistResult:
    """One constrained solve for the farthest point of ``Q`` from ``C0``.

    Maximizes the concave function ``min_k ||x - C0||^2 - ||x - C_k||^2 + r_k^2``
    over ``Q``.  That maximum is never below the largest squared distance,
    and equals it when ``C0`` is outside the hull of the centers.
    ``R_upper`` comes from the ellipsoid's lower bound.
    """
    config = config or SolverConfig()
    C0 = np.asarray(C0, dtype=float)
    Cs, r = Q.centers, Q.radii
    # -(g - h_k) is affine in x
    neg = PiecewiseMax.affine(-2.0 * (Cs - C0),
                              np.einsum("ij,ij->i", Cs, Cs) - r * r - C0 @ C0)
    h = PiecewiseMax.balls(Cs, r)
    c, rad = _bounding_ball(Q)
    scale = float(np.max(np.linalg.norm(Cs - C0, axis=1)) + rad) ** 2
    res = ellipsoid_minimize(neg.value_and_subgradient, h.value_and_subgradient,
                             c, (rad * rad) * np.eye(Q.dimension),
                             config.tol_obj * max(1.0, scale), config.max_iters)
    if res.x is None:
        raise SolverIndeterminate("no feasible point of the ball intersection found")
    R = float(np.linalg.norm(res.x - C0))
    upper = float(np.sqrt(max(-res.lower_bound, 0.0)))
    return MaxDistResult(R, res.x, max(upper, R), res.iterations)


def minimum_enclosing_ball(points, config: SolverConfig | None = None):
    """Smallest ball containing ``points``: returns ``(center, radius)``.

    The center minimizes ``max_k ||x - p_k||^2``.  The radius is recomputed
    from the center found, so the ball always contains every point.
    """
    config = config or SolverConfig()
    V = np.atleast_2d(np.asarray(points, dtype=float))
    c0 = V.mean(axis=0)
    r0 = float(np.max(np.linalg.norm(V - c0, axis=1)))
    if r0 == 0.0:
        return c0, 0.0
    res = minimize_piecewise_max(PiecewiseMax.balls(V, np.zeros(len(V))), config,
                                 center=c0, radius=r0 * (1.0 + 1e-6))
    c = res.x
    return c, float(np.max(np.linalg.norm(V - c, axis=1)))
