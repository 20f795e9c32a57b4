"""Upper and lower bounds on the largest distance from ``C0`` to a polytope.

The polytope ``P`` is replaced by an intersection of balls ``Q`` whose
centers sit on the sphere ``||x - C|| = rho``.  Passing to the level polytope
of ``Q`` and covering it again moves every center away from ``C0``; after
finitely many rounds ``C0`` leaves the hull of the centers and the farthest
point of the surrogate becomes a convex problem.  The distance parameter
``R`` only enters the radii, so the chain of centers is computed once.

Affine form used internally: with unit normals ``a_j`` each ball of
generation ``i`` is

    ||x - (C - rho a_j)||^2 <= r_j^2   <=>   sigma_j(x) + q(x) / (2 rho) <= 0

where ``sigma_j(x) = a_j . x + e_j + alpha_j R^2`` and ``q(x) = ||x - C||^2 - R_circ^2``.
Moving to the next generation keeps that shape, so the whole chain is a list
of ``(a, e, alpha)`` triples and nothing is rebuilt per ``R``.
"""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from .ball_cover import build_ball_cover
from .config import SolverConfig
from .convex_solvers import MaxDistResult, ellipsoid_minimize, hull_membership
from .errors import (BracketError, DegenerateCenter, FarpointError, FrameError,
                     InfeasibleRadius, LPError, SolverIndeterminate)
from .geometry import (BallIntersection, CircumscribedFrame, HPolytope,
                       polytope_contains)
from .level_polytope import build_level_polytope
from .lp import HullStatus, feasible_point, lp_maximize

DEFAULT_MAX_GENERATIONS = 500
COLLINEAR_TOL = 1e-9
SPHERE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class AffineGeneration:
    """One generation of balls in affine form (see the module docstring)."""

    normals: np.ndarray
    offsets: np.ndarray
    alphas: np.ndarray

    @classmethod
    def from_polytope(cls, P: HPolytope) -> "AffineGeneration":
        norms = P.normal_norms()
        return cls(P.normals / norms[:, None], P.offsets / norms, np.zeros(P.num_facets))

    def centers(self, frame: CircumscribedFrame) -> np.ndarray:
        return frame.C - frame.rho * self.normals

    def sigma(self, x, R_sq: float) -> np.ndarray:
        return self.normals @ x + self.offsets + self.alphas * R_sq

    def signed_distances(self, frame: CircumscribedFrame, R: float) -> np.ndarray:
        """Signed distances of ``C`` to the facets the balls were built from."""
        return self.sigma(frame.C, R * R)

    def radii(self, frame: CircumscribedFrame, R: float) -> np.ndarray:
        s = self.signed_distances(frame, R)
        if np.any(s > frame.R_circ):
            raise InfeasibleRadius(f"R={R}: a facet misses the circumscribing ball")
        rho = frame.rho
        return np.sqrt(rho * rho - 2.0 * rho * s + frame.R_circ ** 2)

    def advance(self, frame: CircumscribedFrame) -> "AffineGeneration":
        rho = frame.rho
        u = frame.C0 - frame.C
        kappa = frame.C @ frame.C - frame.C0 @ frame.C0 - frame.R_circ ** 2
        shifted = self.normals + u / rho
        nu = np.linalg.norm(shifted, axis=1)
        if np.any(nu == 0.0):
            raise DegenerateCenter("a ball center coincides with C0")
        return AffineGeneration(shifted / nu[:, None],
                                (self.offsets + kappa / (2.0 * rho)) / nu,
                                (self.alphas + 1.0 / (2.0 * rho)) / nu)


def advance_centers(centers, frame: CircumscribedFrame) -> np.ndarray:
    """Translate each center by ``C - C0`` and push it back onto the ``rho``-sphere."""
    V = np.atleast_2d(np.asarray(centers, dtype=float))
    diff = V - frame.C0
    norms = np.linalg.norm(diff, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateCenter("a ball center coincides with C0")
    return frame.C + frame.rho * diff / norms[:, None]


def cosine_diagnostic(centers, frame: CircumscribedFrame) -> np.ndarray:
    """Cosine of the angle at ``C`` between ``C0`` and each center."""
    V = np.atleast_2d(np.asarray(centers, dtype=float)) - frame.C
    u = frame.offset
    return (V @ u) / (np.linalg.norm(V, axis=1) * np.linalg.norm(u))


@dataclass(frozen=True, eq=False)
class CenterChain:
    frame: CircumscribedFrame
    affine: tuple
    generations: tuple
    cosines: tuple
    hull_status: tuple
    exit_generation: int | None
    collinear: tuple

    @property
    def exited(self) -> bool:
        return self.exit_generation is not None

    @property
    def last(self) -> int:
        return len(self.generations) - 1

    @property
    def collinear_flagged(self) -> bool:
        return any(bool(np.any(c)) for c in self.collinear)


def build_chain(P: HPolytope, frame: CircumscribedFrame,
                max_generations: int = DEFAULT_MAX_GENERATIONS,
                config: SolverConfig | None = None) -> CenterChain:
    """Advance the centers until ``C0`` leaves their hull or the budget runs out.

    Generation 0 uses one ball per facet of ``P``.  Centers whose direction
    from ``C`` is (anti)parallel to ``C0 - C`` are flagged: for them the
    guaranteed exit no longer applies and only the budget bounds the run.
    """
    if max_generations < 0:
        raise ValueError("max_generations must be nonnegative")
    if P.dimension != frame.dimension:
        raise FrameError("polytope and frame dimensions differ")
    config = config or SolverConfig()
    gen = AffineGeneration.from_polytope(P)
    affine, gens, cosines, statuses, collinear = [], [], [], [], []
    exit_gen = None
    for i in range(max_generations + 1):
        centers = gen.centers(frame)
        cos = cosine_diagnostic(centers, frame)
        status = hull_membership(centers, frame.C0, config)
        affine.append(gen)
        gens.append(centers)
        cosines.append(cos)
        statuses.append(status)
        collinear.append(np.abs(cos) >= 1.0 - COLLINEAR_TOL)
        if not status.inside:
            exit_gen = i
            break
        if i < max_generations:
            gen = gen.advance(frame)
    return CenterChain(frame, tuple(affine), tuple(gens), tuple(cosines),
                       tuple(statuses), exit_gen, tuple(collinear))


def _generation_index(chain: CenterChain, generation):
    if generation is None:
        return chain.exit_generation if chain.exited else chain.last
    if not 0 <= generation <= chain.last:
        raise IndexError(f"generation {generation} not in chain")
    return generation


def surrogate_at(chain: CenterChain, P: HPolytope, frame: CircumscribedFrame,
                 R: float, generation: int | None = None) -> BallIntersection:
    """Rebuild the surrogate at distance parameter ``R`` from scratch.

    Alternates level polytopes and ball covers starting from ``P``.  The
    centers reproduce the chain; only the radii depend on ``R``.  Raises
    :class:`InfeasibleRadius` when a level facet leaves ``C`` farther than
    ``R_circ`` outside, which empties the surrogate inside the circumscribing
    ball.
    """
    k = _generation_index(chain, generation)
    Q = build_ball_cover(P, frame, strict=False)
    for _ in range(k):
        L = build_level_polytope(Q, frame, R)
        if np.any(L.base.signed_distances(frame.C) > frame.R_circ):
            raise InfeasibleRadius(f"R={R}: a level facet misses the circumscribing ball")
        Q = build_ball_cover(L.base, frame, strict=False)
    return Q


class _Surrogate:
    """Evaluation helpers for one affine generation at a fixed frame."""

    def __init__(self, gen: AffineGeneration, frame: CircumscribedFrame):
        self.a, self.e, self.al = gen.normals, gen.offsets, gen.alphas
        self.frame = frame
        self.rho = frame.rho
        self.C = frame.C
        self.Rc_sq = frame.R_circ ** 2
        self.u = frame.C0 - frame.C
        self.kappa = frame.C @ frame.C - frame.C0 @ frame.C0 - self.Rc_sq

    def max_sigma(self, x, s):
        vals = self.a @ x + self.e + self.al * s
        j = int(np.argmax(vals))
        return vals[j], j

    def bounding_radius(self, s) -> float:
        """Radius about ``C`` containing the surrogate at ``R^2 = s``."""
        m, _ = self.max_sigma(self.C, s)
        rho = self.rho
        return rho + math.sqrt(max(rho * rho + self.Rc_sq - 2.0 * rho * m, 0.0))


def surrogate_maxdist(chain: CenterChain, frame: CircumscribedFrame, R: float,
                      config: SolverConfig | None = None,
                      generation: int | None = None) -> MaxDistResult:
    """``g(R)``: the farthest-point value of the surrogate at ``R``.

    Solved as one constrained problem: maximize ``g - h`` over the surrogate.
    Once ``C0`` is outside the hull of the centers this is the farthest
    distance; before that it is still an upper bound on it.
    """
    config = config or SolverConfig()
    k = _generation_index(chain, generation)
    S = _Surrogate(chain.affine[k], frame)
    s = R * R
    rho, C, u = S.rho, S.C, S.u

    def objective(x):
        m, j = S.max_sigma(x, s)
        return 2.0 * u @ x + S.kappa + 2.0 * rho * m, 2.0 * u + 2.0 * rho * S.a[j]

    def constraint(x):
        m, j = S.max_sigma(x, s)
        dx = x - C
        return m + (dx @ dx - S.Rc_sq) / (2.0 * rho), S.a[j] + dx / rho

    r = S.bounding_radius(s)
    scale = frame.trivial_upper_bound() ** 2
    res = ellipsoid_minimize(objective, constraint, C, (2.0 * r * r) * np.eye(frame.dimension),
                             config.tol_obj * scale, config.max_iters)
    if res.infeasible or res.x is None:
        raise InfeasibleRadius(f"surrogate at R={R} is empty")
    if not res.converged:
        raise SolverIndeterminate(f"farthest-point solve at R={R} hit the iteration budget")
    value = math.sqrt(max(-res.value, 0.0))
    upper = math.sqrt(max(-res.lower_bound, 0.0))
    return MaxDistResult(value, res.x, upper, res.iterations)


@dataclass(frozen=True, eq=False)
class FixedPointResult:
    """``upper`` is certified: the fixed point cannot exceed it."""

    upper: float
    value: float
    y_star: np.ndarray
    bracket: tuple
    clamped: bool
    iterations: int
    method: str


def default_bracket(P: HPolytope, frame: CircumscribedFrame,
                    config: SolverConfig | None = None) -> tuple:
    """``(||x0 - C0||, ||C - C0|| + R_circ)`` for a Chebyshev point ``x0`` of ``P``."""
    config = config or SolverConfig()
    fp = feasible_point(P, config, centered=False)
    if not fp.optimal:
        raise LPError("polytope is empty", fp.status)
    lo = max(config.tol_feas, float(np.linalg.norm(fp.x - frame.C0)))
    return lo, frame.trivial_upper_bound()


def fixed_point_upper_bound(chain: CenterChain, P: HPolytope, frame: CircumscribedFrame,
                            bracket=None, config: SolverConfig | None = None,
                            method: str = "joint",
                            generation: int | None = None) -> FixedPointResult:
    """Largest ``R`` in the bracket with ``g(R) >= R``.

    ``method="joint"`` solves for ``R`` and the farthest point together as
    one convex program in ``(x, R^2)``; ``method="bisect"`` bisects on the
    sign of ``g(R) - R``.  Both report the upper end of their final
    uncertainty interval, so the bound stays sound at any tolerance.
    """
    config = config or SolverConfig()
    lo, hi = default_bracket(P, frame, config) if bracket is None else map(float, bracket)
    if not 0.0 <= lo <= hi:
        raise BracketError(f"bad bracket [{lo}, {hi}]")
    k = _generation_index(chain, generation)
    if method == "joint":
        return _joint(chain, frame, k, lo, hi, config)
    if method == "bisect":
        return _bisect(chain, frame, k, lo, hi, config)
    raise ValueError(f"unknown method {method!r}")


def _joint(chain, frame, k, lo, hi, config):
    S = _Surrogate(chain.affine[k], frame)
    n = frame.dimension
    rho, C, u = S.rho, S.C, S.u
    s_lo, s_hi = lo * lo, hi * hi
    a_ext = np.hstack([S.a, S.al[:, None]])

    def M(z):
        vals = a_ext @ z + S.e
        j = int(np.argmax(vals))
        return vals[j], j

    def objective(z):
        g = np.zeros(n + 1)
        g[n] = -1.0
        return -z[n], g

    def constraint(z):
        x, s = z[:n], z[n]
        if s > s_hi:
            g = np.zeros(n + 1)
            g[n] = 1.0
            return s - s_hi, g
        if s < s_lo:
            g = np.zeros(n + 1)
            g[n] = -1.0
            return s_lo - s, g
        m, j = M(z)
        dx = x - C
        # the surrogate itself
        c2 = m + (dx @ dx - S.Rc_sq) / (2.0 * rho)
        # g - h >= R^2
        c1 = 2.0 * rho * m + 2.0 * u @ x + S.kappa + s
        if c2 > 0.0 and c2 * 2.0 * rho >= c1:
            g = np.empty(n + 1)
            g[:n] = S.a[j] + dx / rho
            g[n] = S.al[j]
            return c2, g
        g = np.empty(n + 1)
        g[:n] = 2.0 * rho * S.a[j] + 2.0 * u
        g[n] = 2.0 * rho * S.al[j] + 1.0
        return c1, g

    r = S.bounding_radius(s_lo)
    half = 0.5 * (s_hi - s_lo)
    z0 = np.concatenate([C, [s_lo + half]])
    shape = np.diag(np.concatenate([np.full(n, 2.0 * r * r), [2.0 * half * half + 1e-300]]))
    tol = config.tol_obj * max(1.0, s_hi)
    res = ellipsoid_minimize(objective, constraint, z0, shape, tol, config.max_iters)
    if res.infeasible or res.x is None:
        raise BracketError(f"no fixed point above the lower end R={lo}")
    if not res.converged:
        raise SolverIndeterminate(
            f"fixed-point solve hit the iteration budget (gap {res.gap:.3e})")
    s_best = -res.value
    s_upper = min(-res.lower_bound, s_hi)
    clamped = s_best >= s_hi - tol
    return FixedPointResult(math.sqrt(s_upper), math.sqrt(s_best), res.x[:n],
                            (lo, hi), clamped, res.iterations, "joint")


def _bisect(chain, frame, k, lo, hi, config):
    def g(R):
        try:
            return surrogate_maxdist(chain, frame, R, config, k)
        except InfeasibleRadius:
            return None

    at_lo = g(lo)
    if at_lo is None or at_lo.R_upper < lo:
        raise BracketError(f"g(R) < R at the lower end R={lo}")
    at_hi = g(hi)
    if at_hi is not None and at_hi.R > hi:
        raise BracketError(f"g(R) > R at the upper end R={hi}")
    best, iters = at_lo, at_lo.steps
    while hi - lo > config.tol_obj * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        val = g(mid)
        if val is not None:
            iters += val.steps
        if val is not None and val.R_upper >= mid:
            lo, best = mid, val
        else:
            hi = mid
    return FixedPointResult(hi, lo, best.y, (lo, hi), False, iters, "bisect")


def lower_bound(P: HPolytope, frame: CircumscribedFrame, y_star,
                config: SolverConfig | None = None):
    """Farthest point of ``P`` along the direction from ``C0`` to ``y_star``.

    Returns ``(x_lb, ||x_lb - C0||)``; any point of ``P`` gives a valid lower
    bound, and this one is exact whenever ``y_star`` is a maximizer.
    """
    y = np.asarray(y_star, dtype=float)
    v = y - frame.C0
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ValueError("y_star coincides with C0")
    res = lp_maximize(v / nv, P, config)
    if not res.optimal:
        raise LPError(f"direction LP is {res.status}", res.status)
    return res.x, float(np.linalg.norm(res.x - frame.C0))


def check_circumscribed(P: HPolytope, frame: CircumscribedFrame,
                        config: SolverConfig | None = None, vertex_budget: int = 20_000,
                        directions: int = 64, seed: int = 0) -> None:
    """Raise :class:`FrameError` when ``P`` visibly pokes out of ``B(C, R_circ)``.

    Small instances enumerate all vertices.  Larger ones test LP maximizers
    along the coordinate axes and a few pseudo-random directions, which can
    miss a violation but never reports a false one.
    """
    config = config or SolverConfig()
    tol = 1e-8 * max(1.0, frame.R_circ)
    n, m = P.dimension, P.num_facets
    if math.comb(m, n) <= vertex_budget:
        from .oracle import enumerate_vertices
        pts = enumerate_vertices(P, budget=vertex_budget).vertices
        if len(pts) == 0:
            if not feasible_point(P, config, centered=False).optimal:
                raise FrameError("polytope is empty")
            raise FrameError("polytope has no vertices (unbounded or degenerate)")
    else:
        rng = np.random.default_rng(seed)
        dirs = np.vstack([np.eye(n), -np.eye(n), rng.normal(size=(directions, n))])
        pts = []
        for c in dirs:
            res = lp_maximize(c, P, config)
            if not res.optimal:
                raise FrameError(f"polytope is {res.status}")
            pts.append(res.x)
        pts = np.array(pts)
    dist = np.linalg.norm(pts - frame.C, axis=1)
    worst = int(np.argmax(dist))
    if dist[worst] > frame.R_circ + tol:
        raise FrameError(f"point {pts[worst]} of the polytope lies at distance "
                         f"{dist[worst]:.12g} from C, beyond R_circ={frame.R_circ:.12g}")


@dataclass(frozen=True, eq=False)
class BoundsReport:
    """Bracket on the largest distance from ``C0`` to the polytope.

    ``upper_bound`` holds unconditionally.  ``on_sphere`` is the exactness
    certificate: the surrogate's farthest point lies on the circumscribing
    sphere and in the polytope, so it is a farthest vertex.
    """

    upper_bound: float
    y_star: np.ndarray
    on_sphere: bool
    lower_bound: float
    x_lb: np.ndarray
    generations_used: int
    exit_generation: int | None
    collinear_flagged: bool
    fixed_point: float
    bracket: tuple
    clamped: bool
    method: str
    iterations: int
    residual: float | None = None
    timings: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.on_sphere

    def to_dict(self) -> dict:
        def vec(a):
            return [float(v) for v in a]
        return {
            "upper_bound": float(self.upper_bound),
            "lower_bound": float(self.lower_bound),
            "on_sphere": bool(self.on_sphere),
            "y_star": vec(self.y_star),
            "x_lb": vec(self.x_lb),
            "fixed_point": float(self.fixed_point),
            "generations_used": int(self.generations_used),
            "exit_generation": self.exit_generation,
            "collinear_flagged": bool(self.collinear_flagged),
            "bracket": vec(self.bracket),
            "clamped": bool(self.clamped),
            "method": self.method,
            "iterations": int(self.iterations),
            "residual": None if self.residual is None else float(self.residual),
            "timings": {k: float(v) for k, v in self.timings.items()},
        }


@contextmanager
def _stage(name: str, timings: dict):
    t0 = time.perf_counter()
    try:
        yield
    except FarpointError as exc:
        exc.stage = name
        if exc.args:
            exc.args = (f"[{name}] {exc.args[0]}",) + exc.args[1:]
        raise
    finally:
        timings[name] = time.perf_counter() - t0


def on_sphere_certificate(P: HPolytope, frame: CircumscribedFrame, y,
                          tol: float = SPHERE_TOL) -> bool:
    scale = max(1.0, frame.R_circ)
    dist = float(np.linalg.norm(np.asarray(y) - frame.C))
    if abs(dist - frame.R_circ) > tol * scale:
        return False
    slack = tol * scale * P.normal_norms()
    return bool(np.all(P.values(y) <= slack))


def solve(P: HPolytope, frame: CircumscribedFrame, config: SolverConfig | None = None,
          max_generations: int = DEFAULT_MAX_GENERATIONS, method: str = "joint",
          bracket=None, check_residual: bool = False, check_frame: bool = True) -> BoundsReport:
    """Run the full chain and return certified bounds.

    A chain that never leaves the hull still yields a sound upper bound;
    the report then has ``exit_generation=None``.  Stage failures re-raise
    with the stage name attached as ``exc.stage``.
    """
    config = config or SolverConfig()
    timings: dict = {}
    with _stage("frame", timings):
        if P.dimension != frame.dimension:
            raise FrameError("polytope and frame dimensions differ")
        if check_frame:
            check_circumscribed(P, frame, config)
    with _stage("chain", timings):
        chain = build_chain(P, frame, max_generations, config)
    with _stage("upper_bound", timings):
        fp = fixed_point_upper_bound(chain, P, frame, bracket, config, method)
    with _stage("lower_bound", timings):
        x_lb, lb = lower_bound(P, frame, fp.y_star, config)
    residual = None
    if check_residual:
        with _stage("residual", timings):
            g = surrogate_maxdist(chain, frame, fp.value, config)
            residual = abs(g.R - fp.value)
    k = _generation_index(chain, None)
    return BoundsReport(
        upper_bound=fp.upper, y_star=fp.y_star,
        on_sphere=on_sphere_certificate(P, frame, fp.y_star),
        lower_bound=lb, x_lb=x_lb, generations_used=k,
        exit_generation=chain.exit_generation,
        collinear_flagged=chain.collinear_flagged, fixed_point=fp.value,
        bracket=fp.bracket, clamped=fp.clamped, method=fp.method,
        iterations=fp.iterations, residual=residual, timings=timings)
