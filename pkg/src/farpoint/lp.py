"""Dense two-phase tableau simplex with Bland's rule.

Sized for the small-to-medium problems this package produces (a few hundred
rows).  Rows are equilibrated before pivoting; free variables are split into
positive and negative parts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .config import SolverConfig
from .geometry import HPolytope

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_PIVOT_TOL = 1e-11


@dataclass(frozen=True, eq=False)
class LPResult:
    status: str
    x: np.ndarray | None = None
    objective: float | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass(frozen=True, eq=False)
class HullStatus:
    """Membership of a point in the convex hull of finitely many centers.

    ``weights`` are convex coefficients when inside; ``direction`` is a unit
    vector with ``direction . C0 >= max_k direction . C_k + margin`` when
    outside.  ``residual`` is ``||sum_k weights_k C_k - C0||`` for inside
    answers.
    """

    inside: bool
    weights: np.ndarray | None = None
    direction: np.ndarray | None = None
    margin: float = 0.0
    residual: float = 0.0


def _pivot(T, r, col):
    row = T[r] / T[r, col]
    T -= np.outer(T[:, col], row)
    T[r] = row


def _run_simplex(T, basis, allowed, max_pivots):
    """Maximize over tableau ``T`` whose last row holds negated reduced costs.

    Returns ``"optimal"`` or ``"unbounded"``.  Bland's rule: smallest eligible
    entering index, ties in the ratio test broken by smallest basic index.
    """
    m = T.shape[0] - 1
    for _ in range(max_pivots):
        obj = T[-1, :-1]
        candidates = np.flatnonzero((obj < -_PIVOT_TOL) & allowed)
        if candidates.size == 0:
            return OPTIMAL
        col = int(candidates[0])
        column = T[:m, col]
        pos = column > _PIVOT_TOL
        if not np.any(pos):
            return UNBOUNDED
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / column[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + _PIVOT_TOL * max(1.0, abs(best)))
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, col)
        basis[r] = col
    raise RuntimeError("simplex pivot budget exhausted")


def solve_standard_form(A, b, c, tol_feas=1e-9, max_pivots=100_000, basis=None):
    """Maximize ``c . x`` subject to ``A x = b``, ``x >= 0``.

    Returns ``(status, x)``.  ``basis`` may name, per row, a column equal to
    that row's unit vector (``-1`` for none); phase one then only adds
    artificial variables for the remaining rows.  Redundant equality rows
    are dropped when their artificial cannot be pivoted out.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, N = A.shape
    basis = [-1] * m if basis is None else [int(j) for j in basis]

    scale = np.max(np.abs(A), axis=1)
    scale[scale == 0] = 1.0
    A /= scale[:, None]
    b /= scale
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    for i in range(m):
        j = basis[i]
        if j >= 0 and not (A[i, j] == 1.0 and np.count_nonzero(A[:, j]) == 1):
            basis[i] = -1

    art_rows = [i for i in range(m) if basis[i] < 0]
    n_art = len(art_rows)
    T = np.zeros((m + 1, N + n_art + 1))
    T[:m, :N] = A
    T[:m, -1] = b
    for k, i in enumerate(art_rows):
        T[i, N + k] = 1.0
        basis[i] = N + k
    if n_art:
        T[-1, :N] = -A[art_rows].sum(axis=0)
        T[-1, -1] = -b[art_rows].sum()
        _run_simplex(T, basis, np.ones(N + n_art, dtype=bool), max_pivots)
        if -T[-1, -1] > tol_feas * max(1.0, np.abs(b).max(initial=0.0)):
            return INFEASIBLE, None

    # drive artificials out of the basis
    keep = np.ones(m, dtype=bool)
    for r in range(m):
        if basis[r] >= N:
            nz = np.flatnonzero(np.abs(T[r, :N]) > 1e-9)
            if nz.size:
                _pivot(T, r, int(nz[0]))
                basis[r] = int(nz[0])
            else:
                keep[r] = False
    rows = np.flatnonzero(keep)
    T = np.vstack([T[rows], T[-1:]])
    basis = [basis[r] for r in rows]
    T = np.delete(T, np.s_[N:N + n_art], axis=1)

    T[-1, :] = 0.0
    T[-1, :N] = -c
    for r, j in enumerate(basis):
        if T[-1, j] != 0.0:
            T[-1] -= T[-1, j] * T[r]
    status = _run_simplex(T, basis, np.ones(N, dtype=bool), max_pivots)
    if status == UNBOUNDED:
        return UNBOUNDED, None
    x = np.zeros(N)
    for r, j in enumerate(basis):
        x[j] = T[r, -1]
    return OPTIMAL, x


def _maximize_inequality(c, A, ub, config):
    """Maximize ``c . x`` over ``A x <= ub`` with ``x`` free."""
    m, n = A.shape
    # equilibrate here so the slack columns stay unit vectors
    scale = np.max(np.abs(A), axis=1)
    scale[scale == 0] = 1.0
    A = A / scale[:, None]
    ub = np.asarray(ub, dtype=float) / scale
    S = np.hstack([A, -A, np.eye(m)])
    obj = np.concatenate([c, -c, np.zeros(m)])
    status, z = solve_standard_form(S, ub, obj, config.tol_feas,
                                    basis=range(2 * n, 2 * n + m))
    if status != OPTIMAL:
        return LPResult(status)
    x = z[:n] - z[n:2 * n]
    return LPResult(OPTIMAL, x, float(c @ x))


def lp_maximize(c, P: HPolytope, config: SolverConfig | None = None) -> LPResult:
    """Maximize ``c . x`` over ``P``; the maximizer returned is a basic solution."""
    config = config or SolverConfig()
    c = np.asarray(c, dtype=float)
    if c.shape != (P.dimension,):
        raise ValueError("objective dimension does not match the polytope")
    return _maximize_inequality(c, P.normals, -P.offsets, config)


def feasible_point(P: HPolytope, config: SolverConfig | None = None,
                   centered: bool = True, slack_cap: float = 1e6) -> LPResult:
    """Point of ``P`` with the largest uniform facet slack (a Chebyshev center).

    ``objective`` holds the slack.  When the slack-maximizing set is not a
    single point and ``centered`` is set, the point is moved to the middle
    of that set's coordinate extents (2n further LPs).
    """
    config = config or SolverConfig()
    n = P.dimension
    norms = P.normal_norms()
    A = np.hstack([P.normals, norms[:, None]])
    cap_row = np.zeros(n + 1)
    cap_row[n] = 1.0
    A = np.vstack([A, cap_row])
    ub = np.concatenate([-P.offsets, [slack_cap]])
    obj = np.zeros(n + 1)
    obj[n] = 1.0
    res = _maximize_inequality(obj, A, ub, config)
    if not res.optimal:
        return LPResult(INFEASIBLE)
    tau = res.objective
    if tau < -config.tol_feas:
        return LPResult(INFEASIBLE)
    x = res.x[:n]
    if centered and tau > 0:
        x = _center_on_face(P, tau - config.tol_feas * max(1.0, tau), x, config)
    return LPResult(OPTIMAL, x, float(tau))


def _center_on_face(P, tau, x0, config):
    norms = P.normal_norms()
    ub = -P.offsets - tau * norms
    pts = []
    for j, sign in itertools.product(range(P.dimension), (1.0, -1.0)):
        c = np.zeros(P.dimension)
        c[j] = sign
        r = _maximize_inequality(c, P.normals, ub, config)
        if not r.optimal:
            return x0
        pts.append(r.x)
    pts = np.array(pts)
    mid = 0.5 * (pts[0::2].diagonal() + pts[1::2].diagonal())
    if np.all(P.normals @ mid <= ub + config.tol_feas):
        return mid
    return pts.mean(axis=0)


def hull_membership_lp(centers, C0, config: SolverConfig | None = None) -> HullStatus:
    """Decide ``C0 in conv(centers)`` with a phase-one LP on convex weights."""
    config = config or SolverConfig()
    V = np.asarray(centers, dtype=float)
    C0 = np.asarray(C0, dtype=float)
    m, n = V.shape
    A_eq = np.vstack([V.T, np.ones((1, m))])
    b_eq = np.concatenate([C0, [1.0]])
    status, lam = solve_standard_form(A_eq, b_eq, np.zeros(m), config.tol_feas)
    if status == OPTIMAL:
        lam = np.clip(lam, 0.0, None)
        lam /= lam.sum()
        return HullStatus(True, weights=lam, residual=float(np.linalg.norm(lam @ V - C0)))

    # separating direction: maximize d.C0 - t  s.t.  d.C_k <= t, |d_i| <= 1
    rows = np.hstack([V, -np.ones((m, 1))])
    box = np.hstack([np.vstack([np.eye(n), -np.eye(n)]), np.zeros((2 * n, 1))])
    A = np.vstack([rows, box])
    ub = np.concatenate([np.zeros(m), np.ones(2 * n)])
    obj = np.concatenate([C0, [-1.0]])
    res = _maximize_inequality(obj, A, ub, config)
    d = res.x[:n]
    norm = np.linalg.norm(d)
    d = d / norm
    margin = float(d @ C0 - np.max(V @ d))
    return HullStatus(False, direction=d, margin=margin)
