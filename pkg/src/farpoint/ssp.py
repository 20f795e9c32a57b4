"""Subset-sum instances as farthest-point problems.

On the unit cube ``x.(x - 1) <= 0``, so with ``C0 = (1 - beta S) / 2``

    ||x - C0||^2 - ||C0||^2 = x.(x - 1) + beta S.x <= beta T

over ``P = {S.x <= T} & [0, 1]^n``, with equality exactly at 0/1 points
hitting the target.  An upper bound below ``beta T + ||C0||^2`` therefore
rules out a solution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import SolverConfig
from .convex_solvers import minimum_enclosing_ball
from .geometry import CircumscribedFrame, HPolytope

ROUND_TOL = 1e-6
CERT_TOL = 1e-7
MEB_MAX_N = 10
FRAMES = ("auto", "cube", "meb")


@dataclass(frozen=True, eq=False)
class SSPInstance:
    S: np.ndarray
    T: int
    beta: float
    P: HPolytope
    C0: np.ndarray
    threshold_sq: float
    frame: CircumscribedFrame

    @property
    def n(self) -> int:
        return self.S.shape[0]

    def objective(self, x) -> float:
        """``x.(x - 1) + beta S.x``."""
        x = np.asarray(x, dtype=float)
        return float(x @ (x - 1.0) + self.beta * (self.S @ x))


def ssp_vertices(S, T) -> np.ndarray:
    """Vertices of ``{S.x <= T} & [0, 1]^n``.

    A single cut of the cube has as vertices the kept cube vertices plus the
    points where the cutting hyperplane crosses cube edges.
    """
    S = np.asarray(S, dtype=float)
    n = S.size
    cube = np.array(list(itertools.product((0.0, 1.0), repeat=n)))
    sums = cube @ S
    pts = [cube[sums <= T]]
    for j in range(n):
        low = cube[cube[:, j] == 0.0]
        lo_sum = low @ S
        cross = (lo_sum < T) & (lo_sum + S[j] > T)
        if np.any(cross):
            q = low[cross].copy()
            q[:, j] = (T - lo_sum[cross]) / S[j]
            pts.append(q)
    return np.unique(np.vstack(pts), axis=0)


def _frame(kind, S, T, C0, rho_factor, config):
    n = S.size
    if kind == "auto":
        kind = "meb" if n <= MEB_MAX_N else "cube"
    if kind == "meb":
        C, Rc = minimum_enclosing_ball(ssp_vertices(S, T), config)
        if Rc <= 0.0 or np.array_equal(C, C0):
            kind = "cube"
    if kind == "cube":
        C, Rc = np.full(n, 0.5), 0.5 * np.sqrt(n)
    elif kind != "meb":
        raise ValueError(f"unknown frame {kind!r}; expected one of {FRAMES}")
    rho = rho_factor * (Rc + float(np.linalg.norm(C0 - C)))
    return CircumscribedFrame(C, Rc, C0, rho)


def build_instance(S, T, beta: float | None = None, frame: str = "auto",
                   rho_factor: float = 4.0,
                   config: SolverConfig | None = None) -> SSPInstance:
    """Encode ``SSP(S, T)``; ``beta`` defaults to ``1 / max(S)``.

    ``frame="cube"`` uses the cube's circumscribed ball, which carries every
    0/1 point.  Since ``x.(x - 1) <= 0`` is exactly that ball, the threshold
    equals the farthest distance over ball-and-cut, and the upper bound can
    approach it but never fall below it: no NO certificate is possible.
    ``frame="meb"`` uses the minimum enclosing ball of the vertices of
    ``P`` instead (exponential in ``n``).  ``"auto"`` picks ``meb`` up to
    ``n = 10``.
    """
    S = np.asarray(S)
    if S.ndim != 1 or S.size == 0:
        raise ValueError("S must be a nonempty vector")
    if not np.all(np.equal(np.mod(S, 1), 0)) or np.any(S <= 0):
        raise ValueError("S must hold positive integers")
    S = S.astype(np.int64)
    T = int(T)
    if T < 0:
        raise ValueError("T must be nonnegative")
    beta = 1.0 / float(S.max()) if beta is None else float(beta)
    if not beta > 0:
        raise ValueError("beta must be positive")
    n = S.size
    eye = np.eye(n)
    P = HPolytope(np.vstack([S.astype(float)[None, :], eye, -eye]),
                  np.concatenate([[-float(T)], -np.ones(n), np.zeros(n)]))
    C0 = 0.5 * (1.0 - beta * S)
    fr = _frame(frame, S, T, C0, rho_factor, config)
    return SSPInstance(S, T, beta, P, C0, float(beta * T + C0 @ C0), fr)


class Verdict(str, Enum):
    CERTIFIED_NO = "certified_no"
    ACHIEVED_YES = "achieved_yes"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class SSPDecision:
    verdict: Verdict
    x: np.ndarray | None = None


def _as_solution(inst: SSPInstance, x):
    if x is None:
        return None
    x = np.asarray(x, dtype=float)
    r = np.rint(x)
    if np.max(np.abs(x - r)) > ROUND_TOL or np.any((r != 0) & (r != 1)):
        return None
    bits = r.astype(np.int64)
    return bits if int(inst.S @ bits) == inst.T else None


def interpret(inst: SSPInstance, report, tol: float = CERT_TOL) -> SSPDecision:
    """Turn a bounds report for ``inst`` into a one-sided SSP answer.

    ``certified_no`` needs the upper bound strictly below the threshold;
    ``achieved_yes`` needs a reported point that rounds to an exact subset.
    """
    for cand in (report.x_lb, report.y_star):
        bits = _as_solution(inst, cand)
        if bits is not None:
            return SSPDecision(Verdict.ACHIEVED_YES, bits)
    if report.upper_bound ** 2 < inst.threshold_sq - tol * max(1.0, inst.threshold_sq):
        return SSPDecision(Verdict.CERTIFIED_NO)
    return SSPDecision(Verdict.INCONCLUSIVE)
