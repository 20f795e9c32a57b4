"""Certified bounds on the farthest distance from a point to an H-polytope."""

from .config import SolverConfig
from .errors import (BracketError, CoverError, DegenerateCenter, DimensionMismatch,
                     FarpointError, FrameError, InfeasibleRadius, InstanceError, LPError,
                     SolverIndeterminate, BudgetExceeded)
from .geometry import (Ball, BallIntersection, CircumscribedFrame, HPolytope, eval_g,
                       eval_h, polytope_contains)
from .ball_cover import build_ball_cover, epsilon_bound
from .level_polytope import LevelPolytope, build_level_polytope
from .pipeline import BoundsReport, build_chain, solve
from .oracle import brute_maxdist, enumerate_vertices, hypercube_farthest, ssp_brute

__all__ = [
    "SolverConfig",
    "FarpointError", "DimensionMismatch", "CoverError", "FrameError", "DegenerateCenter",
    "SolverIndeterminate", "BracketError", "InfeasibleRadius", "LPError",
    "BudgetExceeded", "InstanceError",
    "HPolytope", "Ball", "BallIntersection", "CircumscribedFrame",
    "eval_h", "eval_g", "polytope_contains",
    "build_ball_cover", "epsilon_bound", "LevelPolytope", "build_level_polytope",
    "BoundsReport", "build_chain", "solve",
    "brute_maxdist", "enumerate_vertices", "hypercube_farthest", "ssp_brute",
]

__version__ = "0.1.0"
