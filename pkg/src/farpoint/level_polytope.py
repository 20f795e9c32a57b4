"""The polytope ``{x : h(x) - g(x) <= -R^2}`` attached to an intersection of balls.

Expanding ``||x - C_k||^2 - r_k^2 - ||x - C0||^2`` cancels the quadratic
terms, so each ball contributes the affine facet::

    2 (C0 - C_k) . x + ||C_k||^2 - r_k^2 - ||C0||^2 + R^2 <= 0
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCenter, DimensionMismatch
from .geometry import BallIntersection, CircumscribedFrame, HPolytope


@dataclass(frozen=True, eq=False)
class LevelPolytope:
    base: HPolytope
    R: float


def build_level_polytope(Q: BallIntersection, frame: CircumscribedFrame,
                         R: float) -> LevelPolytope:
    if R < 0:
        raise ValueError("R must be nonnegative")
    if Q.dimension != frame.dimension:
        raise DimensionMismatch("ball intersection and frame dimensions differ")
    C0 = frame.C0
    centers = Q.centers
    normals = 2.0 * (C0 - centers)
    if np.any(np.linalg.norm(normals, axis=1) == 0.0):
        k = int(np.flatnonzero(np.linalg.norm(normals, axis=1) == 0.0)[0])
        raise DegenerateCenter(f"ball {k} is centered at C0")
    offsets = (np.einsum("ij,ij->i", centers, centers) - Q.radii ** 2
               - C0 @ C0 + R * R)
    return LevelPolytope(HPolytope(normals, offsets), float(R))
