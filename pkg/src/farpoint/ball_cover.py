"""One ball per facet, each leaving the facet's imprint on the circumscribing sphere.

For facet ``i`` with unit outward normal ``a_i`` and ``s_i`` the signed
distance of ``C`` to the facet hyperplane (negative when ``C`` is inside),
the ball is centered on the inward normal line through ``C``::

    C_i = C - rho_i * a_i
    r_i^2 = ||C_i - P_i||^2 + (R^2 - s_i^2)

where ``P_i`` is the foot of ``C`` on the hyperplane.  With this choice a
point of the sphere ``||x - C|| = R`` lies in the ball exactly when it
satisfies the facet inequality, so ``P`` is contained in the intersection of
the balls and every vertex of ``P`` on the sphere stays on its boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoverError
from .geometry import BallIntersection, CircumscribedFrame, HPolytope


@dataclass(frozen=True, eq=False)
class FacetBallSpec:
    facet_index: int
    center: np.ndarray
    radius: float
    foot_point: np.ndarray
    imprint_radius_sq: float

    @property
    def center_to_foot(self) -> float:
        return float(np.linalg.norm(self.center - self.foot_point))


def _facet_geometry(P: HPolytope, i: int, frame: CircumscribedFrame):
    if not 0 <= i < P.num_facets:
        raise IndexError(f"facet index {i} out of range")
    if P.dimension != frame.dimension:
        raise CoverError("polytope and frame dimensions differ", i)
    a = P.normals[i] / np.linalg.norm(P.normals[i])
    s = float(P.signed_distances(frame.C)[i])
    foot = frame.C - s * a
    imprint = frame.R_circ ** 2 - s * s
    return a, s, foot, imprint


def facet_ball_fixed_radius(P: HPolytope, i: int, frame: CircumscribedFrame,
                            r: float) -> FacetBallSpec:
    """Ball of prescribed radius ``r`` for facet ``i`` (constant-radius construction)."""
    a, s, foot, imprint = _facet_geometry(P, i, frame)
    if not s < 0.0:
        raise CoverError("C is not strictly inside the facet", i)
    if imprint < 0.0:
        raise CoverError("facet does not meet the circumscribing ball", i)
    dist_sq = r * r - imprint
    if not dist_sq > 0.0:
        raise CoverError(f"radius {r} too small for imprint radius^2 {imprint}", i)
    center = foot - np.sqrt(dist_sq) * a
    return FacetBallSpec(i, center, float(r), foot, imprint)


def facet_ball_fixed_rho(P: HPolytope, i: int, frame: CircumscribedFrame,
                         strict: bool = True) -> FacetBallSpec:
    """Ball for facet ``i`` with center at distance ``rho`` from ``C``.

    With ``strict=False`` the construction is also applied to facets that
    leave ``C`` outside or miss the circumscribing ball; the containment and
    imprint properties still hold for them (the imprint is then empty).  The
    iteration in :mod:`farpoint.pipeline` relies on that.
    """
    a, s, foot, imprint = _facet_geometry(P, i, frame)
    if strict:
        if not s < 0.0:
            raise CoverError("C is not strictly inside the facet", i)
        if imprint < 0.0:
            raise CoverError("facet does not meet the circumscribing ball", i)
    rho = frame.rho
    center = frame.C - rho * a
    # (rho - s)^2 + R^2 - s^2, expanded to avoid cancellation when rho is large
    r_sq = rho * rho - 2.0 * rho * s + frame.R_circ ** 2
    if not r_sq > 0.0:
        raise CoverError("facet lies too far beyond the circumscribing ball", i)
    return FacetBallSpec(i, center, float(np.sqrt(r_sq)), foot, imprint)


def cover_specs(P: HPolytope, frame: CircumscribedFrame, method: str = "fixed_rho",
                radius: float | None = None, strict: bool = True) -> list[FacetBallSpec]:
    if method == "fixed_rho":
        return [facet_ball_fixed_rho(P, i, frame, strict=strict) for i in range(P.num_facets)]
    if method == "fixed_radius":
        if radius is None:
            raise ValueError("fixed_radius construction needs a radius")
        return [facet_ball_fixed_radius(P, i, frame, radius) for i in range(P.num_facets)]
    raise ValueError(f"unknown cover method {method!r}")


def build_ball_cover(P: HPolytope, frame: CircumscribedFrame, method: str = "fixed_rho",
                     radius: float | None = None, strict: bool = True) -> BallIntersection:
    """Intersection of one ball per facet of ``P``, in facet order."""
    specs = cover_specs(P, frame, method, radius, strict)
    return BallIntersection.from_arrays([sp.center for sp in specs],
                                        [sp.radius for sp in specs])


def epsilon_bound(spec: FacetBallSpec) -> float:
    """How far the ball bulges past its facet hyperplane: ``r - ||C_i - P_i||``."""
    # written as a quotient so it stays accurate when r is large
    return float(spec.imprint_radius_sq / (spec.radius + spec.center_to_foot))
