"""Value types for polytopes, balls and the query frame.

Conventions used throughout the package:

* an H-polytope is ``{x : A @ x + b <= 0}``; rows of ``A`` are outward
  facet normals and are stored exactly as given (not normalized);
* ``h(x) = max_k ||x - C_k||^2 - r_k^2`` is the defining function of an
  intersection of balls, ``g(x) = ||x - C0||^2`` is the squared distance
  to the query point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, FrameError

DEFAULT_TOL = 1e-9


def _frozen(a, ndim, name):
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _as_point(x, n):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionMismatch(f"expected a point of dimension {n}, got shape {x.shape}")
    return x


@dataclass(frozen=True, eq=False)
class HPolytope:
    """Polyhedron ``{x : normals @ x + offsets <= 0}``."""

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        A = _frozen(self.normals, 2, "normals")
        b = _frozen(self.offsets, 1, "offsets")
        if A.shape[0] != b.shape[0]:
            raise DimensionMismatch(
                f"{A.shape[0]} normals but {b.shape[0]} offsets")
        if A.shape[0] == 0:
            raise ValueError("polytope needs at least one facet")
        if np.any(np.linalg.norm(A, axis=1) <= 0.0):
            raise ValueError("every facet normal must be nonzero")
        object.__setattr__(self, "normals", A)
        object.__setattr__(self, "offsets", b)

    @property
    def dimension(self) -> int:
        return self.normals.shape[1]

    @property
    def num_facets(self) -> int:
        return self.normals.shape[0]

    def normal_norms(self) -> np.ndarray:
        return np.linalg.norm(self.normals, axis=1)

    def unit_normals(self) -> np.ndarray:
        return self.normals / self.normal_norms()[:, None]

    def values(self, x) -> np.ndarray:
        """Raw constraint values ``A @ x + b`` (nonpositive inside)."""
        return self.normals @ _as_point(x, self.dimension) + self.offsets

    def signed_distances(self, x) -> np.ndarray:
        """Euclidean signed distances of ``x`` to each facet hyperplane."""
        return self.values(x) / self.normal_norms()

    @classmethod
    def box(cls, lower: Sequence[float], upper: Sequence[float]) -> "HPolytope":
        lo = np.asarray(lower, dtype=float)
        hi = np.asarray(upper, dtype=float)
        n = lo.size
        eye = np.eye(n)
        return cls(np.vstack([eye, -eye]), np.concatenate([-hi, lo]))

    @classmethod
    def hypercube(cls, n: int) -> "HPolytope":
        """The unit cube ``[0, 1]^n``; facets ``x_j <= 1`` first, then ``x_j >= 0``."""
        return cls.box(np.zeros(n), np.ones(n))


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center, 1, "center"))
        r = float(self.radius)
        if not r > 0.0:
            raise ValueError(f"ball radius must be positive, got {r}")
        object.__setattr__(self, "radius", r)


@dataclass(frozen=True, eq=False)
class BallIntersection:
    """Intersection of closed balls; also exposes stacked center/radius arrays."""

    balls: tuple

    def __post_init__(self):
        balls = tuple(self.balls)
        if not balls:
            raise ValueError("a ball intersection needs at least one ball")
        n = balls[0].center.shape[0]
        if any(b.center.shape[0] != n for b in balls):
            raise DimensionMismatch("balls of different dimensions")
        object.__setattr__(self, "balls", balls)
        centers = np.array([b.center for b in balls])
        radii = np.array([b.radius for b in balls])
        centers.setflags(write=False)
        radii.setflags(write=False)
        object.__setattr__(self, "_centers", centers)
        object.__setattr__(self, "_radii", radii)

    @classmethod
    def from_arrays(cls, centers, radii) -> "BallIntersection":
        return cls(tuple(Ball(c, r) for c, r in zip(np.asarray(centers, float), radii)))

    @property
    def centers(self) -> np.ndarray:
        return self._centers

    @property
    def radii(self) -> np.ndarray:
        return self._radii

    @property
    def dimension(self) -> int:
        return self._centers.shape[1]

    def __len__(self):
        return len(self.balls)

    def ball_values(self, x) -> np.ndarray:
        x = _as_point(x, self.dimension)
        diff = x - self._centers
        return np.einsum("ij,ij->i", diff, diff) - self._radii ** 2


@dataclass(frozen=True, eq=False)
class CircumscribedFrame:
    """Circumscribing ball ``B(C, R_circ)``, query point ``C0`` and center-sphere radius ``rho``."""

    C: np.ndarray
    R_circ: float
    C0: np.ndarray
    rho: float

    def __post_init__(self):
        C = _frozen(self.C, 1, "C")
        C0 = _frozen(self.C0, 1, "C0")
        if C.shape != C0.shape:
            raise DimensionMismatch("C and C0 have different dimensions")
        R = float(self.R_circ)
        rho = float(self.rho)
        if not R > 0.0:
            raise FrameError(f"R_circ must be positive, got {R}")
        if not rho > R:
            raise FrameError(f"rho ({rho}) must exceed R_circ ({R})")
        if np.array_equal(C, C0):
            raise FrameError("C0 must differ from C")
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "C0", C0)
        object.__setattr__(self, "R_circ", R)
        object.__setattr__(self, "rho", rho)

    @property
    def dimension(self) -> int:
        return self.C.shape[0]

    @property
    def offset(self) -> np.ndarray:
        """``C0 - C``."""
        return self.C0 - self.C

    def trivial_upper_bound(self) -> float:
        """Farthest distance from ``C0`` to the circumscribing ball."""
        return float(np.linalg.norm(self.C0 - self.C) + self.R_circ)

    def with_rho(self, rho: float) -> "CircumscribedFrame":
        return CircumscribedFrame(self.C, self.R_circ, self.C0, rho)


def eval_h(Q: BallIntersection, x) -> float:
    """``max_k ||x - C_k||^2 - r_k^2``; nonpositive exactly on ``Q``."""
    return float(np.max(Q.ball_values(x)))


def eval_g(frame: CircumscribedFrame, x) -> float:
    d = _as_point(x, frame.dimension) - frame.C0
    return float(d @ d)


def polytope_contains(P: HPolytope, x, tol: float = DEFAULT_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return bool(np.all(P.values(x) <= tol))
