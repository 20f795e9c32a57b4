"""Brute-force ground truth for small instances."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded
from .geometry import HPolytope

DEDUP_TOL = 1e-8
FEAS_TOL = 1e-9
DEFAULT_BUDGET = 200_000
SSP_MAX_N = 24


@dataclass(frozen=True, eq=False)
class VertexSet:
    vertices: np.ndarray
    facet_sets: tuple

    def __len__(self):
        return len(self.vertices)


def enumerate_vertices(P: HPolytope, budget: int = DEFAULT_BUDGET,
                       max_dimension: int = 12) -> VertexSet:
    """All basic feasible solutions of ``P``, deduplicated within ``1e-8``.

    Vertices are returned in lexicographic order; ``facet_sets[i]`` is the
    first facet subset that produced vertex ``i``.
    """
    n, m = P.dimension, P.num_facets
    if n > max_dimension:
        raise BudgetExceeded(f"dimension {n} exceeds the enumeration limit {max_dimension}")
    count = math.comb(m, n)
    if count > budget:
        raise BudgetExceeded(f"{count} facet subsets exceed the budget {budget}")
    A, b = P.normals, P.offsets
    scale = P.normal_norms()
    found, sets = [], []
    for S in itertools.combinations(range(m), n):
        idx = list(S)
        M = A[idx]
        if abs(np.linalg.det(M)) < 1e-12 * np.prod(scale[idx]):
            continue
        x = np.linalg.solve(M, -b[idx])
        if np.any(A @ x + b > FEAS_TOL * scale):
            continue
        if any(np.max(np.abs(x - v)) <= DEDUP_TOL for v in found):
            continue
        found.append(x)
        sets.append(S)
    if not found:
        return VertexSet(np.zeros((0, n)), ())
    order = sorted(range(len(found)), key=lambda i: tuple(found[i]))
    return VertexSet(np.array([found[i] for i in order]), tuple(sets[i] for i in order))


def brute_maxdist(P: HPolytope, C0, budget: int = DEFAULT_BUDGET):
    """Farthest vertex from ``C0`` and its distance.

    Ties within ``1e-12`` in squared distance go to the lexicographically
    smallest vertex.
    """
    V = enumerate_vertices(P, budget).vertices
    if len(V) == 0:
        raise ValueError("polytope has no vertices")
    d2 = np.array([d @ d for d in V - np.asarray(C0, dtype=float)])
    best = d2.max()
    k = int(np.flatnonzero(d2 >= best - 1e-12)[0])
    return V[k].copy(), float(np.sqrt(d2[k]))


def hypercube_farthest(C0):
    """Farthest vertex of ``[0, 1]^n``: move each coordinate to the far end."""
    C0 = np.asarray(C0, dtype=float)
    if np.any(C0 < 0) or np.any(C0 > 1):
        raise ValueError("C0 must lie in the unit cube")
    v = (C0 <= 0.5).astype(float)
    return v, float(np.sqrt(np.sum(np.maximum(C0, 1.0 - C0) ** 2)))


def ssp_brute(S, T) -> bool:
    """Exhaustive subset-sum check through the set of reachable sums."""
    S = [int(s) for s in S]
    if len(S) > SSP_MAX_N:
        raise BudgetExceeded(f"n={len(S)} exceeds the brute-force limit {SSP_MAX_N}")
    reach = {0}
    for s in S:
        reach |= {r + s for r in reach}
    return int(T) in reach
