from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and budgets for the convex and linear subproblems.

    ``tol_obj`` is relative to ``max(1, |scale|)`` of whatever is being
    optimized; ``tol_feas`` is an absolute constraint tolerance.
    ``initial_radius`` only matters for unconstrained piecewise-max
    minimization, where no bounding region can be derived from the data.
    """

    tol_obj: float = 1e-10
    tol_feas: float = 1e-9
    max_iters: int = 2_000_000
    initial_radius: float = 10.0
    hull_max_iters: int = 2_000

    def __post_init__(self):
        if not (self.tol_obj > 0 and self.tol_feas > 0):
            raise ValueError("tolerances must be positive")
        if not (self.max_iters > 0 and self.hull_max_iters > 0):
            raise ValueError("iteration budgets must be positive")
        if not self.initial_radius > 0:
            raise ValueError("initial_radius must be positive")

    def updated(self, **overrides) -> "SolverConfig":
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown solver options: {sorted(unknown)}")
        return replace(self, **overrides)

    def as_dict(self) -> dict:
        return asdict(self)
