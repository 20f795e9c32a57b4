"""Hypercube experiment: bounds for a random interior point against the closed form.

Each run ``(n, seed)`` draws ``C0`` uniformly in ``[0, 1)^n`` from
``rng.stream(seed, n)``, solves over the unit cube in its circumscribed
frame, and compares the recovered points with the farthest vertex.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .config import SolverConfig
from .errors import FarpointError
from .geometry import CircumscribedFrame, HPolytope
from .instance_io import DEFAULT_RHO_FACTOR
from .oracle import hypercube_farthest
from .pipeline import DEFAULT_MAX_GENERATIONS, solve
from .rng import stream

MAX_DIMENSION = 100
SUMMARY_COLUMNS = ("n", "seed", "status", "oracle", "upper", "lower", "on_sphere",
                   "exit_generation", "max_err_y", "max_err_lb", "wall_time", "message")


@dataclass
class RunResult:
    n: int
    seed: int
    status: str
    oracle: float = math.nan
    upper: float = math.nan
    lower: float = math.nan
    on_sphere: bool = False
    exit_generation: int | None = None
    max_err_y: float = math.nan
    max_err_lb: float = math.nan
    wall_time: float = 0.0
    message: str = ""
    vertex: list = field(default_factory=list)
    y_star: list = field(default_factory=list)
    x_lb: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def error_vector(self) -> np.ndarray:
        """``y* - v*`` per coordinate, the quantity plotted against index."""
        return np.asarray(self.y_star) - np.asarray(self.vertex)


def hypercube_instance(n: int, seed: int, rho_factor: float = DEFAULT_RHO_FACTOR):
    C0 = stream(seed, n).uniform_array(n)
    C = np.full(n, 0.5)
    Rc = 0.5 * math.sqrt(n)
    rho = rho_factor * (Rc + float(np.linalg.norm(C0 - C)))
    return HPolytope.hypercube(n), CircumscribedFrame(C, Rc, C0, rho)


def run_one(n: int, seed: int, config: SolverConfig | None = None,
            max_generations: int = DEFAULT_MAX_GENERATIONS,
            rho_factor: float = DEFAULT_RHO_FACTOR, method: str = "joint") -> RunResult:
    """Failures are recorded in the result, never raised."""
    t0 = time.perf_counter()
    P, frame = hypercube_instance(n, seed, rho_factor)
    v, dist = hypercube_farthest(frame.C0)
    try:
        rep = solve(P, frame, config, max_generations, method, check_frame=False)
    except FarpointError as exc:
        return RunResult(n, seed, "failed", oracle=dist, vertex=v.tolist(),
                         wall_time=time.perf_counter() - t0,
                         message=f"{type(exc).__name__}: {exc}")
    return RunResult(
        n, seed, "ok" if rep.exit_generation is not None else "no_exit",
        oracle=dist, upper=rep.upper_bound, lower=rep.lower_bound,
        on_sphere=rep.on_sphere, exit_generation=rep.exit_generation,
        max_err_y=float(np.max(np.abs(rep.y_star - v))),
        max_err_lb=float(np.max(np.abs(rep.x_lb - v))),
        wall_time=time.perf_counter() - t0,
        vertex=v.tolist(), y_star=rep.y_star.tolist(), x_lb=rep.x_lb.tolist())


def atomic_write(path, text: str) -> None:
    """Write via a temporary sibling and rename, so readers never see half a file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def run_csv(res: RunResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("index", "vertex", "y_star", "x_lb", "err_y", "err_lb"))
    for i, (v, y, x) in enumerate(zip(res.vertex, res.y_star, res.x_lb)):
        w.writerow((i, _fmt(float(v)), _fmt(float(y)), _fmt(float(x)),
                    _fmt(float(y - v)), _fmt(float(x - v))))
    return buf.getvalue()


def summary_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for res in results:
        row = asdict(res)
        w.writerow([_fmt(row[c]) for c in SUMMARY_COLUMNS])
    return buf.getvalue()


def _task(args):
    n, seed, config, max_generations, rho_factor, method, out_dir = args
    res = run_one(n, seed, config, max_generations, rho_factor, method)
    if out_dir is not None and res.y_star:
        atomic_write(Path(out_dir) / f"run_n{n}_seed{seed}.csv", run_csv(res))
    return res


def hypercube_batch(ns, seeds, config: SolverConfig | None = None,
                    max_generations: int = DEFAULT_MAX_GENERATIONS,
                    rho_factor: float = DEFAULT_RHO_FACTOR, method: str = "joint",
                    jobs: int = 1, out_dir=None,
                    max_dimension: int = MAX_DIMENSION) -> list[RunResult]:
    """Results in ``ns``-major, ``seeds``-minor order whatever ``jobs`` is.

    With ``out_dir`` each run writes its error vector to its own CSV and the
    ordered summary goes to ``summary.csv`` once every run is back.
    """
    for n in ns:
        if not 1 <= n <= max_dimension:
            raise ValueError(f"dimension {n} outside 1..{max_dimension}")
    tasks = [(int(n), int(s), config, max_generations, rho_factor, method, out_dir)
             for n in ns for s in seeds]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    if out_dir is not None:
        atomic_write(Path(out_dir) / "summary.csv", summary_csv(results))
    return results
