"""YAML instance documents.

Example::

    dimension: 2
    A: [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]
    b: [-1.0, -1.0, 0.0, 0.0]
    C: [0.5, 0.5]
    R_circ: 0.7071067811865476
    C0: [0.3, 0.4]
    rho: 2.0
    solver: {tol_obj: 1.0e-10}

``rho`` and ``solver`` are optional.  Floats are written with ``repr`` so a
parse/dump round trip reproduces every value bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np
import yaml

from .config import SolverConfig
from .errors import InstanceError
from .geometry import CircumscribedFrame, HPolytope

REQUIRED = ("dimension", "A", "b", "C", "R_circ", "C0")
OPTIONAL = ("rho", "solver", "max_generations")
DEFAULT_RHO_FACTOR = 4.0


@dataclass(frozen=True, eq=False)
class Instance:
    P: HPolytope
    frame: CircumscribedFrame
    solver: SolverConfig
    max_generations: int | None = None


def default_rho(C, R_circ, C0) -> float:
    return DEFAULT_RHO_FACTOR * (float(R_circ) + float(np.linalg.norm(np.subtract(C0, C))))


def _key_lines(text):
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in node.value}


def _array(doc, key, ndim, lines):
    try:
        arr = np.array(doc[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"not a numeric array ({exc})", key, lines.get(key)) from None
    if arr.ndim != ndim:
        raise InstanceError(f"expected a {ndim}-d array, got shape {arr.shape}",
                            key, lines.get(key))
    if not np.all(np.isfinite(arr)):
        raise InstanceError("contains non-finite values", key, lines.get(key))
    return arr


def _scalar(doc, key, lines):
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InstanceError(f"expected a number, got {v!r}", key, lines.get(key))
    return float(v)


def parse_instance(text: str) -> Instance:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise InstanceError(f"malformed document: {exc}",
                            line=None if mark is None else mark.line + 1) from None
    if not isinstance(doc, dict):
        raise InstanceError("document must be a mapping")
    lines = _key_lines(text)
    for key in REQUIRED:
        if key not in doc:
            raise InstanceError("missing required field", key)
    unknown = set(doc) - set(REQUIRED) - set(OPTIONAL)
    if unknown:
        key = sorted(unknown)[0]
        raise InstanceError("unknown field", key, lines.get(key))

    dim = doc["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InstanceError("must be a positive integer", "dimension", lines.get("dimension"))
    A = _array(doc, "A", 2, lines)
    b = _array(doc, "b", 1, lines)
    C = _array(doc, "C", 1, lines)
    C0 = _array(doc, "C0", 1, lines)
    for key, arr, size in (("A", A, A.shape[1]), ("C", C, C.size),
                           ("C0", C0, C0.size)):
        if size != dim:
            raise InstanceError(f"dimension {size} does not match {dim}", key, lines.get(key))
    if b.size != A.shape[0]:
        raise InstanceError(f"{b.size} offsets for {A.shape[0]} facets", "b", lines.get("b"))
    R = _scalar(doc, "R_circ", lines)
    rho = _scalar(doc, "rho", lines) if "rho" in doc else default_rho(C, R, C0)

    solver = SolverConfig()
    if "solver" in doc:
        opts = doc["solver"]
        if not isinstance(opts, dict):
            raise InstanceError("must be a mapping", "solver", lines.get("solver"))
        try:
            solver = solver.updated(**opts)
        except (TypeError, ValueError) as exc:
            raise InstanceError(str(exc), "solver", lines.get("solver")) from None
    max_gen = doc.get("max_generations")
    if max_gen is not None and (isinstance(max_gen, bool) or not isinstance(max_gen, int)
                                or max_gen < 0):
        raise InstanceError("must be a nonnegative integer", "max_generations",
                            lines.get("max_generations"))
    try:
        P = HPolytope(A, b)
    except ValueError as exc:
        raise InstanceError(str(exc), "A", lines.get("A")) from None
    try:
        frame = CircumscribedFrame(C, R, C0, rho)
    except ValueError as exc:
        raise InstanceError(str(exc), "rho" if "rho" in str(exc) else "C0") from None
    return Instance(P, frame, solver, max_gen)


def load_instance(path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text)


class _Float(float):
    pass


def _float_repr(dumper, value):
    return dumper.represent_scalar("tag:yaml.org,2002:float", repr(float(value)))


class _Dumper(yaml.SafeDumper):
    pass


_Dumper.add_representer(_Float, _float_repr)


def _plain(x):
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return _Float(x)
    return x


def dump_document(doc: dict) -> str:
    """YAML text with shortest round-trip float formatting and stable key order."""
    return yaml.dump(_plain(doc), Dumper=_Dumper, sort_keys=False,
                     default_flow_style=None, width=100)


def instance_to_dict(inst: Instance) -> dict:
    defaults = SolverConfig()
    solver = {f.name: getattr(inst.solver, f.name) for f in fields(inst.solver)
              if getattr(inst.solver, f.name) != getattr(defaults, f.name)}
    doc = {
        "dimension": inst.P.dimension,
        "A": inst.P.normals,
        "b": inst.P.offsets,
        "C": inst.frame.C,
        "R_circ": inst.frame.R_circ,
        "C0": inst.frame.C0,
        "rho": inst.frame.rho,
    }
    if solver:
        doc["solver"] = solver
    if inst.max_generations is not None:
        doc["max_generations"] = inst.max_generations
    return doc


def dump_instance(inst: Instance) -> str:
    return dump_document(instance_to_dict(inst))
