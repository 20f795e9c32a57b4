"""Planar drawings of a run: polygons, ball sets, boundary arcs and markers.

Every primitive is collected as a flat record first.  The CSV is a dump of
those records with ``repr`` floats, and the SVG is rendered from the same
records, so both outputs are byte-stable for a fixed input.

CSV columns::

    layer,generation,item,seq,x,y,r,theta0,theta1,x_end,y_end

``polygon`` rows are vertices in order.  ``ball`` rows hold a center and a
radius.  ``arc`` rows are counterclockwise pieces of the boundary of the
ball intersection, from ``(x, y)`` at ``theta0`` to ``(x_end, y_end)`` at
``theta1`` on ball ``item``.  ``c0``, ``circumscribed`` and ``distance``
are single markers.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InfeasibleRadius
from .geometry import CircumscribedFrame, HPolytope
from .pipeline import BoundsReport, CenterChain

log = logging.getLogger(__name__)

COLUMNS = ("layer", "generation", "item", "seq", "x", "y", "r",
           "theta0", "theta1", "x_end", "y_end")
INSIDE_TOL = 1e-9
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Arc:
    ball: int
    theta0: float
    theta1: float
    start: tuple
    end: tuple

    @property
    def full(self) -> bool:
        return self.theta1 - self.theta0 >= TWO_PI - 1e-15


def clip_polygon(normals, offsets, box) -> np.ndarray:
    """Vertices of ``{a.x + b <= 0}`` inside ``box = (xmin, ymin, xmax, ymax)``.

    Sutherland-Hodgman against each halfplane in turn, starting from the box.
    """
    x0, y0, x1, y1 = box
    poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    for a, b in zip(np.asarray(normals, float), np.asarray(offsets, float)):
        if not poly:
            break
        out = []
        for i, p in enumerate(poly):
            q = poly[(i + 1) % len(poly)]
            fp = a[0] * p[0] + a[1] * p[1] + b
            fq = a[0] * q[0] + a[1] * q[1] + b
            if fp <= 0.0:
                out.append(p)
            if (fp < 0.0 < fq) or (fq < 0.0 < fp):
                t = fp / (fp - fq)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
        poly = out
    return np.array(poly, dtype=float).reshape(-1, 2)


def circle_intersections(c1, r1, c2, r2) -> list:
    c1, c2 = np.asarray(c1, float), np.asarray(c2, float)
    d_vec = c2 - c1
    d = float(np.hypot(*d_vec))
    if d == 0.0 or d > r1 + r2 or d < abs(r1 - r2):
        return []
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    e = d_vec / d
    mid = c1 + a * e
    perp = np.array([-e[1], e[0]])
    return [mid + h * perp, mid - h * perp]


def _inside_others(p, centers, radii, skip):
    for j, (c, r) in enumerate(zip(centers, radii)):
        if j != skip and np.hypot(*(p - c)) > r * (1.0 + INSIDE_TOL):
            return False
    return True


def intersection_arcs(centers, radii) -> list[Arc]:
    """Boundary of the intersection of disks, split into one arc per piece.

    Arc endpoints are computed from the circle-circle intersection formula
    rather than from angles, so shared corners agree to rounding error.
    """
    centers = np.asarray(centers, float)
    radii = np.asarray(radii, float)
    arcs = []
    for k, (ck, rk) in enumerate(zip(centers, radii)):
        cuts = []
        for j in range(len(centers)):
            if j != k:
                for p in circle_intersections(ck, rk, centers[j], radii[j]):
                    theta = math.atan2(p[1] - ck[1], p[0] - ck[0]) % TWO_PI
                    cuts.append((theta, p))
        if not cuts:
            probe = ck + np.array([rk, 0.0])
            if _inside_others(probe, centers, radii, k):
                arcs.append(Arc(k, 0.0, TWO_PI, tuple(probe), tuple(probe)))
            continue
        cuts.sort(key=lambda t: t[0])
        pieces = []
        for i, (t0, p0) in enumerate(cuts):
            t1, p1 = cuts[(i + 1) % len(cuts)]
            if i + 1 == len(cuts):
                t1 += TWO_PI
            if t1 - t0 <= 1e-14:
                continue
            tm = 0.5 * (t0 + t1)
            probe = ck + rk * np.array([math.cos(tm), math.sin(tm)])
            if _inside_others(probe, centers, radii, k):
                pieces.append([t0, t1, p0, p1])
        # join pieces that touch at an interior cut
        merged = []
        for piece in pieces:
            if merged and abs(merged[-1][1] - piece[0]) <= 1e-14:
                merged[-1][1], merged[-1][3] = piece[1], piece[3]
            else:
                merged.append(piece)
        if len(merged) > 1 and abs(merged[-1][1] - TWO_PI - merged[0][0]) <= 1e-14:
            last = merged.pop()
            merged[0] = [last[0], merged[0][1] + TWO_PI, last[2], merged[0][3]]
        for t0, t1, p0, p1 in merged:
            arcs.append(Arc(k, t0, t1, tuple(map(float, p0)), tuple(map(float, p1))))
    return arcs


@dataclass
class Figure:
    box: tuple
    records: list = field(default_factory=list)

    def add(self, layer, generation="", item="", seq="", x="", y="", r="",
            theta0="", theta1="", x_end="", y_end=""):
        self.records.append(dict(zip(COLUMNS, (layer, generation, item, seq, x, y, r,
                                               theta0, theta1, x_end, y_end))))

    def layer(self, name):
        return [rec for rec in self.records if rec["layer"] == name]


def _view_box(P_vertices, frame, upper, centers, pad=0.08):
    pts = [frame.C - frame.R_circ, frame.C + frame.R_circ,
           frame.C0 - upper, frame.C0 + upper]
    pts += [np.asarray(c) for c in centers]
    if len(P_vertices):
        pts += list(P_vertices)
    pts = np.array(pts).reshape(-1, 2)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    lo, hi = lo - pad * span, hi + pad * span
    return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))


def select_generations(chain: CenterChain, which) -> list[int]:
    """``None`` gives generation 0 and the one the bound used; ``"all"`` every one."""
    final = chain.exit_generation if chain.exited else chain.last
    if which is None:
        return sorted({0, final})
    if which == "all":
        return list(range(chain.last + 1))
    gens = sorted({int(g) for g in which})
    for g in gens:
        if not 0 <= g <= chain.last:
            raise IndexError(f"generation {g} not in chain (0..{chain.last})")
    return gens


def build_figure(P: HPolytope, frame: CircumscribedFrame, chain: CenterChain,
                 report: BoundsReport, generations=None,
                 include_centers: bool = True) -> Figure:
    if P.dimension != 2:
        raise DimensionMismatch(f"plotting needs dimension 2, got {P.dimension}")
    gens = select_generations(chain, generations)
    R = float(report.fixed_point)
    upper = float(report.upper_bound)
    shown = [chain.generations[g] for g in gens] if include_centers else []
    rough = clip_polygon(P.normals, P.offsets, (frame.C[0] - frame.R_circ,
                                                frame.C[1] - frame.R_circ,
                                                frame.C[0] + frame.R_circ,
                                                frame.C[1] + frame.R_circ))
    fig = Figure(_view_box(rough, frame, upper, [c for cs in shown for c in cs]))

    for g in gens:
        gen = chain.affine[g]
        if g == 0:
            normals, offsets = P.normals, P.offsets
        else:
            normals, offsets = gen.normals, gen.offsets + gen.alphas * R * R
        for s, v in enumerate(clip_polygon(normals, offsets, fig.box)):
            fig.add("polygon", g, seq=s, x=float(v[0]), y=float(v[1]))
        try:
            radii = gen.radii(frame, R)
        except InfeasibleRadius:
            log.warning("generation %d has no ball set at R=%r", g, R)
            continue
        centers = chain.generations[g]
        for k, (c, r) in enumerate(zip(centers, radii)):
            fig.add("ball", g, k, x=float(c[0]), y=float(c[1]), r=float(r))
        for s, arc in enumerate(intersection_arcs(centers, radii)):
            fig.add("arc", g, arc.ball, s, arc.start[0], arc.start[1],
                    float(radii[arc.ball]), arc.theta0, arc.theta1, arc.end[0], arc.end[1])

    fig.add("circumscribed", x=float(frame.C[0]), y=float(frame.C[1]), r=float(frame.R_circ))
    fig.add("c0", x=float(frame.C0[0]), y=float(frame.C0[1]))
    fig.add("distance", x=float(frame.C0[0]), y=float(frame.C0[1]), r=upper)
    return fig


def _cell(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def figure_csv(fig: Figure) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for rec in fig.records:
        w.writerow([_cell(rec[c]) for c in COLUMNS])
    return buf.getvalue()


_STYLE = {
    "polygon": 'fill="{fill}" fill-opacity="0.25" stroke="{stroke}"',
    "ball": 'fill="none" stroke="{stroke}" stroke-opacity="0.35"',
    "arc": 'fill="none" stroke="{stroke}" stroke-width="2"',
}
_PALETTE = ("#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2")


def _f(v) -> str:
    return f"{float(v):.9g}"


def figure_svg(fig: Figure, width: int = 640) -> str:
    x0, y0, x1, y1 = fig.box
    w, h = x1 - x0, y1 - y0
    height = max(1, int(round(width * h / w)))
    unit = w / width
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="{_f(x0)} {_f(-y1)} {_f(w)} {_f(h)}">',
           f'<g transform="scale(1,-1)" stroke-width="{_f(unit)}">']
    gens = sorted({rec["generation"] for rec in fig.records if rec["generation"] != ""})
    for g in gens:
        color = _PALETTE[gens.index(g) % len(_PALETTE)]
        out.append(f'<g id="generation-{g}">')
        poly = [rec for rec in fig.layer("polygon") if rec["generation"] == g]
        if poly:
            pts = " ".join(f"{_f(r['x'])},{_f(r['y'])}" for r in poly)
            style = _STYLE["polygon"].format(fill=color, stroke=color)
            out.append(f'<polygon id="polygon-{g}" points="{pts}" {style}/>')
        for rec in fig.layer("ball"):
            if rec["generation"] == g:
                style = _STYLE["ball"].format(stroke=color)
                out.append(f'<circle cx="{_f(rec["x"])}" cy="{_f(rec["y"])}" '
                           f'r="{_f(rec["r"])}" {style}/>')
                out.append(f'<circle cx="{_f(rec["x"])}" cy="{_f(rec["y"])}" '
                           f'r="{_f(3 * unit)}" fill="{color}"/>')
        for rec in fig.layer("arc"):
            if rec["generation"] != g:
                continue
            style = _STYLE["arc"].format(stroke=color).replace(
                'stroke-width="2"', f'stroke-width="{_f(2 * unit)}"')
            span = rec["theta1"] - rec["theta0"]
            if span >= TWO_PI - 1e-15:
                ball = next(b for b in fig.layer("ball")
                            if b["generation"] == g and b["item"] == rec["item"])
                out.append(f'<circle cx="{_f(ball["x"])}" cy="{_f(ball["y"])}" '
                           f'r="{_f(rec["r"])}" {style}/>')
                continue
            large = 1 if span > math.pi else 0
            out.append(f'<path d="M {_f(rec["x"])} {_f(rec["y"])} A {_f(rec["r"])} '
                       f'{_f(rec["r"])} 0 {large} 1 {_f(rec["x_end"])} {_f(rec["y_end"])}" '
                       f'{style}/>')
        out.append("</g>")
    for rec in fig.layer("circumscribed"):
        out.append(f'<circle id="circumscribed" cx="{_f(rec["x"])}" cy="{_f(rec["y"])}" '
                   f'r="{_f(rec["r"])}" fill="none" stroke="#7f7f7f" '
                   f'stroke-dasharray="{_f(4 * unit)}"/>')
    for rec in fig.layer("distance"):
        out.append(f'<circle id="distance" cx="{_f(rec["x"])}" cy="{_f(rec["y"])}" '
                   f'r="{_f(rec["r"])}" fill="none" stroke="#ff7f0e"/>')
    for rec in fig.layer("c0"):
        out.append(f'<circle id="c0" cx="{_f(rec["x"])}" cy="{_f(rec["y"])}" '
                   f'r="{_f(4 * unit)}" fill="black"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
