"""SVG pictures in the Poincare disk: the fundamental polygon, closed geodesics, intersections.

A closed geodesic is drawn as the pieces of its lifts that cross the base
polygon, i.e. the geodesic on the surface cut open along the polygon sides.
"""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .goldman import CoincidentAxesError, _tiles_near_axis, enumerate_intersections, representation
from .hyperbolic import Geodesic, Representation, from_disk, to_disk
from .words import ConjugacyClass

__all__ = ["render_svg"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
_STEP = 0.01  # sampling step along a geodesic, in hyperbolic arc length


def _disk_geodesic(p: complex, q: complex, samples: int = 64) -> list[complex]:
    """Points on the disk geodesic from ``p`` to ``q`` (both inside the disk)."""
    hp, hq = from_disk(p), from_disk(q)
    pts = []
    for k in range(samples + 1):
        t = k / samples
        # walk along the geodesic through hp and hq in the upper half-plane
        pts.append(to_disk(_uhp_point_between(hp, hq, t)))
    return pts


def _uhp_point_between(z1: complex, z2: complex, t: float) -> complex:
    if abs(z1.real - z2.real) < 1e-12:
        return complex(z1.real, z1.imag ** (1 - t) * z2.imag ** t)
    # centre on the real axis equidistant from both points
    c = (abs(z2) ** 2 - abs(z1) ** 2) / (2 * (z2.real - z1.real))
    r = abs(z1 - c)
    a1, a2 = math.atan2(z1.imag, z1.real - c), math.atan2(z2.imag, z2.real - c)
    # interpolate in arc length: log tan(angle/2) is affine in hyperbolic distance
    s1, s2 = math.log(math.tan(a1 / 2)), math.log(math.tan(a2 / 2))
    a = 2 * math.atan(math.exp(s1 + t * (s2 - s1)))
    return complex(c + r * math.cos(a), r * math.sin(a))


def _polygon_path(rep: Representation, scale: float) -> str:
    verts = rep.polygon_vertices_disk()
    pts: list[complex] = []
    for k, v in enumerate(verts):
        seg = _disk_geodesic(v, verts[(k + 1) % len(verts)])
        pts.extend(seg if not pts else seg[1:])
    return _path_data([pts], scale) + " Z"


def _path_data(runs: Sequence[Sequence[complex]], scale: float) -> str:
    out = []
    for run in runs:
        cmds = [f"{'M' if i == 0 else 'L'}{scale * z.real:.3f},{-scale * z.imag:.3f}" for i, z in enumerate(run)]
        out.append(" ".join(cmds))
    return " ".join(out)


def _pieces_in_polygon(rep: Representation, geo: Geodesic) -> list[list[complex]]:
    """Sampled runs of ``geo`` (upper half-plane) lying inside the base polygon, in disk coordinates."""
    N = geo.normalizer().m
    Ninv = np.array([[N[1, 1], -N[0, 1]], [-N[1, 0], N[0, 0]]])
    w = (N[0, 0] * rep.base_point + N[0, 1]) / (N[1, 0] * rep.base_point + N[1, 1])
    centre = math.log(abs(w))
    reach = rep.circumradius + 0.1
    runs: list[list[complex]] = []
    cur: list[complex] = []
    for t in np.arange(centre - reach, centre + reach, _STEP):
        y = 1j * math.exp(t)
        z = (Ninv[0, 0] * y + Ninv[0, 1]) / (Ninv[1, 0] * y + Ninv[1, 1])
        if rep.outside_letter(z) is None:
            cur.append(to_disk(z))
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return [r for r in runs if len(r) > 1]


def _closed_geodesic_runs(rep: Representation, c: ConjugacyClass) -> list[list[complex]]:
    root, _ = rep.group.primitive_root(c.word)
    tiles = _tiles_near_axis(rep, root)
    seen: set[tuple[float, float]] = set()
    runs: list[list[complex]] = []
    for geo in tiles.axes:
        key = tuple(round(math.atan2(p.imag, p.real), 6) for p in (to_disk(geo.attracting), to_disk(geo.repelling)))
        if key in seen:
            continue
        seen.add(key)
        runs.extend(_pieces_in_polygon(rep, geo))
    return runs


def _into_polygon(rep: Representation, z: complex) -> complex:
    _, m = rep.locate(z)
    a, b, c, d = m.ravel()
    # m^-1 z
    return (d * z - b) / (-c * z + a)


def render_svg(
    classes: Sequence[ConjugacyClass],
    rep: Representation | None = None,
    size: int = 600,
    budget: int | None = None,
) -> str:
    """An SVG document: the disk, the fundamental 4g-gon, one path per class and the crossings between them."""
    if not classes:
        raise ValueError("render needs at least one class")
    genus = classes[0].genus
    rep = rep or representation(genus)
    for c in classes:
        if c.is_identity:
            raise ValueError("the identity class has no closed geodesic")
    half = size / 2
    scale = 0.95 * half
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{-half} {-half} {size} {size}">',
        f'<title>genus {genus}: {escape(", ".join(f"[{c}]" for c in classes))}</title>',
        f'<circle id="boundary" cx="0" cy="0" r="{scale:.3f}" fill="none" stroke="#999" stroke-width="1"/>',
        f'<path id="fundamental-polygon" d="{_polygon_path(rep, scale)}" fill="#f4f4f4" stroke="#333" '
        'stroke-width="1.5"/>',
    ]
    for k, c in enumerate(classes):
        runs = _closed_geodesic_runs(rep, c)
        colour = _PALETTE[k % len(_PALETTE)]
        lines.append(
            f'<path class="geodesic" data-class="{escape(str(c))}" d="{_path_data(runs, scale)}" '
            f'fill="none" stroke="{colour}" stroke-width="2"/>'
        )
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            try:
                pts = enumerate_intersections(rep, classes[i], classes[j], budget)
            except CoincidentAxesError:
                continue
            drawn: set[tuple[float, float]] = set()
            for p in pts:
                w = to_disk(_into_polygon(rep, p.location))
                key = (round(w.real, 6), round(w.imag, 6))
                if key in drawn:
                    continue
                drawn.add(key)
                fill = "#000" if p.sign > 0 else "#fff"
                lines.append(
                    f'<circle class="intersection" data-sign="{p.sign:+d}" cx="{scale * w.real:.3f}" '
                    f'cy="{-scale * w.imag:.3f}" r="4" fill="{fill}" stroke="#000" stroke-width="1"/>'
                )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
