"""The Goldman bracket, computed from intersections of closed geodesics.

For classes with primitive roots ``k1`` and ``k2`` the transverse double
points of the two closed geodesics correspond to lifts ``g * axis(k2)``
crossing one period of ``axis(k1)``.  Those lifts are found from the tiles of
the tessellation near each axis: a crossing inside the tile ``gamma P`` near
the first axis is the crossing of ``gamma^-1 axis(k1)`` and
``delta^-1 axis(k2)`` in the base polygon, for a tile ``delta P`` near the
second, and the lift is ``gamma delta^-1 axis(k2)``.  All geometry is done
in the base frame, where the geodesics involved stay near the polygon.

Powers are handled through the roots: a point of ``k1`` and ``k2`` splits
into ``l1 * l2`` double cosets of ``<h1> \\ G / <h2>``, all giving the same
loop product, so ``[h1, h2]`` is ``l1 * l2`` times a sum over the primitive
intersection points.  For powers of one primitive class the same sum, over
crossings of distinct lifts, counts the intersections of a curve with a
push-off of the other; it vanishes when the class is simple.
"""

from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .hyperbolic import Geodesic, Representation, axis, build_representation, to_disk, translation_length
from .words import ConjugacyClass, SurfaceGroup, Word, inverse, power

__all__ = [
    "BracketResult",
    "BudgetWarning",
    "CoincidentAxesError",
    "IntersectionPoint",
    "bracket_linear",
    "TangencyError",
    "default_budget",
    "enumerate_intersections",
    "goldman_bracket",
    "representation",
]

POSITION_TOL = 1e-7
TANGENCY_TOL = 1e-9
# crossings closer than this along both geodesics are checked for being one point
DEDUPE_TOL = 1e-6
# boundary points of the disk closer than this (in angle) are one endpoint
_SAME_ENDPOINT = 1e-7
# extra room around the circumradius when collecting tiles near a segment
_MARGIN = 0.25
# tiles whose centres are closer than this (hyperbolic distance) coincide
_SAME = 0.5
# crossings this far outside the base polygon are left to a neighbouring tile
_IN_TILE_SLACK = 0.1


class CoincidentAxesError(ValueError):
    """The two classes are powers of a common primitive class (up to inversion)."""


class TangencyError(RuntimeError):
    pass


class BudgetWarning(UserWarning):
    pass


@lru_cache(maxsize=None)
def representation(genus: int) -> Representation:
    return build_representation(genus)


@dataclass(frozen=True)
class IntersectionPoint:
    location: complex
    sign: int
    conjugator: Word
    double_coset_key: tuple


@dataclass(frozen=True)
class BracketResult:
    """A finite integer combination of conjugacy classes."""

    genus: int
    terms: Mapping[ConjugacyClass, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {c: int(n) for c, n in self.terms.items() if n}
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key())))

    @classmethod
    def zero(cls, genus: int) -> "BracketResult":
        return cls(genus, {})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BracketResult):
            return NotImplemented
        return self.genus == other.genus and self.terms == other.terms

    def __hash__(self):
        return hash((self.genus, tuple(self.terms.items())))

    def __add__(self, other: "BracketResult") -> "BracketResult":
        out = dict(self.terms)
        for c, n in other.terms.items():
            out[c] = out.get(c, 0) + n
        return BracketResult(self.genus, out)

    def __neg__(self) -> "BracketResult":
        return self.scaled(-1)

    def __sub__(self, other: "BracketResult") -> "BracketResult":
        return self + (-other)

    def scaled(self, k: int) -> "BracketResult":
        return BracketResult(self.genus, {c: k * n for c, n in self.terms.items()})

    def coefficient_sum(self) -> int:
        return sum(self.terms.values())

    def to_json(self) -> str:
        return json.dumps({"terms": [{"class": str(c), "coeff": n} for c, n in self.terms.items()]}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, genus: int) -> "BracketResult":
        G = SurfaceGroup(genus)
        out: dict[ConjugacyClass, int] = {}
        for t in json.loads(text)["terms"]:
            c = G.conjugacy_class(t["class"])
            out[c] = out.get(c, 0) + int(t["coeff"])
        return cls(genus, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, n in self.terms.items():
            parts.append(f"{n:+d}*[{c}]")
        return " ".join(parts)


def default_budget(genus: int, w1: Word, w2: Word) -> int:
    return 2 * (len(w1) + len(w2)) + 4 * genus


@dataclass
class _Tiles:
    """Tiles ``gamma P`` near one period of the axis of ``word``.

    Everything is stored in the base frame: ``axes[t]`` is ``gamma^-1 axis``,
    a geodesic passing near the base polygon, and ``centre_pos[t]`` is the
    position along the axis of the foot of the tile centre ``gamma i``.
    Positions are arc length from the foot of the base point.
    """

    words: list[Word]
    axes: list[Geodesic]
    frames: list[np.ndarray]  # normalizers of ``axes``
    centre_pos: list[float]
    normalizer: np.ndarray  # sends the axis to the imaginary axis, the foot of i to i
    length: float


def _apply(m: np.ndarray, z: complex) -> complex:
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def _fermi(frame: np.ndarray, z: complex) -> tuple[float, float]:
    """Position along, and signed distance from, the geodesic normalised by ``frame``."""
    w = _apply(frame, z)
    return math.log(abs(w)), math.asinh(w.real / w.imag)


def _tiles_near_axis(rep: Representation, word: Word) -> _Tiles:
    """Tiles whose centres lie within the circumradius (plus a margin) of one period of the axis.

    The tiles are found by a breadth-first walk through neighbours.  A tile's
    position is its parent's plus an offset measured along the parent's
    base-frame axis, so rounding grows linearly in the walk length.  (Reading
    positions off the matrices ``rho(gamma)`` instead loses ``e^length``.)
    """
    G = rep.group
    m = rep.evaluate(word)
    length = translation_length(m, rep.tolerance)
    N = axis(m, rep.tolerance).normalizer(through=rep.base_point).m
    radius = rep.circumradius + _MARGIN
    lo, hi = -radius, length + radius
    cosh_same = math.cosh(_SAME)

    def base_axis(w: Word) -> tuple[Geodesic, np.ndarray]:
        geo = axis(rep.evaluate(G.dehn_reduce(inverse(w) + word + w)), rep.tolerance)
        return geo, geo.normalizer().m

    w0, g0 = rep.locate(_apply(_inv(N), 1j))
    geo0, frame0 = base_axis(w0)
    u0, v0 = _fermi(N, _apply(g0, rep.base_point))
    tiles = _Tiles([w0], [geo0], [frame0], [u0], N, length)
    fermi_of = [(u0, v0)]
    # tile centres are at least twice the inradius apart; bucket them to spot revisits
    seen: dict[tuple[int, int], list[int]] = {(math.floor(u0 / _SAME), math.floor(v0 / _SAME)): [0]}

    def is_new(u: float, v: float) -> bool:
        ku, kv = math.floor(u / _SAME), math.floor(v / _SAME)
        for du in (-1, 0, 1):
            for dv in (-1, 0, 1):
                for t in seen.get((ku + du, kv + dv), ()):
                    u2, v2 = fermi_of[t]
                    cd = math.cosh(v) * math.cosh(v2) * math.cosh(u - u2) - math.sinh(v) * math.sinh(v2)
                    if cd < cosh_same:
                        return False
        return True

    queue = [0]
    while queue:
        t = queue.pop()
        w, frame = tiles.words[t], tiles.frames[t]
        base_u = _fermi(frame, rep.base_point)[0]
        for x in rep.group.letters:
            du, v = _fermi(frame, rep.neighbor_centers[x])
            u = tiles.centre_pos[t] + du - base_u
            if not (lo <= u <= hi and abs(v) <= radius) or not is_new(u, v):
                continue
            child = w + (x,)
            geo, fr = base_axis(child)
            tiles.words.append(child)
            tiles.axes.append(geo)
            tiles.frames.append(fr)
            tiles.centre_pos.append(u)
            fermi_of.append((u, v))
            seen.setdefault((math.floor(u / _SAME), math.floor(v / _SAME)), []).append(len(fermi_of) - 1)
            queue.append(len(fermi_of) - 1)
    return tiles


@dataclass
class _RawPoint:
    tau: float  # position along the first closed geodesic, in [0, length1)
    tau2: float  # position along the second, in [0, length2)
    slope: float  # attracting endpoint of the second lift, scaled by the crossing height
    sign: int
    conjugator: Word
    location: complex


def _boundary_angles(geos: list[Geodesic]) -> tuple[np.ndarray, np.ndarray]:
    att = np.array([cmath.phase(to_disk(g.attracting)) for g in geos])
    rep = np.array([cmath.phase(to_disk(g.repelling)) for g in geos])
    return att, rep


def _angle_gap(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    d = np.mod(x - y, 2 * np.pi)
    return np.minimum(d, 2 * np.pi - d)


def _image(frame: np.ndarray, x: float) -> float:
    return frame[0, 0] / frame[1, 0] if x == math.inf else _apply(frame, x)


def _primitive_points(rep: Representation, k1: Word, k2: Word) -> list[_RawPoint]:
    """Crossings of one period of ``axis(k1)`` with the lifts of ``axis(k2)``, one per double coset.

    A crossing inside the tile ``gamma P`` is found in the base frame as the
    crossing of ``gamma^-1 axis1`` with ``delta^-1 axis2`` for a tile
    ``delta P`` near the second axis; the lift is ``gamma delta^-1 axis2``.
    """
    G = rep.group
    t1 = _tiles_near_axis(rep, k1)
    t2 = _tiles_near_axis(rep, k2)
    a_att, a_rep = _boundary_angles(t1.axes)
    b_att, b_rep = _boundary_angles(t2.axes)
    # B crosses A iff exactly one endpoint of B lies on the arc from a_att to a_rep
    span = np.mod(a_rep - a_att, 2 * np.pi)[:, None]
    in_att = np.mod(b_att[None, :] - a_att[:, None], 2 * np.pi) < span
    in_rep = np.mod(b_rep[None, :] - a_att[:, None], 2 * np.pi) < span
    # lifts of a common axis (powers of one primitive class) do not cross transversally
    same = (_angle_gap(a_att[:, None], b_att[None, :]) < _SAME_ENDPOINT) & (
        _angle_gap(a_rep[:, None], b_rep[None, :]) < _SAME_ENDPOINT
    )
    opposite = (_angle_gap(a_att[:, None], b_rep[None, :]) < _SAME_ENDPOINT) & (
        _angle_gap(a_rep[:, None], b_att[None, :]) < _SAME_ENDPOINT
    )
    l1, l2 = t1.length, t2.length
    # every crossing lies in some tile, so only crossings in (a slightly enlarged) P are kept
    cosh_reach = math.cosh(rep.circumradius + _IN_TILE_SLACK)
    found: list[_RawPoint] = []
    for ti, si in zip(*np.nonzero((in_att != in_rep) & ~same & ~opposite)):
        N = t1.frames[ti]
        b = t2.axes[si]
        s1, s2 = _image(N, b.repelling), _image(N, b.attracting)
        height = math.sqrt(abs(s1 * s2))
        z = _apply(_inv(N), 1j * height)
        if 1.0 + abs(z - 1j) ** 2 / (2.0 * z.imag) > cosh_reach:
            continue
        slope = s2 / height
        sin_angle = 2.0 / (abs(slope) + 1.0 / abs(slope))
        if sin_angle < TANGENCY_TOL:
            raise TangencyError(f"geodesics meet at angle {sin_angle:.3g}; refusing to guess a sign")
        tau = t1.centre_pos[ti] + math.log(height) - _fermi(N, 1j)[0]
        tau2 = t2.centre_pos[si] + _fermi(t2.frames[si], z)[0] - _fermi(t2.frames[si], 1j)[0]
        n, tau_red = _reduce_position(tau, l1)
        m, tau2_red = _reduce_position(tau2, l2)
        u = power(k1, -n) + t1.words[ti] + inverse(t2.words[si]) + power(k2, m)
        loc = _apply(_inv(t1.normalizer), 1j * math.exp(tau_red))
        found.append(_RawPoint(tau_red, tau2_red, slope, 1 if s1 > 0 else -1, u, complex(loc)))
    return _dedupe(G, found, k1, k2, l1, l2)


def _reduce_position(tau: float, length: float) -> tuple[int, float]:
    n = math.floor(tau / length)
    red = tau - n * length
    if length - red < POSITION_TOL:
        n += 1
        red -= length
    return n, red


def _inv(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def _circular_gap(x: float, y: float, period: float) -> float:
    d = abs(x - y) % period
    return min(d, period - d)


def _same_double_coset(G: SurfaceGroup, k1: Word, k2: Word, u: Word, v: Word) -> bool:
    """Whether ``v`` is in ``k1^i u k2^j`` for some ``i, j`` in {-1, 0, 1}."""
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            if G.is_identity(power(k1, i) + u + power(k2, j) + inverse(v)):
                return True
    return False


def _dedupe(G: SurfaceGroup, pts: list[_RawPoint], k1: Word, k2: Word, l1: float, l2: float) -> list[_RawPoint]:
    """Merge crossings found from several tiles.

    Positions along both geodesics propose candidates; the decision is
    exact, by comparing double cosets of the conjugators.
    """
    out: list[_RawPoint] = []
    for p in sorted(pts, key=lambda p: (len(p.conjugator), p.tau)):
        for q in out:
            if (
                _circular_gap(p.tau, q.tau, l1) < DEDUPE_TOL
                and _circular_gap(p.tau2, q.tau2, l2) < DEDUPE_TOL
                and _same_double_coset(G, k1, k2, q.conjugator, p.conjugator)
            ):
                if p.sign != q.sign:
                    raise TangencyError("inconsistent crossing signs for one intersection point")
                break
        else:
            out.append(p)
    return [
        _RawPoint(p.tau, p.tau2, p.slope, p.sign, G.dehn_reduce(p.conjugator), p.location)
        for p in sorted(out, key=lambda p: p.tau)
    ]


def _roots(G: SurfaceGroup, c1: ConjugacyClass, c2: ConjugacyClass, allow_coincident: bool = False):
    if c1.is_identity or c2.is_identity:
        raise ValueError("the identity class has no closed geodesic")
    k1, l1 = G.primitive_root(c1.word)
    k2, l2 = G.primitive_root(c2.word)
    if not allow_coincident and (k1 == k2 or G.canonical_class(inverse(k2)).word == k1):
        raise CoincidentAxesError(f"[{c1}] and [{c2}] are powers of a common primitive class")
    return k1, l1, k2, l2


def _budget_counts(points: list[_RawPoint], budgets: Iterable[int]) -> list[int]:
    return [sum(1 for p in points if len(p.conjugator) <= b) for b in budgets]


def _apply_budget(points: list[_RawPoint], budget: int | None, start: int) -> list[_RawPoint]:
    if budget is None:
        b = start
        longest = max((len(p.conjugator) for p in points), default=0)
        while True:
            c = _budget_counts(points, (b, 2 * b, 4 * b))
            if c[0] == c[1] == c[2] or b > longest:
                break
            b *= 2
        return [p for p in points if len(p.conjugator) <= b]
    c = _budget_counts(points, (max(1, budget // 4), max(1, budget // 2), budget))
    if not c[0] == c[1] == c[2]:
        warnings.warn(
            f"intersection count not stable at budget {budget} (counts {c[0]}, {c[1]}, {c[2]})",
            BudgetWarning,
            stacklevel=3,
        )
    return [p for p in points if len(p.conjugator) <= budget]


def _points(
    rep: Representation, c1: ConjugacyClass, c2: ConjugacyClass, budget: int | None, allow_coincident: bool = False
):
    G = rep.group
    k1, l1, k2, l2 = _roots(G, c1, c2, allow_coincident)
    pts = _cached_points(rep.genus, k1, k2) if rep is representation(rep.genus) else _primitive_points(rep, k1, k2)
    pts = _apply_budget(pts, budget, default_budget(rep.genus, c1.word, c2.word))
    return k1, l1, k2, l2, pts


@lru_cache(maxsize=4096)
def _cached_points(genus: int, k1: Word, k2: Word) -> list[_RawPoint]:
    return _primitive_points(representation(genus), k1, k2)


def enumerate_intersections(
    rep: Representation, c1: ConjugacyClass, c2: ConjugacyClass, budget: int | None = None
) -> list[IntersectionPoint]:
    """Transverse intersections of the closed geodesics of ``c1`` and ``c2``, one per double coset.

    A class of level ``l`` is the geodesic of its root traversed ``l``
    times, so every geometric crossing of the roots contributes ``l1 * l2``
    entries.  Raises :class:`CoincidentAxesError` if the classes share a
    primitive root up to inversion.
    """
    k1, l1, k2, l2, pts = _points(rep, c1, c2, budget)
    G = rep.group
    out = []
    shift = [rep.evaluate(power(k1, i)) for i in range(l1)]
    for p in pts:
        for i in range(l1):
            # the lift through k1^i u sits one period of the root further along axis 1
            loc = complex(shift[i](p.location))
            for j in range(l2):
                u = G.dehn_reduce(power(k1, i) + p.conjugator + power(k2, j))
                key = (i, j, round(p.tau, 9), round(p.tau2, 9))
                out.append(IntersectionPoint(loc, p.sign, u, key))
    return out


def goldman_bracket(
    c1: ConjugacyClass, c2: ConjugacyClass, budget: int | None = None, rep: Representation | None = None
) -> BracketResult:
    """Goldman bracket of two conjugacy classes: the signed sum of loop products at intersections."""
    if c1.genus != c2.genus:
        raise ValueError("classes belong to different surface groups")
    genus = c1.genus
    if c1.is_identity or c2.is_identity:
        return BracketResult.zero(genus)
    rep = rep or representation(genus)
    G = rep.group
    # for powers of one primitive class the crossings of distinct lifts are
    # exactly the transverse intersections of a curve with a push-off of the other
    k1, l1, k2, l2, pts = _points(rep, c1, c2, budget, allow_coincident=True)
    terms: dict[ConjugacyClass, int] = {}
    for p in pts:
        prod = power(k1, l1) + p.conjugator + power(k2, l2) + inverse(p.conjugator)
        cls = G.canonical_class(prod)
        terms[cls] = terms.get(cls, 0) + p.sign * l1 * l2
    return BracketResult(genus, terms)


def bracket_linear(x: BracketResult, y: BracketResult, budget: int | None = None) -> BracketResult:
    """Bilinear extension of the bracket to integer combinations of classes."""
    out = BracketResult.zero(x.genus)
    for c1, n1 in x.terms.items():
        for c2, n2 in y.terms.items():
            out = out + goldman_bracket(c1, c2, budget).scaled(n1 * n2)
    return out
