"""Fuchsian representation of the surface group and isometries of the upper half-plane.

The representation comes from the regular 4g-gon centred at the origin of
the Poincare disk with interior angles 2*pi/(4g).  Each side pairing is a
rotation, a translation along the real diameter and a second rotation; the
matrices are conjugated into SL(2, R) by the Cayley transform and finally
reflected so that the surface orientation gives <A_i, B_i> = +1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .words import SurfaceGroup, Word

__all__ = [
    "Geodesic",
    "IsometryKind",
    "Mobius",
    "NotHyperbolicError",
    "Representation",
    "RepresentationError",
    "axis",
    "build_representation",
    "classify",
    "translation_length",
]

DEFAULT_TOL = 1e-9


# Above this entry size the determinant computed from the entries loses more
# precision (eps * |m|^2) than a product of unimodular factors ever drifts.
_RENORMALIZE_MAX_ENTRY = 1e3


def _unimodular(m: np.ndarray) -> np.ndarray:
    if np.abs(m).max() > _RENORMALIZE_MAX_ENTRY:
        return m
    return m / math.sqrt(abs(np.linalg.det(m)))


class RepresentationError(RuntimeError):
    pass


class NotHyperbolicError(ValueError):
    pass


class IsometryKind(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


class Mobius:
    """An element of PSL(2, R), stored as a real 2x2 matrix of determinant 1.

    ``M`` and ``-M`` act identically; comparisons take that into account.
    """

    __slots__ = ("m",)

    def __init__(self, a, b=None, c=None, d=None):
        if b is None:
            m = np.array(a, dtype=float).reshape(2, 2)
        else:
            m = np.array([[a, b], [c, d]], dtype=float)
        self.m = m

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(np.eye(2))

    @property
    def a(self) -> float:
        return float(self.m[0, 0])

    @property
    def b(self) -> float:
        return float(self.m[0, 1])

    @property
    def c(self) -> float:
        return float(self.m[1, 0])

    @property
    def d(self) -> float:
        return float(self.m[1, 1])

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.m))

    @property
    def trace(self) -> float:
        return float(self.m[0, 0] + self.m[1, 1])

    def normalized(self) -> "Mobius":
        det = self.det
        if det <= 0:
            raise ValueError(f"determinant must be positive, got {det}")
        return Mobius(self.m / math.sqrt(det))

    def __matmul__(self, other: "Mobius") -> "Mobius":
        return Mobius(self.m @ other.m)

    def inverse(self) -> "Mobius":
        a, b, c, d = self.m.ravel()
        return Mobius(np.array([[d, -b], [-c, a]]))

    def __pow__(self, n: int) -> "Mobius":
        base = self if n >= 0 else self.inverse()
        return Mobius(np.linalg.matrix_power(base.m, abs(n)))

    def __call__(self, z):
        """Act on a point of the closed upper half-plane; ``math.inf`` is the point at infinity."""
        a, b, c, d = self.m.ravel()
        if z == math.inf:
            return a / c if c != 0 else math.inf
        den = c * z + d
        if den == 0:
            return math.inf
        return (a * z + b) / den

    def distance_to_identity(self) -> float:
        """Sup-norm distance from the nearer of +I and -I."""
        eye = np.eye(2)
        return float(min(np.abs(self.m - eye).max(), np.abs(self.m + eye).max()))

    def is_identity(self, tol: float = DEFAULT_TOL) -> bool:
        return self.distance_to_identity() <= tol

    def close_to(self, other: "Mobius", tol: float = DEFAULT_TOL) -> bool:
        return float(min(np.abs(self.m - other.m).max(), np.abs(self.m + other.m).max())) <= tol

    def entries(self) -> tuple[float, float, float, float]:
        return tuple(float(x) for x in self.m.ravel())

    def __repr__(self) -> str:
        return "Mobius(" + ", ".join(f"{x:.17g}" for x in self.m.ravel()) + ")"


@dataclass(frozen=True)
class Geodesic:
    """An oriented geodesic of the upper half-plane, given by its boundary endpoints.

    Translation runs from ``repelling`` towards ``attracting``; either may be
    ``math.inf``.
    """

    attracting: float
    repelling: float

    def __post_init__(self):
        if self.attracting == self.repelling:
            raise ValueError("geodesic endpoints must differ")

    def reversed(self) -> "Geodesic":
        return Geodesic(self.repelling, self.attracting)

    def image(self, m: Mobius) -> "Geodesic":
        return Geodesic(m(self.attracting), m(self.repelling))

    def normalizer(self, through: complex | None = None) -> Mobius:
        """A map in PSL(2, R) sending this geodesic to the positive imaginary axis, oriented upwards.

        If ``through`` is given, its orthogonal projection onto the geodesic
        is sent to ``i``.
        """
        p, q = self.attracting, self.repelling
        if p == math.inf:
            m = np.array([[1.0, -q], [0.0, 1.0]])
        elif q == math.inf:
            m = np.array([[0.0, -1.0], [1.0, -p]])
        else:
            m = np.array([[1.0, -q], [1.0, -p]])
        if np.linalg.det(m) < 0:
            m = np.array([[-1.0, 0.0], [0.0, 1.0]]) @ m
        n = Mobius(m).normalized()
        if through is not None:
            h = abs(n(through))
            n = Mobius(np.array([[1.0, 0.0], [0.0, h]])).normalized() @ n
        return n


def classify(m: Mobius, tol: float = DEFAULT_TOL) -> IsometryKind:
    if m.is_identity(tol):
        return IsometryKind.IDENTITY
    t = abs(m.trace)
    if abs(t - 2.0) <= tol:
        return IsometryKind.PARABOLIC
    return IsometryKind.ELLIPTIC if t < 2.0 else IsometryKind.HYPERBOLIC


def _require_hyperbolic(m: Mobius, tol: float) -> None:
    kind = classify(m, tol)
    if kind is not IsometryKind.HYPERBOLIC:
        raise NotHyperbolicError(f"expected a hyperbolic element, got {kind.value}")


def translation_length(m: Mobius, tol: float = DEFAULT_TOL) -> float:
    _require_hyperbolic(m, tol)
    return 2.0 * math.acosh(abs(m.trace) / 2.0)


def axis(m: Mobius, tol: float = DEFAULT_TOL) -> Geodesic:
    """The invariant geodesic of a hyperbolic element, oriented in its translation direction."""
    _require_hyperbolic(m, tol)
    a, b, c, d = m.m.ravel()
    if a + d < 0:
        a, b, c, d = -a, -b, -c, -d
    disc = math.sqrt((a + d) ** 2 - 4.0)
    if abs(c) <= 1e-15 * max(abs(a), abs(d)):
        # z -> (a z + b) / d fixes infinity
        finite = float(b / (d - a))
        return Geodesic(math.inf, finite) if a > d else Geodesic(finite, math.inf)
    # roots of c z^2 + (d - a) z - b = 0, written to avoid cancellation
    s = (a - d) + math.copysign(disc, a - d) if a != d else disc
    r1 = s / (2.0 * c)
    r2 = -b / (c * r1) if r1 != 0 else ((a - d) - disc) / (2.0 * c)
    # |m'(z)| = 1 / (c z + d)^2 is < 1 at the attracting fixed point
    if abs(c * r1 + d) > abs(c * r2 + d):
        return Geodesic(float(r1), float(r2))
    return Geodesic(float(r2), float(r1))


def _disk_rotation(theta: float) -> np.ndarray:
    return np.array([[np.exp(0.5j * theta), 0.0], [0.0, np.exp(-0.5j * theta)]])


def _disk_translation(dist: float) -> np.ndarray:
    ch, sh = math.cosh(dist / 2.0), math.sinh(dist / 2.0)
    return np.array([[ch, sh], [sh, ch]], dtype=complex)


# Cayley transform z -> (z - i)/(z + i) from the upper half-plane to the disk
_CAYLEY = np.array([[1.0, -1.0j], [1.0, 1.0j]])
_CAYLEY_INV = np.linalg.inv(_CAYLEY)


def to_disk(z: complex) -> complex:
    if z == math.inf:
        return 1.0 + 0.0j
    return (z - 1j) / (z + 1j)


def from_disk(w: complex) -> complex:
    if w == 1:
        return math.inf
    return 1j * (1 + w) / (1 - w)


def _disk_to_upper(m: np.ndarray) -> np.ndarray:
    r = _CAYLEY_INV @ m @ _CAYLEY
    if np.abs(r.imag).max() > 1e-10 * max(1.0, np.abs(r).max()):
        raise RepresentationError("side pairing is not real after the Cayley transform")
    r = r.real
    return r / math.sqrt(np.linalg.det(r))


class Representation:
    """The discrete faithful representation of the genus-``genus`` surface group.

    ``images`` maps every letter (generators and inverses) to its Mobius image.
    """

    RENORMALIZE_EVERY = 8

    def __init__(self, genus: int, images: dict[int, Mobius], tolerance: float = DEFAULT_TOL):
        self.genus = genus
        self.group = SurfaceGroup(genus)
        self.images = dict(images)
        self.tolerance = tolerance
        self._mats = {x: m.m for x, m in self.images.items()}
        # tile centres of the neighbours of the base polygon, one per letter
        self.base_point = 1j
        self.neighbor_centers = {x: m(self.base_point) for x, m in self.images.items()}

    def __repr__(self) -> str:
        return f"Representation(genus={self.genus}, tolerance={self.tolerance:g})"

    def matrix(self, w: Sequence[int]) -> np.ndarray:
        m = np.eye(2)
        for k, x in enumerate(w, 1):
            m = m @ self._mats[x]
            if k % self.RENORMALIZE_EVERY == 0:
                m = _unimodular(m)
        return _unimodular(m)

    def evaluate(self, w: Sequence[int]) -> Mobius:
        return Mobius(self.matrix(w))

    def relator_residual(self) -> float:
        return self.evaluate(self.group.relator).distance_to_identity()

    # -- polygon geometry ---------------------------------------------------

    @property
    def inradius(self) -> float:
        """Distance from the polygon centre to a side midpoint."""
        return math.acosh(1.0 / math.tan(math.pi / (4 * self.genus)))

    @property
    def circumradius(self) -> float:
        return math.acosh(1.0 / math.tan(math.pi / (4 * self.genus)) ** 2)

    def polygon_vertices_disk(self) -> list[complex]:
        """Vertices of the fundamental polygon in the disk, counterclockwise."""
        n = 4 * self.genus
        r = math.tanh(self.circumradius / 2.0)
        return [r * complex(math.cos(2 * math.pi * (k + 0.5) / n), math.sin(2 * math.pi * (k + 0.5) / n))
                for k in range(n)]

    def outside_letter(self, z: complex, slack: float = 0.0) -> int | None:
        """A letter ``x`` whose neighbouring tile centre is strictly closer to ``z`` than the base point, if any.

        The polygon is the Dirichlet domain of the base point, so ``None``
        means ``z`` lies in the closed base polygon.  Among violators the
        nearest neighbour is returned.
        """
        base = abs(z - self.base_point) ** 2 / self.base_point.imag
        best, best_val = None, base * (1.0 - slack)
        for x, c in self.neighbor_centers.items():
            val = abs(z - c) ** 2 / c.imag
            if val < best_val:
                best, best_val = x, val
        return best

    def locate(self, z: complex) -> tuple[Word, np.ndarray]:
        """Find ``gamma`` with ``z`` in the tile ``gamma P``; returns its word and matrix."""
        word: list[int] = []
        m = np.eye(2)
        cur = z
        for _ in range(100000):
            x = self.outside_letter(cur, slack=1e-12)
            if x is None:
                return tuple(word), m
            word.append(x)
            m = m @ self._mats[x]
            inv = self._mats[-x]
            cur = (inv[0, 0] * cur + inv[0, 1]) / (inv[1, 0] * cur + inv[1, 1])
        raise RepresentationError("point location did not terminate")


def build_representation(genus: int, tolerance: float = DEFAULT_TOL) -> Representation:
    """Side pairings of the regular 4g-gon, as a representation into PSL(2, R)."""
    G = SurfaceGroup(genus)
    n = 4 * genus
    # distance from the centre to a side midpoint; cosh = cot(pi / n)
    mid = math.acosh(1.0 / math.tan(math.pi / n))

    def angle(k: int) -> float:
        return 2.0 * math.pi * k / n

    def pairing(src: int, dst: int) -> np.ndarray:
        # map side src onto side dst, carrying the polygon across side dst
        m = _disk_rotation(angle(dst)) @ _disk_translation(2.0 * mid) @ _disk_rotation(-angle(src) - math.pi)
        return _disk_to_upper(m)

    reflect = np.diag([1.0, -1.0])
    images: dict[int, Mobius] = {}
    for i in range(genus):
        s = 4 * i
        a = reflect @ pairing(s + 2, s) @ reflect
        b = reflect @ pairing(s + 1, s + 3) @ reflect
        for x, m in ((i + 1, a), (genus + i + 1, b)):
            images[x] = Mobius(m)
            images[-x] = Mobius(m).inverse()
    rep = Representation(genus, images, tolerance)
    residual = rep.relator_residual()
    if residual > tolerance:
        raise RepresentationError(f"relator maps to {residual:.3g} away from the identity")
    for x in G.letters:
        if classify(images[x], tolerance) is not IsometryKind.HYPERBOLIC:
            raise RepresentationError(f"generator {G.format((x,))} is not hyperbolic")
    return rep
