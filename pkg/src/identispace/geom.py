"""Surface parametrizations and the small vector/rotation algebra they need.

Angles are degrees throughout.  Trigonometry goes through :func:`cosd` /
:func:`sind`, which reduce the argument modulo 360 before converting to
radians and return exact values at multiples of 90 degrees.  Both choices
matter beyond accuracy: grid evaluations separated by a full period come out
bit-identical, so downstream welding and closure checks see exact
coincidence instead of last-ulp noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

__all__ = [
    "Vec3",
    "RotationMatrix",
    "SurfaceKind",
    "SurfaceParams",
    "cosd",
    "sind",
    "rotation",
    "torus_point",
    "half_lemniscate",
    "klein_point",
    "steiner_map",
    "roman_sphere_point",
    "roman_point",
    "surface_point",
    "default_params",
]


def _reduce_degrees(a: float) -> float:
    r = math.fmod(a, 360.0)
    if r < 0.0:
        r += 360.0
    return r


def cosd(a: float) -> float:
    """Cosine of an angle in degrees, exact at multiples of 90."""
    r = _reduce_degrees(a)
    if r == 0.0:
        return 1.0
    if r == 90.0 or r == 270.0:
        return 0.0
    if r == 180.0:
        return -1.0
    return math.cos(math.radians(r))


def sind(a: float) -> float:
    """Sine of an angle in degrees, exact at multiples of 90."""
    r = _reduce_degrees(a)
    if r == 0.0 or r == 180.0:
        return 0.0
    if r == 90.0:
        return 1.0
    if r == 270.0:
        return -1.0
    return math.sin(math.radians(r))


class Vec3(NamedTuple):
    """Point or vector in R^3, coordinates in millimeters."""

    x: float
    y: float
    z: float

    def __add__(self, other: "Vec3") -> "Vec3":  # type: ignore[override]
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def distance(self, other: "Vec3") -> float:
        return (self - other).norm()

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)


@dataclass(frozen=True)
class RotationMatrix:
    """3x3 rotation acting on column vectors."""

    rows: tuple[tuple[float, float, float], ...]

    def apply(self, v: Vec3) -> Vec3:
        r = self.rows
        return Vec3(
            r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
            r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
        )

    def __matmul__(self, other: "RotationMatrix") -> "RotationMatrix":
        a, b = self.rows, other.rows
        return RotationMatrix(
            tuple(
                tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
                for i in range(3)
            )
        )

    def transpose(self) -> "RotationMatrix":
        r = self.rows
        return RotationMatrix(tuple(tuple(r[j][i] for j in range(3)) for i in range(3)))

    def determinant(self) -> float:
        r = self.rows
        return (
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        )

    def orthogonality_error(self) -> float:
        """max |R^T R - I| over entries."""
        rt = self.transpose()
        prod = (rt @ self).rows
        return max(
            abs(prod[i][j] - (1.0 if i == j else 0.0))
            for i in range(3)
            for j in range(3)
        )


def rotation(ax: float, ay: float, az: float) -> RotationMatrix:
    """Rotation by ax, ay, az degrees about x, y, z, composed as Rz @ Ry @ Rx."""
    cx, sx = cosd(ax), sind(ax)
    cy, sy = cosd(ay), sind(ay)
    cz, sz = cosd(az), sind(az)
    rx = RotationMatrix(((1.0, 0.0, 0.0), (0.0, cx, -sx), (0.0, sx, cx)))
    ry = RotationMatrix(((cy, 0.0, sy), (0.0, 1.0, 0.0), (-sy, 0.0, cy)))
    rz = RotationMatrix(((cz, -sz, 0.0), (sz, cz, 0.0), (0.0, 0.0, 1.0)))
    return rz @ ry @ rx


class SurfaceKind(Enum):
    TORUS = "torus"
    KLEIN = "klein"
    ROMAN = "roman"


@dataclass(frozen=True)
class SurfaceParams:
    """Shared parameter block for the three surfaces.

    ``outer_radius``/``inner_radius`` are in millimeters.  ``lat_ribs`` and
    ``long_ribs`` count grid lines in the two parameter directions.
    ``amplitude`` and ``phase_offset`` only affect the Klein bottle: they
    control the oscillation that pulls the two halves of each transversal
    figure-8 fiber apart so the fibers interweave instead of self-intersect.
    """

    kind: SurfaceKind
    outer_radius: float = 30.0
    inner_radius: float = 10.0
    lat_ribs: int = 18
    long_ribs: int = 36
    amplitude: float = 0.25
    phase_offset: float = 90.0

    def __post_init__(self) -> None:
        if not isinstance(self.kind, SurfaceKind):
            raise ValueError(f"kind must be a SurfaceKind, got {self.kind!r}")
        if self.lat_ribs < 3:
            raise ValueError(f"lat_ribs must be >= 3, got {self.lat_ribs}")
        if self.long_ribs < 3:
            raise ValueError(f"long_ribs must be >= 3, got {self.long_ribs}")
        if self.outer_radius <= 0:
            raise ValueError(f"outer_radius must be > 0, got {self.outer_radius}")
        if self.kind in (SurfaceKind.TORUS, SurfaceKind.KLEIN):
            if not self.outer_radius > self.inner_radius > 0:
                raise ValueError(
                    "outer_radius > inner_radius > 0 required, got "
                    f"outer_radius={self.outer_radius} inner_radius={self.inner_radius}"
                )
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")


def default_params(kind: SurfaceKind) -> SurfaceParams:
    return SurfaceParams(kind=kind)


def torus_point(i: float, j: float, p: SurfaceParams) -> Vec3:
    """Torus: circle of radius inner_radius swept around the z axis."""
    if p.kind is not SurfaceKind.TORUS:
        raise ValueError("torus_point requires params of kind TORUS")
    u = i * 360.0 / p.lat_ribs
    v = j * 360.0 / p.long_ribs
    profile = Vec3(p.inner_radius * cosd(u) + p.outer_radius, 0.0, p.inner_radius * sind(u))
    return rotation(0.0, 0.0, v).apply(profile)


def half_lemniscate(alpha: float, ampl: float, phase: float = 90.0) -> Vec3:
    """One half of a Gerono figure-8, with an out-of-plane cosine wobble.

    ``alpha`` in [0, 1] walks the half curve; ``ampl`` scales the wobble
    (0 gives the flat lemniscate exactly).
    """
    beta = 90.0 + 180.0 * alpha
    c = cosd(beta)
    return Vec3(c, sind(beta) * c, ampl * cosd(phase + beta))


def _rot_z(v: Vec3, angle: float) -> Vec3:
    c, s = cosd(angle), sind(angle)
    return Vec3(v.x * c - v.y * s, v.x * s + v.y * c, v.z)


def klein_point(i: float, j: float, p: SurfaceParams) -> Vec3:
    """Figure-8 Klein bottle: half-lemniscate fibers swept along a Mobius path.

    The fiber is spun half a turn (a_i/2) while its anchor circles a full turn
    (a_i), so the pattern closes after i has advanced by 2*lat_ribs.
    """
    if p.kind is not SurfaceKind.KLEIN:
        raise ValueError("klein_point requires params of kind KLEIN")
    a_i = 360.0 * i / p.lat_ribs
    a_j = 360.0 * j / p.long_ribs
    fiber = half_lemniscate(a_j / 360.0, p.amplitude, p.phase_offset)
    pt = Vec3(p.outer_radius, 0.0, 0.0) + _rot_z(fiber.scaled(p.inner_radius), a_i / 2.0)
    pt = Vec3(pt.x, -pt.z, pt.y)  # quarter turn about the x axis
    return _rot_z(pt, a_i)


def steiner_map(v: Vec3) -> Vec3:
    """Quadratic map (x,y,z) -> (yz, xz, xy) sending a sphere to the Roman surface."""
    return Vec3(v.y * v.z, v.x * v.z, v.x * v.y)


def roman_sphere_point(i: float, j: float, p: SurfaceParams) -> Vec3:
    u = i * 360.0 / p.lat_ribs
    v = j * 180.0 / p.long_ribs
    cu = cosd(u)
    return Vec3(
        p.outer_radius * cu * cosd(v),
        p.outer_radius * cu * sind(v),
        p.outer_radius * sind(u),
    )


def roman_point(i: float, j: float, p: SurfaceParams) -> Vec3:
    """Roman (Steiner) surface: sphere point pushed through the quadratic map."""
    if p.kind is not SurfaceKind.ROMAN:
        raise ValueError("roman_point requires params of kind ROMAN")
    return steiner_map(roman_sphere_point(i, j, p))


def surface_point(i: float, j: float, p: SurfaceParams) -> Vec3:
    """Evaluate whichever surface ``p`` selects; i and j may be fractional."""
    if p.kind is SurfaceKind.TORUS:
        return torus_point(i, j, p)
    if p.kind is SurfaceKind.KLEIN:
        return klein_point(i, j, p)
    return roman_point(i, j, p)
