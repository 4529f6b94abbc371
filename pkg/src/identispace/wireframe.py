"""Plan capsule segments along the parameter grid and tessellate them.

The plan walks every grid point (i, j) for i in [0, 2*lat_ribs] and
j in [0, long_ribs] and lays short capsule segments along both grid
directions, subdividing each unit step by the configured densities.  The
doubled i-range is what closes the Klein bottle (its pattern only repeats
after two turns); the torus and Roman surface simply get traced twice, which
is harmless since components may overlap freely.

Each capsule is tessellated as an open cylinder capped by two hemispheres
sharing its rings, a closed orientable mesh with Euler characteristic 2 by
construction.  Tessellation uses precomputed scalar trig tables and otherwise
only IEEE arithmetic, so batched and one-at-a-time tessellation produce
bit-identical vertices and the whole build is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geom import SurfaceParams, Vec3, cosd, sind, surface_point
from .mesh_io import TriangleMesh

__all__ = [
    "WireframeSpec",
    "Segment",
    "Capsule",
    "SPHERE_EPS",
    "plan_segments",
    "count_degenerate_segments",
    "capsule_mesh",
    "tessellate_segments",
    "build_wireframe",
]

SPHERE_EPS = 1e-9  # mm; shorter segments degenerate to spheres


@dataclass(frozen=True)
class WireframeSpec:
    """Densities, strut thickness and tessellation resolution for one model."""

    surface: SurfaceParams
    outer_density: int = 8
    inner_density: int = 8
    thickness: float = 1.2
    capsule_resolution: int = 12

    def __post_init__(self) -> None:
        if self.thickness <= 0:
            raise ValueError(f"thickness must be > 0, got {self.thickness}")
        if self.outer_density < 1:
            raise ValueError(f"outer_density must be >= 1, got {self.outer_density}")
        if self.inner_density < 1:
            raise ValueError(f"inner_density must be >= 1, got {self.inner_density}")
        if self.capsule_resolution < 4:
            raise ValueError(
                f"capsule_resolution must be >= 4, got {self.capsule_resolution}"
            )


@dataclass(frozen=True)
class Segment:
    """One capsule placement; key is (i, j, direction, step) with direction
    0 along i and 1 along j."""

    a: Vec3
    b: Vec3
    radius: float
    key: tuple[int, int, int, int]


@dataclass(frozen=True)
class Capsule:
    """Convex hull of two equal spheres; coincident centers give a sphere."""

    center_a: Vec3
    center_b: Vec3
    radius: float

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError(f"capsule radius must be > 0, got {self.radius}")


def plan_segments(spec: WireframeSpec, legacy_overshoot: bool = False) -> list[Segment]:
    """Ordered segment plan; (2*lat_ribs+1)*(long_ribs+1)*(outer+inner) entries.

    ``legacy_overshoot`` reproduces the literal loop bounds of the original
    modeling script, which run one substep past each cell and duplicate a
    little geometry; the default clamps substeps so counts are exact.
    """
    p = spec.surface
    do, di = spec.outer_density, spec.inner_density
    extra = 1 if legacy_overshoot else 0
    segments = []
    for i in range(2 * p.lat_ribs + 1):
        for j in range(p.long_ribs + 1):
            for k in range(do + extra):
                segments.append(
                    Segment(
                        surface_point(i + k / do, j, p),
                        surface_point(i + (k + 1) / do, j, p),
                        spec.thickness,
                        (i, j, 0, k),
                    )
                )
            for k in range(di + extra):
                segments.append(
                    Segment(
                        surface_point(i, j + k / di, p),
                        surface_point(i, j + (k + 1) / di, p),
                        spec.thickness,
                        (i, j, 1, k),
                    )
                )
    return segments


def count_degenerate_segments(segments: list[Segment]) -> int:
    return sum(1 for s in segments if s.a.distance(s.b) < SPHERE_EPS)


@lru_cache(maxsize=None)
def _tables(resolution: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Azimuth and latitude cos/sin tables (exact at quadrant angles)."""
    n = resolution
    m = (resolution + 1) // 2
    caz = np.array([cosd(360.0 * s / n) for s in range(n)])
    saz = np.array([sind(360.0 * s / n) for s in range(n)])
    clat = np.array([cosd(90.0 * t / m) for t in range(m)])
    slat = np.array([sind(90.0 * t / m) for t in range(m)])
    return caz, saz, clat, slat


@lru_cache(maxsize=None)
def _capsule_template(resolution: int) -> np.ndarray:
    """Triangle index template for the capsule ladder: pole, 2m rings, pole."""
    n = resolution
    m = (resolution + 1) // 2
    return _ladder_template(n, 2 * m)


@lru_cache(maxsize=None)
def _sphere_template(resolution: int) -> np.ndarray:
    n = resolution
    m = (resolution + 1) // 2
    return _ladder_template(n, 2 * m - 1)


def _ladder_template(n: int, nrings: int) -> np.ndarray:
    tris = []
    ring = lambda k, s: 1 + (k - 1) * n + (s % n)
    top = 1 + nrings * n
    for s in range(n):
        tris.append((0, ring(1, s + 1), ring(1, s)))
    for k in range(1, nrings):
        for s in range(n):
            lo, lo1 = ring(k, s), ring(k, s + 1)
            hi, hi1 = ring(k + 1, s), ring(k + 1, s + 1)
            tris.append((lo, lo1, hi1))
            tris.append((lo, hi1, hi))
    for s in range(n):
        tris.append((ring(nrings, s), ring(nrings, s + 1), top))
    return np.array(tris, dtype=np.int32)


def _frames(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Right-handed orthonormal frame (u, v, w) per segment, w along b-a.

    The in-plane axes derive from the global axis least aligned with w (ties
    broken x, y, z) so frames vary continuously along a rib.
    """
    d = b - a
    length = np.sqrt((d * d).sum(axis=1))
    w = d / length[:, None]
    pick = np.argmin(np.abs(w), axis=1)
    e = np.zeros_like(w)
    e[np.arange(len(w)), pick] = 1.0
    u = np.cross(w, e)
    u /= np.sqrt((u * u).sum(axis=1))[:, None]
    v = np.cross(w, u)
    return u, v, w


def _capsule_vertices(
    a: np.ndarray, b: np.ndarray, radius: np.ndarray, resolution: int
) -> np.ndarray:
    """Vertices (S, 2mn+2, 3) for non-degenerate capsules."""
    n = resolution
    m = (resolution + 1) // 2
    caz, saz, clat, slat = _tables(resolution)
    u, v, w = _frames(a, b)
    # unit directions around the axis, one per azimuth slot: (S, n, 3)
    plane = caz[None, :, None] * u[:, None, :] + saz[None, :, None] * v[:, None, :]

    # ladder of 2m rings bottom-to-top: bottom hemisphere descends to the
    # equator at a (latitudes -90(m-k)/m), top hemisphere rises from b
    t_bottom = np.arange(m - 1, -1, -1)
    t_top = np.arange(m)
    cl = np.concatenate([clat[t_bottom], clat[t_top]])
    sl = np.concatenate([-slat[t_bottom], slat[t_top]])
    centers = np.concatenate(
        [np.repeat(a[:, None, :], m, axis=1), np.repeat(b[:, None, :], m, axis=1)],
        axis=1,
    )  # (S, 2m, 3)

    r = radius[:, None, None, None]
    rings = centers[:, :, None, :] + r * (
        cl[None, :, None, None] * plane[:, None, :, :]
        + sl[None, :, None, None] * w[:, None, None, :]
    )  # (S, 2m, n, 3)

    S = len(a)
    out = np.empty((S, 2 * m * n + 2, 3))
    out[:, 0] = a - radius[:, None] * w
    out[:, 1:-1] = rings.reshape(S, 2 * m * n, 3)
    out[:, -1] = b + radius[:, None] * w
    return out


def _sphere_vertices(
    a: np.ndarray, b: np.ndarray, radius: np.ndarray, resolution: int
) -> np.ndarray:
    """Vertices (S, (2m-1)n+2, 3) for degenerate capsules, axis fixed to z."""
    n = resolution
    m = (resolution + 1) // 2
    caz, saz, clat, slat = _tables(resolution)
    center = (a + b) / 2.0
    t = np.arange(1, 2 * m) - m  # latitudes 90*t/m for t in [1-m, m-1]
    cl = clat[np.abs(t)]
    sl = np.sign(t) * slat[np.abs(t)]
    plane = np.zeros((n, 3))
    plane[:, 0] = caz
    plane[:, 1] = saz
    r = radius[:, None, None, None]
    rings = center[:, None, None, :] + r * (
        cl[None, :, None, None] * plane[None, None, :, :]
        + sl[None, :, None, None] * np.array([0.0, 0.0, 1.0])[None, None, None, :]
    )
    S = len(a)
    out = np.empty((S, (2 * m - 1) * n + 2, 3))
    out[:, 0] = center - radius[:, None] * np.array([0.0, 0.0, 1.0])
    out[:, 1:-1] = rings.reshape(S, (2 * m - 1) * n, 3)
    out[:, -1] = center + radius[:, None] * np.array([0.0, 0.0, 1.0])
    return out


def capsule_counts(resolution: int) -> tuple[int, int]:
    """(vertex, triangle) counts of one non-degenerate capsule mesh."""
    n = resolution
    m = (resolution + 1) // 2
    return 2 * m * n + 2, 4 * m * n


def sphere_counts(resolution: int) -> tuple[int, int]:
    """(vertex, triangle) counts of one degenerate (sphere) capsule mesh."""
    n = resolution
    m = (resolution + 1) // 2
    return (2 * m - 1) * n + 2, 2 * n * (2 * m - 1)


def capsule_mesh(c: Capsule, resolution: int) -> TriangleMesh:
    """Closed, outward-oriented triangle mesh of one capsule.

    Falls back to a full sphere when the centers are closer than
    ``SPHERE_EPS`` so pinched segments never produce degenerate cylinders.
    """
    if resolution < 4:
        raise ValueError(f"resolution must be >= 4, got {resolution}")
    if not (c.center_a.is_finite() and c.center_b.is_finite()):
        raise ValueError("capsule centers must be finite")
    a = np.array([c.center_a], dtype=np.float64)
    b = np.array([c.center_b], dtype=np.float64)
    r = np.array([c.radius], dtype=np.float64)
    if c.center_a.distance(c.center_b) < SPHERE_EPS:
        verts = _sphere_vertices(a, b, r, resolution)[0]
        tris = _sphere_template(resolution)
    else:
        verts = _capsule_vertices(a, b, r, resolution)[0]
        tris = _capsule_template(resolution)
    return TriangleMesh(verts, tris.copy())


def build_wireframe(spec: WireframeSpec, legacy_overshoot: bool = False) -> TriangleMesh:
    """Tessellate the whole plan; one closed component per segment, in plan order."""
    return tessellate_segments(plan_segments(spec, legacy_overshoot), spec.capsule_resolution)


def tessellate_segments(segments: list[Segment], res: int) -> TriangleMesh:
    a = np.array([s.a for s in segments], dtype=np.float64)
    b = np.array([s.b for s in segments], dtype=np.float64)
    radius = np.array([s.radius for s in segments], dtype=np.float64)

    d = b - a
    lengths = np.sqrt((d * d).sum(axis=1))
    is_sphere = lengths < SPHERE_EPS

    v_cap, f_cap = capsule_counts(res)
    v_sph, f_sph = sphere_counts(res)
    vcounts = np.where(is_sphere, v_sph, v_cap)
    fcounts = np.where(is_sphere, f_sph, f_cap)
    voff = np.concatenate([[0], np.cumsum(vcounts)])
    foff = np.concatenate([[0], np.cumsum(fcounts)])

    vertices = np.empty((int(voff[-1]), 3), dtype=np.float64)
    triangles = np.empty((int(foff[-1]), 3), dtype=np.int32)
    component_ids = np.repeat(
        np.arange(len(segments), dtype=np.int32), fcounts
    )

    for mask, nv, nf, make, template in (
        (~is_sphere, v_cap, f_cap, _capsule_vertices, _capsule_template(res)),
        (is_sphere, v_sph, f_sph, _sphere_vertices, _sphere_template(res)),
    ):
        idx = np.flatnonzero(mask)
        if len(idx) == 0:
            continue
        verts = make(a[idx], b[idx], radius[idx], res)
        vtargets = (voff[idx][:, None] + np.arange(nv)[None, :]).ravel()
        vertices[vtargets] = verts.reshape(-1, 3)
        tvals = template[None, :, :] + voff[idx][:, None, None].astype(np.int32)
        ftargets = (foff[idx][:, None] + np.arange(nf)[None, :]).ravel()
        triangles[ftargets] = tvals.reshape(-1, 3)

    return TriangleMesh(vertices, triangles, component_ids)
