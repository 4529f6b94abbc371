"""Indexed triangle meshes, binary/ASCII STL, and watertightness reports.

Meshes are unions of closed oriented component surfaces; components may
overlap in space but never share vertex indices unless a reader welded them.
``read_stl`` welds vertices at exact 32-bit bit equality (signed zeros stay
distinct), so re-reading a file reconstructs precisely the incidence that the
coordinates encode.

Watertightness is judged per connected component on directed edge use: every
undirected edge must be traversed the same number of times in each direction.
A closed oriented surface satisfies this with one traversal each way; exact
duplicates of a closed surface (which arise when a periodic parameter range
is traced twice and welding merges the copies) stay balanced and therefore
stay watertight, while any gap, flip or stray border does not.  The stricter
"exactly one traversal each way" condition is reported separately as
``edge_manifold``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .geom import Vec3

__all__ = [
    "TriangleMesh",
    "MeshReport",
    "StlError",
    "STL_HEADER_TAG",
    "DEGENERATE_AREA",
    "write_stl",
    "read_stl",
    "validate",
]

STL_HEADER_TAG = b"identispace-forge"
DEGENERATE_AREA = 1e-12  # mm^2; triangles at or below this count as degenerate

# binary record layout: 12 bytes normal, 36 bytes vertices, 2 bytes attribute
_CHUNK = 1 << 20  # triangles per block for memory-bounded passes


class StlError(ValueError):
    """Raised for malformed, truncated or inconsistent STL data."""


@dataclass
class TriangleMesh:
    """Vertex array (N,3) float64 plus (T,3) index triples.

    ``component_ids`` labels each triangle with the closed component it was
    emitted for (capsule index for built wireframes, zeros for read meshes).
    """

    vertices: np.ndarray
    triangles: np.ndarray
    component_ids: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int32).reshape(-1, 3)
        if self.component_ids is None:
            self.component_ids = np.zeros(len(self.triangles), dtype=np.int32)
        else:
            self.component_ids = np.asarray(self.component_ids, dtype=np.int32).reshape(-1)
        if len(self.component_ids) != len(self.triangles):
            raise ValueError("component_ids length must match triangle count")

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def check_indices(self) -> None:
        if len(self.triangles) and (
            self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)
        ):
            raise ValueError("triangle index out of range")


@dataclass
class MeshReport:
    """Per-component verdicts plus whole-mesh statistics."""

    component_count: int
    watertight_per_component: np.ndarray
    euler_characteristic_per_component: np.ndarray
    edge_manifold_per_component: np.ndarray
    boundary_edges_per_component: np.ndarray
    bbox_min: Vec3
    bbox_max: Vec3
    triangle_count: int
    degenerate_count: int

    @property
    def all_watertight(self) -> bool:
        return bool(np.all(self.watertight_per_component))

    @property
    def all_edge_manifold(self) -> bool:
        return bool(np.all(self.edge_manifold_per_component))

    @property
    def boundary_edge_count(self) -> int:
        return int(self.boundary_edges_per_component.sum())

    def summary_lines(self) -> list[str]:
        chi = self.euler_characteristic_per_component
        chi_desc = "n/a"
        if self.component_count:
            lo, hi = int(chi.min()), int(chi.max())
            chi_desc = str(lo) if lo == hi else f"{lo}..{hi}"
        return [
            f"triangles: {self.triangle_count}",
            f"components: {self.component_count}",
            f"watertight: {int(self.watertight_per_component.sum())}/{self.component_count}",
            f"edge_manifold: {int(self.edge_manifold_per_component.sum())}/{self.component_count}",
            f"euler_characteristic: {chi_desc}",
            f"boundary_edges: {self.boundary_edge_count}",
            f"degenerate_triangles: {self.degenerate_count}",
            "bbox_min: %.6g %.6g %.6g" % self.bbox_min,
            "bbox_max: %.6g %.6g %.6g" % self.bbox_max,
        ]


def _unit_normals(corners: np.ndarray) -> np.ndarray:
    """Unit normals from (T,3,3) corner coordinates; zero where degenerate."""
    p0 = corners[:, 0].astype(np.float64)
    cr = np.cross(corners[:, 1] - p0, corners[:, 2] - p0)
    n = np.sqrt((cr * cr).sum(axis=1))
    nz = n > 0.0
    cr[nz] /= n[nz, None]
    cr[~nz] = 0.0
    return cr


def write_stl(mesh: TriangleMesh, mode: str = "binary") -> bytes:
    """Serialize to STL bytes.

    Binary layout: 80-byte header tagged ``identispace-forge``, little-endian
    uint32 triangle count, then 50 bytes per triangle (normal, three vertices
    as float32, zero attribute); total length is exactly 84 + 50*n.  ASCII
    mode emits the float32-rounded coordinates with 9 significant digits so
    both modes parse back to identical meshes.
    """
    if mode not in ("binary", "ascii"):
        raise ValueError(f"mode must be 'binary' or 'ascii', got {mode!r}")
    n = mesh.triangle_count
    if n >= 2**32:
        raise ValueError("triangle count exceeds the 32-bit STL limit")
    mesh.check_indices()
    if len(mesh.vertices) and not np.all(np.isfinite(mesh.vertices)):
        raise ValueError("mesh contains a non-finite vertex")

    v32 = mesh.vertices.astype("<f4")

    if mode == "binary":
        out = np.zeros(84 + 50 * n, dtype=np.uint8)
        out[:80] = np.frombuffer(STL_HEADER_TAG.ljust(80, b"\0"), dtype=np.uint8)
        out[80:84] = np.frombuffer(struct.pack("<I", n), dtype=np.uint8)
        records = out[84:].reshape(n, 50)
        block = np.empty((min(_CHUNK, n), 12), dtype="<f4")
        for start in range(0, n, _CHUNK):
            t = mesh.triangles[start : start + _CHUNK]
            corners = v32[t]
            chunk = block[: len(t)]
            chunk[:, 0:3] = _unit_normals(corners)
            chunk[:, 3:12] = corners.reshape(-1, 9)
            records[start : start + _CHUNK, :48] = chunk.view(np.uint8).reshape(-1, 48)
        return out.tobytes()

    name = STL_HEADER_TAG.decode("ascii")
    normals = _unit_normals(v32[mesh.triangles]).astype(np.float32)
    lines = [f"solid {name}"]
    for k in range(n):
        nx, ny, nz = (float(c) for c in normals[k])
        lines.append(f"  facet normal {nx:.9g} {ny:.9g} {nz:.9g}")
        lines.append("    outer loop")
        for vi in mesh.triangles[k]:
            x, y, z = (float(c) for c in v32[vi])
            lines.append(f"      vertex {x:.9g} {y:.9g} {z:.9g}")
        lines.append("    endloop")
        lines.append("  endfacet")
    lines.append(f"endsolid {name}")
    lines.append("")
    return "\n".join(lines).encode("ascii")


def _weld(tri_verts: np.ndarray) -> TriangleMesh:
    """Index a (T,3,3) float32 coordinate soup, welding bit-identical vertices.

    Identity is the 96-bit pattern, so -0.0 and +0.0 (or two NaNs with equal
    payload) are distinct exactly when their bits are.
    """
    flat = np.ascontiguousarray(tri_verts.reshape(-1, 3))
    if len(flat) == 0:
        return TriangleMesh(np.zeros((0, 3)), np.zeros((0, 3), np.int32))
    bits = flat.view("<u4")
    # sort on (x|y as one 64-bit key, then z): two radix passes instead of three
    xy = bits[:, 0].astype(np.uint64) << np.uint64(32)
    xy |= bits[:, 1]
    order = np.lexsort((bits[:, 2], xy))
    del xy
    ranked = bits[order]
    first = np.empty(len(ranked), dtype=bool)
    first[0] = True
    np.any(ranked[1:] != ranked[:-1], axis=1, out=first[1:])
    group_of_rank = np.cumsum(first) - 1
    inverse = np.empty(len(flat), dtype=np.int64)
    inverse[order] = group_of_rank
    vertices = ranked[first].view("<f4").astype(np.float64)
    triangles = inverse.reshape(-1, 3).astype(np.int32)
    return TriangleMesh(vertices, triangles)


def _parse_binary(data: bytes) -> np.ndarray:
    if len(data) < 84:
        raise StlError(f"truncated STL: {len(data)} bytes, header needs 84")
    (n,) = struct.unpack_from("<I", data, 80)
    expected = 84 + 50 * n
    if len(data) != expected:
        raise StlError(
            f"STL length mismatch: {n} triangles need {expected} bytes, got {len(data)}"
        )
    raw = np.frombuffer(data, dtype=np.uint8, count=50 * n, offset=84).reshape(n, 50)
    return np.ascontiguousarray(raw[:, 12:48]).view("<f4").reshape(n, 3, 3)


def _parse_ascii(data: bytes) -> np.ndarray:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise StlError(f"ASCII STL is not ASCII: {exc}") from None
    facets = 0
    coords: list[float] = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("facet normal"):
            facets += 1
        elif line.startswith("vertex"):
            parts = line.split()
            if len(parts) != 4:
                raise StlError(f"malformed vertex line: {line!r}")
            try:
                coords.extend(float(p) for p in parts[1:])
            except ValueError:
                raise StlError(f"unparseable vertex coordinates: {line!r}") from None
    if len(coords) != 9 * facets:
        raise StlError(
            f"vertex count mismatch: {facets} facets but {len(coords) // 3} vertices"
        )
    return np.array(coords, dtype=np.float32).reshape(-1, 3, 3)


def read_stl(data: bytes) -> TriangleMesh:
    """Parse STL bytes (binary or ASCII, auto-detected) into a welded mesh.

    Triangle order is preserved; vertex order is the byte-lexicographic order
    of the welded float32 coordinates.
    """
    if data.lstrip()[:5] == b"solid":
        try:
            return _weld(_parse_ascii(data))
        except StlError:
            pass  # binary files may legally start with "solid"
    return _weld(_parse_binary(data))


def _empty_report() -> MeshReport:
    z = np.zeros(0, dtype=np.int64)
    return MeshReport(
        component_count=0,
        watertight_per_component=z.astype(bool),
        euler_characteristic_per_component=z,
        edge_manifold_per_component=z.astype(bool),
        boundary_edges_per_component=z,
        bbox_min=Vec3(0.0, 0.0, 0.0),
        bbox_max=Vec3(0.0, 0.0, 0.0),
        triangle_count=0,
        degenerate_count=0,
    )


def validate(mesh: TriangleMesh) -> MeshReport:
    """Report connectivity, closedness and quality; never raises on bad geometry.

    Components are computed over shared vertex indices (not spatial
    proximity), so overlapping-but-unwelded components stay separate.
    """
    mesh.check_indices()
    tris = mesh.triangles
    nv = len(mesh.vertices)
    if len(tris) == 0:
        return _empty_report()

    # degenerate iff area <= threshold, compared in squared form: |cross|^2 <= (2*thr)^2
    degenerate = 0
    sq_bound = (2.0 * DEGENERATE_AREA) ** 2
    for start in range(0, len(tris), _CHUNK):
        t = tris[start : start + _CHUNK]
        p0 = mesh.vertices[t[:, 0]]
        cr = np.cross(mesh.vertices[t[:, 1]] - p0, mesh.vertices[t[:, 2]] - p0)
        degenerate += int(((cr * cr).sum(axis=1) <= sq_bound).sum())

    nt = len(tris)
    lo = np.empty(3 * nt, dtype=np.int32)
    hi = np.empty(3 * nt, dtype=np.int32)
    forward = np.empty(3 * nt, dtype=bool)
    for k, (i, j) in enumerate(((0, 1), (1, 2), (2, 0))):
        s = slice(k * nt, (k + 1) * nt)
        np.minimum(tris[:, i], tris[:, j], out=lo[s])
        np.maximum(tris[:, i], tris[:, j], out=hi[s])
        np.less(tris[:, i], tris[:, j], out=forward[s])
    keep = lo != hi  # drop collapsed edges of repeated-index triangles
    if not keep.all():
        lo, hi, forward = lo[keep], hi[keep], forward[keep]

    if len(lo):
        keys = np.multiply(lo, np.int64(nv), dtype=np.int64)
        keys += hi
        order = np.argsort(keys, kind="stable")
        ranked = keys[order]
        first = np.empty(len(ranked), dtype=bool)
        first[0] = True
        np.not_equal(ranked[1:], ranked[:-1], out=first[1:])
        starts = np.flatnonzero(first)
        ne = len(starts)
        count = np.diff(starts, append=len(ranked))
        sign = np.where(forward, np.int32(1), np.int32(-1))[order]
        net = np.add.reduceat(sign, starts)
        ukeys = ranked[starts]
        del keys, lo, order, ranked, first, sign, forward, hi
    else:
        ne = 0
        ukeys = np.zeros(0, dtype=np.int64)
        count = net = np.zeros(0, dtype=np.int64)

    balanced = net == 0
    manifold = (count == 2) & balanced
    boundary = count == 1
    ulo = ukeys // nv
    uhi = ukeys % nv

    referenced = np.zeros(nv, dtype=bool)
    referenced[tris.ravel()] = True
    graph = coo_matrix(
        (np.ones(ne, dtype=np.int8), (ulo, uhi)), shape=(nv, nv)
    )
    _, labels = connected_components(graph, directed=False)
    comp_labels = np.unique(labels[referenced])
    ncomp = len(comp_labels)
    remap = np.full(labels.max() + 1 if nv else 1, -1, dtype=np.int64)
    remap[comp_labels] = np.arange(ncomp)

    vert_comp = remap[labels[referenced]]
    edge_comp = remap[labels[ulo]]
    tri_comp = remap[labels[tris[:, 0]]]

    v_per = np.bincount(vert_comp, minlength=ncomp)
    e_per = np.bincount(edge_comp, minlength=ncomp)
    f_per = np.bincount(tri_comp, minlength=ncomp)
    unbalanced_per = np.bincount(edge_comp[~balanced], minlength=ncomp)
    nonmanifold_per = np.bincount(edge_comp[~manifold], minlength=ncomp)
    boundary_per = np.bincount(edge_comp[boundary], minlength=ncomp)

    return MeshReport(
        component_count=ncomp,
        watertight_per_component=unbalanced_per == 0,
        euler_characteristic_per_component=v_per - e_per + f_per,
        edge_manifold_per_component=nonmanifold_per == 0,
        boundary_edges_per_component=boundary_per,
        bbox_min=Vec3(*(float(c) for c in mesh.vertices.min(axis=0))),
        bbox_max=Vec3(*(float(c) for c in mesh.vertices.max(axis=0))),
        triangle_count=len(tris),
        degenerate_count=degenerate,
    )
