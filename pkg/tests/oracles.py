"""Independent reference computations for pinning expected test values.

Everything here deliberately avoids the code paths under test: ranks come
from Fraction/GF(p) Gaussian elimination rather than Smith normal form,
determinants from Bareiss elimination, rotations from the axis-angle formula,
and Euler characteristics from raw vertex/edge/face counting.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

import numpy as np


def rational_rank(mat) -> int:
    a = np.asarray(mat, dtype=object)
    m, n = a.shape
    rows = [[Fraction(int(a[i, j])) for j in range(n)] for i in range(m)]
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, m) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        base = rows[rank]
        for r in range(rank + 1, m):
            if rows[r][col] != 0:
                f = rows[r][col] / base[col]
                rows[r] = [x - f * y for x, y in zip(rows[r], base)]
        rank += 1
        if rank == m:
            break
    return rank


def mod_p_rank(mat, p: int) -> int:
    a = np.asarray(mat, dtype=object)
    m, n = a.shape
    rows = [[int(a[i, j]) % p for j in range(n)] for i in range(m)]
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, m) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        base = [(x * inv) % p for x in rows[rank]]
        rows[rank] = base
        for r in range(rank + 1, m):
            if rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], base)]
        rank += 1
        if rank == m:
            break
    return rank


def det_bareiss(mat) -> int:
    a0 = np.asarray(mat, dtype=object)
    n = a0.shape[0]
    assert a0.shape == (n, n)
    if n == 0:
        return 1
    a = [[int(a0[i, j]) for j in range(n)] for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def all_minor_gcds(mat) -> list[int]:
    """[g_1, ..., g_min(m,n)] where g_k = gcd of all k x k minors (0 if none nonzero)."""
    a = np.asarray(mat, dtype=object)
    m, n = a.shape
    memo: dict[tuple, int] = {}

    def minor(rows: tuple, cols: tuple) -> int:
        if len(rows) == 1:
            return int(a[rows[0], cols[0]])
        key = (rows, cols)
        if key in memo:
            return memo[key]
        total = 0
        sign = 1
        rest = rows[1:]
        for idx in range(len(cols)):
            e = int(a[rows[0], cols[idx]])
            if e:
                total += sign * e * minor(rest, cols[:idx] + cols[idx + 1 :])
            sign = -sign
        memo[key] = total
        return total

    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = math.gcd(g, minor(rows, cols))
        out.append(g)
    return out


def axis_angle_matrix(axis: tuple[float, float, float], degrees: float):
    """Rodrigues rotation matrix; independent of the package's Euler build."""
    x, y, z = axis
    norm = math.sqrt(x * x + y * y + z * z)
    x, y, z = x / norm, y / norm, z / norm
    th = math.radians(degrees)
    c, s = math.cos(th), math.sin(th)
    cc = 1.0 - c
    return [
        [c + x * x * cc, x * y * cc - z * s, x * z * cc + y * s],
        [y * x * cc + z * s, c + y * y * cc, y * z * cc - x * s],
        [z * x * cc - y * s, z * y * cc + x * s, c + z * z * cc],
    ]


def mat_apply(mat, v):
    return tuple(sum(mat[i][k] * v[k] for k in range(3)) for i in range(3))


def mat_mul3(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def euler_zyx_oracle(ax: float, ay: float, az: float):
    """Rz(az) @ Ry(ay) @ Rx(ax) assembled from axis-angle matrices."""
    rx = axis_angle_matrix((1, 0, 0), ax)
    ry = axis_angle_matrix((0, 1, 0), ay)
    rz = axis_angle_matrix((0, 0, 1), az)
    return mat_mul3(rz, mat_mul3(ry, rx))


def point_segment_distance(p, a, b) -> float:
    ab = tuple(b[i] - a[i] for i in range(3))
    ap = tuple(p[i] - a[i] for i in range(3))
    denom = sum(c * c for c in ab)
    if denom == 0.0:
        return math.dist(p, a)
    t = max(0.0, min(1.0, sum(ap[i] * ab[i] for i in range(3)) / denom))
    closest = tuple(a[i] + t * ab[i] for i in range(3))
    return math.dist(p, closest)


def mesh_euler_characteristic(vertices, triangles) -> int:
    """V - E + F from raw counts; edges as undirected vertex-index pairs."""
    used = {int(v) for tri in triangles for v in tri}
    edges = set()
    for t in triangles:
        t = [int(v) for v in t]
        for i in range(3):
            edges.add(frozenset((t[i], t[(i + 1) % 3])))
    return len(used) - len(edges) + len(triangles)


def mesh_edge_uses(triangles) -> dict[frozenset, list[tuple[int, int]]]:
    uses: dict[frozenset, list[tuple[int, int]]] = {}
    for t in triangles:
        t = [int(v) for v in t]
        for i in range(3):
            a, b = t[i], t[(i + 1) % 3]
            uses.setdefault(frozenset((a, b)), []).append((a, b))
    return uses


def random_delta_complex(rng: random.Random, max_dim: int = 3):
    """Degree-indexed cell lists of a random identification complex.

    Top cells are random ordered vertex tuples (repeats allowed, which is
    what creates identifications); every lower degree lists the faces that
    actually occur, in first-appearance order.
    """
    dim = rng.randint(1, max_dim)
    nverts = rng.randint(1, 5)
    ntop = rng.randint(1, 6)
    levels = [
        [tuple(rng.randrange(nverts) for _ in range(dim + 1)) for _ in range(ntop)]
    ]
    for _ in range(dim):
        seen = dict()
        for cell in levels[-1]:
            for j in range(len(cell)):
                seen.setdefault(cell[:j] + cell[j + 1 :], None)
        levels.append(list(seen))
    levels.reverse()
    return levels
