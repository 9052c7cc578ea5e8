"""Object-space ambient occlusion baked at surface vertices.

Light probes are unit directions sampled approximately uniformly over the
sphere with best-candidate (blue-noise-like) sampling.  For each surface
vertex, unblocked light is accumulated over the probes in its normal
hemisphere, weighted by the cosine law, and renormalized by the total
cosine weight so an unoccluded vertex reads exactly 1.  Visibility is
resolved by casting rays against the surface triangles through a BVH.

Probe subsets may be fed incrementally through :class:`AoAccumulator`;
the result at the full probe count is the reference value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, prange

SELF_HIT_OFFSET = 1e-4  # fraction of the bounding-box diagonal
DEFAULT_PROBES = 1024
_LEAF_SIZE = 4


@dataclass
class ProbeSet:
    directions: np.ndarray  # (P, 3) unit vectors
    seed: int
    method: str = "best-candidate"

    @property
    def count(self) -> int:
        return len(self.directions)


def probe_directions(count: int = DEFAULT_PROBES, seed: int = 0, candidates: int = 32) -> ProbeSet:
    """Best-candidate sampling of unit directions on the sphere.

    Each new direction is the candidate farthest from the already chosen
    set, which spreads samples out compared to plain uniform sampling.
    Deterministic for a fixed seed.
    """
    if count < 1:
        raise ValueError("probe count must be >= 1")
    rng = np.random.default_rng(seed)

    def draw(n):
        v = rng.standard_normal((n, 3))
        norm = np.linalg.norm(v, axis=1, keepdims=True)
        bad = norm[:, 0] < 1e-12
        if bad.any():
            v[bad] = (1.0, 0.0, 0.0)
            norm[bad] = 1.0
        return v / norm

    dirs = np.empty((count, 3), dtype=np.float64)
    dirs[0] = draw(1)[0]
    for i in range(1, count):
        cand = draw(candidates)
        nearest = (cand @ dirs[:i].T).max(axis=1)  # max cos = nearest neighbor
        dirs[i] = cand[np.argmin(nearest)]
    return ProbeSet(dirs, seed)


# ---------------------------------------------------------------------------
# BVH over triangles
# ---------------------------------------------------------------------------

@dataclass
class BVH:
    node_lo: np.ndarray     # (N, 3)
    node_hi: np.ndarray     # (N, 3)
    node_left: np.ndarray   # (N,) child index or -1 for leaves
    node_right: np.ndarray  # (N,)
    node_start: np.ndarray  # (N,) leaf triangle range start
    node_count: np.ndarray  # (N,) leaf triangle count
    tri_v0: np.ndarray      # (M, 3) reordered triangle data
    tri_e1: np.ndarray
    tri_e2: np.ndarray


def build_bvh(positions: np.ndarray, triangles: np.ndarray) -> BVH:
    """Median-split BVH on the longest centroid axis, leaf size 4."""
    v0 = positions[triangles[:, 0]]
    v1 = positions[triangles[:, 1]]
    v2 = positions[triangles[:, 2]]
    lo = np.minimum(np.minimum(v0, v1), v2)
    hi = np.maximum(np.maximum(v0, v1), v2)
    centroids = (lo + hi) * 0.5
    m = len(triangles)

    order = np.arange(m)
    cap = max(1, 2 * m)
    node_lo = np.empty((cap, 3))
    node_hi = np.empty((cap, 3))
    node_left = np.full(cap, -1, dtype=np.int64)
    node_right = np.full(cap, -1, dtype=np.int64)
    node_start = np.zeros(cap, dtype=np.int64)
    node_count = np.zeros(cap, dtype=np.int64)
    n_nodes = 1
    stack = [(0, 0, m)]
    while stack:
        node, start, stop = stack.pop()
        idx = order[start:stop]
        node_lo[node] = lo[idx].min(axis=0)
        node_hi[node] = hi[idx].max(axis=0)
        if stop - start <= _LEAF_SIZE:
            node_start[node] = start
            node_count[node] = stop - start
            continue
        extent = centroids[idx].max(axis=0) - centroids[idx].min(axis=0)
        axis = int(np.argmax(extent))
        local = np.argsort(centroids[idx, axis], kind="stable")
        order[start:stop] = idx[local]
        mid = (start + stop) // 2
        left, right = n_nodes, n_nodes + 1
        n_nodes += 2
        node_left[node] = left
        node_right[node] = right
        stack.append((left, start, mid))
        stack.append((right, mid, stop))

    t0 = v0[order]
    return BVH(
        node_lo[:n_nodes].copy(), node_hi[:n_nodes].copy(),
        node_left[:n_nodes].copy(), node_right[:n_nodes].copy(),
        node_start[:n_nodes].copy(), node_count[:n_nodes].copy(),
        t0, v1[order] - t0, v2[order] - t0,
    )


@njit(cache=True, inline="always")
def _any_hit(ox, oy, oz, dx, dy, dz,
             node_lo, node_hi, node_left, node_right, node_start, node_count,
             tri_v0, tri_e1, tri_e2, stack):
    ix = 1.0 / dx if abs(dx) > 1e-300 else (1e300 if dx >= 0 else -1e300)
    iy = 1.0 / dy if abs(dy) > 1e-300 else (1e300 if dy >= 0 else -1e300)
    iz = 1.0 / dz if abs(dz) > 1e-300 else (1e300 if dz >= 0 else -1e300)
    top = 0
    stack[top] = 0
    top += 1
    while top > 0:
        top -= 1
        node = stack[top]
        t1 = (node_lo[node, 0] - ox) * ix
        t2 = (node_hi[node, 0] - ox) * ix
        tmin = min(t1, t2)
        tmax = max(t1, t2)
        t1 = (node_lo[node, 1] - oy) * iy
        t2 = (node_hi[node, 1] - oy) * iy
        tmin = max(tmin, min(t1, t2))
        tmax = min(tmax, max(t1, t2))
        t1 = (node_lo[node, 2] - oz) * iz
        t2 = (node_hi[node, 2] - oz) * iz
        tmin = max(tmin, min(t1, t2))
        tmax = min(tmax, max(t1, t2))
        if tmax < max(tmin, 0.0):
            continue
        left = node_left[node]
        if left >= 0:
            stack[top] = left
            top += 1
            stack[top] = node_right[node]
            top += 1
            continue
        start = node_start[node]
        for k in range(start, start + node_count[node]):
            e1x, e1y, e1z = tri_e1[k, 0], tri_e1[k, 1], tri_e1[k, 2]
            e2x, e2y, e2z = tri_e2[k, 0], tri_e2[k, 1], tri_e2[k, 2]
            px = dy * e2z - dz * e2y
            py = dz * e2x - dx * e2z
            pz = dx * e2y - dy * e2x
            det = e1x * px + e1y * py + e1z * pz
            if abs(det) < 1e-14:
                continue
            inv = 1.0 / det
            tx = ox - tri_v0[k, 0]
            ty = oy - tri_v0[k, 1]
            tz = oz - tri_v0[k, 2]
            u = (tx * px + ty * py + tz * pz) * inv
            if u < 0.0 or u > 1.0:
                continue
            qx = ty * e1z - tz * e1y
            qy = tz * e1x - tx * e1z
            qz = tx * e1y - ty * e1x
            v = (dx * qx + dy * qy + dz * qz) * inv
            if v < 0.0 or u + v > 1.0:
                continue
            t = (e2x * qx + e2y * qy + e2z * qz) * inv
            if t > 1e-12:
                return True
    return False


@njit(cache=True, parallel=True)
def _accumulate(origins, normals, dirs,
                node_lo, node_hi, node_left, node_right, node_start, node_count,
                tri_v0, tri_e1, tri_e2, vis_sum, weight_sum):
    n = origins.shape[0]
    p = dirs.shape[0]
    for i in prange(n):
        stack = np.empty(128, dtype=np.int64)
        ox, oy, oz = origins[i, 0], origins[i, 1], origins[i, 2]
        nx, ny, nz = normals[i, 0], normals[i, 1], normals[i, 2]
        vis = 0.0
        wsum = 0.0
        for j in range(p):
            dx, dy, dz = dirs[j, 0], dirs[j, 1], dirs[j, 2]
            c = dx * nx + dy * ny + dz * nz
            if c <= 0.0:
                continue
            wsum += c
            if not _any_hit(ox, oy, oz, dx, dy, dz,
                            node_lo, node_hi, node_left, node_right,
                            node_start, node_count,
                            tri_v0, tri_e1, tri_e2, stack):
                vis += c
        vis_sum[i] += vis
        weight_sum[i] += wsum


class AoAccumulator:
    """Incremental AO integration over probe subsets for one surface."""

    def __init__(self, surface):
        self.surface = surface
        n = surface.num_vertices
        self.vis_sum = np.zeros(n)
        self.weight_sum = np.zeros(n)
        if surface.num_triangles:
            self.bvh = build_bvh(surface.positions, surface.triangles)
            lo = surface.positions.min(axis=0)
            hi = surface.positions.max(axis=0)
            eps = SELF_HIT_OFFSET * float(np.linalg.norm(hi - lo))
            self.origins = np.ascontiguousarray(surface.positions + eps * surface.normals)
        else:
            self.bvh = None
            self.origins = surface.positions

    def add(self, directions: np.ndarray) -> np.ndarray:
        directions = np.ascontiguousarray(directions, dtype=np.float64)
        if self.bvh is not None and len(directions):
            _accumulate(
                self.origins, np.ascontiguousarray(self.surface.normals), directions,
                self.bvh.node_lo, self.bvh.node_hi,
                self.bvh.node_left, self.bvh.node_right,
                self.bvh.node_start, self.bvh.node_count,
                self.bvh.tri_v0, self.bvh.tri_e1, self.bvh.tri_e2,
                self.vis_sum, self.weight_sum,
            )
        return self.values

    @property
    def values(self) -> np.ndarray:
        """AO per vertex; vertices with no hemisphere weight read 1."""
        out = np.ones(len(self.vis_sum))
        ok = self.weight_sum > 0
        out[ok] = self.vis_sum[ok] / self.weight_sum[ok]
        return out


def compute_ao(surface, probes: ProbeSet) -> np.ndarray:
    """Cosine-weighted unblocked-light fraction per surface vertex."""
    acc = AoAccumulator(surface)
    return acc.add(probes.directions)
