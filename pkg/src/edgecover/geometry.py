"""Planar primitives for edge-covering instances.

Everything here is a pure function over immutable inputs: segment/disk
intersections solved as a stable quadratic, decomposition of an edge into
maximal subintervals with constant covering set, Euclidean MST, an
incremental Delaunay triangulation, and convex feasibility tests for
box/ball intersections (used by the conic location model).
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import networkx as nx
import numpy as np

log = logging.getLogger(__name__)

#: Absolute tolerance for breakpoint deduplication and disk membership.
EPS_GEOM = 1e-9

#: Alternating-projection defaults for box/ball feasibility tests.
PROJ_TOL = 1e-7
PROJ_MAX_ITER = 10_000


@dataclass(frozen=True)
class Point:
    """A point in R^d with finite coordinates (d = 2 everywhere that matters)."""

    coords: tuple[float, ...]

    def __post_init__(self):
        if len(self.coords) < 1 or not all(math.isfinite(c) for c in self.coords):
            raise ValueError(f"bad point coordinates: {self.coords}")

    @property
    def x(self) -> float:
        return self.coords[0]

    @property
    def y(self) -> float:
        return self.coords[1]

    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


def point(*coords: float) -> Point:
    return Point(tuple(float(c) for c in coords))


@dataclass(frozen=True)
class Segment:
    """Closed segment from p to q; degenerate (p == q) is allowed but flagged."""

    p: Point
    q: Point
    id: int = 0

    def is_degenerate(self, eps: float = EPS_GEOM) -> bool:
        return float(np.linalg.norm(self.q.array() - self.p.array())) <= eps

    def at(self, t: float) -> np.ndarray:
        a, b = self.p.array(), self.q.array()
        return a + t * (b - a)


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disk radius must be positive, got {self.radius}")

    def contains(self, pt: np.ndarray, eps: float = EPS_GEOM) -> bool:
        return float(np.linalg.norm(pt - self.center.array())) <= self.radius + eps


@dataclass(frozen=True)
class ParamInterval:
    """Sub-range [t_lo, t_hi] of a segment's parameterization, within [0, 1]."""

    t_lo: float
    t_hi: float

    def __post_init__(self):
        if not (0.0 <= self.t_lo <= self.t_hi <= 1.0):
            raise ValueError(f"bad parameter interval [{self.t_lo}, {self.t_hi}]")

    def is_degenerate(self, eps: float = EPS_GEOM) -> bool:
        return self.t_hi - self.t_lo <= eps


@dataclass(frozen=True)
class Box:
    """Axis-aligned box {x : lo <= x <= hi}; lo == hi is a single point."""

    lo: Point
    hi: Point

    def __post_init__(self):
        if len(self.lo.coords) != len(self.hi.coords):
            raise ValueError("box corner dimensions differ")
        if any(l > h for l, h in zip(self.lo.coords, self.hi.coords)):
            raise ValueError("box needs lo <= hi componentwise")

    @property
    def dim(self) -> int:
        return len(self.lo.coords)

    def vertices(self) -> np.ndarray:
        """All 2^d corners, in lexicographic (lo/hi per axis) order."""
        axes = [(l, h) for l, h in zip(self.lo.coords, self.hi.coords)]
        return np.array(list(itertools.product(*axes)), dtype=float)

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lo.array(), self.hi.array())


@dataclass(frozen=True)
class SubintervalDecomposition:
    """Partition of a segment into cells on which the covering set is constant.

    ``breakpoints`` always starts at 0.0 and ends at 1.0; cell k spans
    [breakpoints[k], breakpoints[k+1]] and ``cover_sets[k]`` lists the disks
    (by index into the input list) containing the whole cell, classified at
    the cell midpoint.
    """

    segment_id: int
    breakpoints: tuple[float, ...]
    cover_sets: tuple[tuple[int, ...], ...]

    @property
    def num_cells(self) -> int:
        return len(self.cover_sets)


def segment_disk_intersection(
    seg: Segment, disk: Disk, eps: float = EPS_GEOM
) -> Optional[ParamInterval]:
    """Parameter range of ``seg`` inside the closed disk, or None if disjoint.

    Solves ||p + t(q-p) - c||^2 = r^2 in the numerically stable form (the
    larger-magnitude root computed first, the other via the product of
    roots) and clips to [0, 1].  A tangency yields a degenerate interval.
    """
    p = seg.p.array()
    d = seg.q.array() - p
    f = p - disk.center.array()
    a = float(d @ d)
    if a <= eps * eps:
        # degenerate segment: point membership test
        return ParamInterval(0.0, 1.0) if disk.contains(p, eps) else None
    b = float(f @ d)
    c = float(f @ f) - disk.radius * disk.radius
    disc = b * b - a * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    # roots of a t^2 + 2 b t + c = 0; avoid cancellation in b +/- sq
    if b >= 0.0:
        qq = -(b + sq)
        t1, t2 = qq / a, (c / qq if qq != 0.0 else -b / a)
    else:
        qq = -b + sq
        t1, t2 = (c / qq if qq != 0.0 else -b / a), qq / a
    lo, hi = min(t1, t2), max(t1, t2)
    lo, hi = max(lo, 0.0), min(hi, 1.0)
    if hi < lo:
        return None
    return ParamInterval(lo, hi)


def _batched_intervals(
    p: np.ndarray, q: np.ndarray, centers: np.ndarray, radii: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized segment/disk intersections for one segment vs many disks.

    Returns (t_lo, t_hi, hit) arrays; entries of t_* are meaningful only
    where hit is True.  Intervals are clipped to [0, 1].
    """
    d = q - p
    a = float(d @ d)
    f = p[None, :] - centers
    b = f @ d
    c = np.einsum("ij,ij->i", f, f) - radii * radii
    if a == 0.0:
        hit = c <= 0.0
        return np.zeros_like(b), np.ones_like(b), hit
    disc = b * b - a * c
    hit = disc >= 0.0
    sq = np.sqrt(np.where(hit, disc, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        qq = np.where(b >= 0.0, -(b + sq), -b + sq)
        r1 = np.where(qq != 0.0, qq / a, -b / a)
        r2 = np.where(qq != 0.0, c / qq, -b / a)
    t_lo = np.clip(np.minimum(r1, r2), 0.0, 1.0)
    t_hi = np.clip(np.maximum(r1, r2), 0.0, 1.0)
    hit &= t_hi >= np.minimum(r1, r2)  # keep clip-consistent
    hit &= np.maximum(r1, r2) >= 0.0
    hit &= np.minimum(r1, r2) <= 1.0
    return t_lo, t_hi, hit


def _merge_breakpoints(ts: Sequence[float], eps: float) -> list[float]:
    """Ascending breakpoints with 0 and 1 forced, deduplicated within eps."""
    out = [0.0]
    for t in sorted(ts):
        if t <= out[-1] + eps:
            continue
        if t >= 1.0 - eps:
            break
        out.append(t)
    out.append(1.0)
    return out


def decompose_edge(
    seg: Segment, disks: Sequence[Disk], eps: float = EPS_GEOM
) -> SubintervalDecomposition:
    """Cut ``seg`` at every disk-boundary crossing and classify each cell.

    Breakpoints are the union of {0, 1} and all intersection endpoints,
    merged within ``eps``; each cell's covering set is the set of disks
    containing the cell midpoint.  Cell count is at most 2*len(disks)+1.
    """
    p, q = seg.p.array(), seg.q.array()
    if disks:
        centers = np.array([d.center.coords for d in disks], dtype=float)
        radii = np.array([d.radius for d in disks], dtype=float)
        t_lo, t_hi, hit = _batched_intervals(p, q, centers, radii)
        cuts = np.concatenate([t_lo[hit], t_hi[hit]])
    else:
        centers = np.zeros((0, 2))
        radii = np.zeros(0)
        cuts = np.zeros(0)
    bps = _merge_breakpoints(cuts.tolist(), eps)
    mids = (np.asarray(bps[:-1]) + np.asarray(bps[1:])) / 2.0
    pts = p[None, :] + mids[:, None] * (q - p)[None, :]
    if len(disks):
        dist = np.linalg.norm(pts[:, None, :] - centers[None, :, :], axis=2)
        inside = dist <= radii[None, :] + eps
        covers = tuple(tuple(np.nonzero(row)[0].tolist()) for row in inside)
    else:
        covers = tuple(() for _ in mids)
    return SubintervalDecomposition(seg.id, tuple(bps), covers)


def euclidean_mst(points: Sequence[Point]) -> list[tuple[int, int]]:
    """Minimum spanning tree edges of the complete Euclidean graph.

    Kruskal over edges listed in lexicographic (i, j) order; the stable
    sort on weights makes ties resolve lexicographically.  Duplicate points
    are permitted (zero-length edges) but logged.
    """
    if len(points) < 2:
        raise ValueError("need at least 2 points for a spanning tree")
    coords = np.array([p.coords for p in points], dtype=float)
    g = nx.Graph()
    g.add_nodes_from(range(len(points)))
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            w = float(np.linalg.norm(coords[i] - coords[j]))
            if w == 0.0:
                log.warning("duplicate points %d and %d (zero-length MST edge)", i, j)
            g.add_edge(i, j, weight=w)
    edges = [
        (min(u, v), max(u, v))
        for u, v in nx.minimum_spanning_edges(g, algorithm="kruskal", data=False)
    ]
    return sorted(edges)


# ---------------------------------------------------------------------------
# Delaunay triangulation: plain Bowyer-Watson with a far super-triangle.
# In-circle decisions use a sign test on the standard 3x3 determinant with
# points exactly on the circle counted as outside; that rule is deterministic
# for fixed input bytes, which is all the generator contract needs.
# ---------------------------------------------------------------------------


def _in_circumcircle(a, b, c, p) -> bool:
    # orientation-normalized in-circle determinant, > 0 means strictly inside
    orient = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if orient == 0.0:
        return False
    m = np.array(
        [
            [a[0] - p[0], a[1] - p[1], (a[0] - p[0]) ** 2 + (a[1] - p[1]) ** 2],
            [b[0] - p[0], b[1] - p[1], (b[0] - p[0]) ** 2 + (b[1] - p[1]) ** 2],
            [c[0] - p[0], c[1] - p[1], (c[0] - p[0]) ** 2 + (c[1] - p[1]) ** 2],
        ]
    )
    det = float(np.linalg.det(m))
    return det > 0.0 if orient > 0.0 else det < 0.0


def _all_collinear(coords: np.ndarray, eps: float) -> bool:
    if len(coords) < 3:
        return True
    a = coords[0]
    for b in coords[1:]:
        if np.linalg.norm(b - a) > eps:
            d = b - a
            cross = (coords[:, 0] - a[0]) * d[1] - (coords[:, 1] - a[1]) * d[0]
            return bool(np.all(np.abs(cross) <= eps * np.linalg.norm(d)))
    return True


def delaunay_triangles(points: Sequence[Point]) -> list[tuple[int, int, int]]:
    """Delaunay triangles (index triples) via incremental insertion."""
    coords = np.array([p.coords for p in points], dtype=float)
    n = len(coords)
    if n < 3 or _all_collinear(coords, EPS_GEOM):
        return []
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    span = max(float(np.max(hi - lo)), 1.0)
    cx, cy = (lo + hi) / 2.0
    big = 64.0 * span
    aug = np.vstack(
        [coords, [cx - 2 * big, cy - big], [cx + 2 * big, cy - big], [cx, cy + 2 * big]]
    )
    s0, s1, s2 = n, n + 1, n + 2
    tris: list[tuple[int, int, int]] = [(s0, s1, s2)]
    for ip in range(n):
        p = aug[ip]
        bad = [t for t in tris if _in_circumcircle(aug[t[0]], aug[t[1]], aug[t[2]], p)]
        if not bad:
            # on/outside every circumcircle: insert into the containing
            # triangle anyway to keep the point in the mesh
            bad = [t for t in tris if _point_in_triangle(aug, t, p)]
            if not bad:
                continue
        edge_count: dict[tuple[int, int], int] = {}
        for t in bad:
            for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
                key = (min(e), max(e))
                edge_count[key] = edge_count.get(key, 0) + 1
        boundary = [e for e, cnt in edge_count.items() if cnt == 1]
        bad_set = set(bad)
        tris = [t for t in tris if t not in bad_set]
        for u, v in sorted(boundary):
            tris.append(tuple(sorted((u, v, ip))))  # type: ignore[arg-type]
    return sorted(t for t in tris if max(t) < n)


def _point_in_triangle(aug, tri, p) -> bool:
    a, b, c = aug[tri[0]], aug[tri[1]], aug[tri[2]]

    def side(u, v):
        return (v[0] - u[0]) * (p[1] - u[1]) - (v[1] - u[1]) * (p[0] - u[0])

    d1, d2, d3 = side(a, b), side(b, c), side(c, a)
    has_neg = (d1 < 0) or (d2 < 0) or (d3 < 0)
    has_pos = (d1 > 0) or (d2 > 0) or (d3 > 0)
    return not (has_neg and has_pos)


def delaunay_interior_edges(points: Sequence[Point]) -> list[tuple[int, int]]:
    """Delaunay edges not on the convex hull (edges shared by two triangles).

    All-collinear or too-small inputs give an empty list.
    """
    tris = delaunay_triangles(points)
    count: dict[tuple[int, int], int] = {}
    for t in tris:
        for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
            key = (min(e), max(e))
            count[key] = count.get(key, 0) + 1
    return sorted(e for e, c in count.items() if c == 2)


def _proj_ball(x: np.ndarray, center: np.ndarray, r: float) -> np.ndarray:
    v = x - center
    nrm = float(np.linalg.norm(v))
    if nrm <= r:
        return x
    return center + v * (r / nrm)


def box_two_disk_feasible(
    box: Box,
    a1: Point,
    a2: Point,
    r: float,
    tol: float = PROJ_TOL,
    max_iter: int = PROJ_MAX_ITER,
) -> bool:
    """True iff box, B(a1, r) and B(a2, r) have a common point, up to tol.

    Cyclic alternating projections onto the three convex sets; borderline
    outcomes are resolved inclusively (feasible), which can only add
    candidate variables downstream, never lose a feasible assignment.
    """
    c1, c2 = a1.array(), a2.array()
    x = box.clip((c1 + c2) / 2.0)
    best = math.inf
    stalled = 0
    for _ in range(max_iter):
        x = box.clip(_proj_ball(_proj_ball(x, c1, r), c2, r))
        res = max(
            max(float(np.linalg.norm(x - c1)) - r, 0.0),
            max(float(np.linalg.norm(x - c2)) - r, 0.0),
        )
        if res <= tol:
            return True
        if res >= best - 1e-15:
            stalled += 1
            if stalled >= 64:
                break
        else:
            stalled = 0
            best = res
    if best <= 10.0 * tol:
        log.warning("borderline box/disk feasibility (residual %.3g); counted feasible", best)
        return True
    return False


def box_vertex_max_distance(box: Box, a: Point) -> float:
    """Max Euclidean distance from any box vertex to ``a``."""
    return float(np.max(np.linalg.norm(box.vertices() - a.array()[None, :], axis=1)))
