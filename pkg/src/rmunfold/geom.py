"""Planar and spatial primitives shared by the rest of the package.

Everything is double precision with explicit tolerances. Angle comparisons
downstream are non-strict with an ``eps_angle`` slack because the boundary
cases (quarter turns, the 45-degree spiral) are meant to pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateHull, DegenerateInput


@dataclass(frozen=True)
class Tolerance:
    """Angle slack in radians and length slack in plane/space units."""

    eps_angle: float = 1e-9
    eps_len: float = 1e-9

    def __post_init__(self):
        if self.eps_angle <= 0 or self.eps_len <= 0:
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def signed_turn(a, b, c, tol: Tolerance = DEFAULT_TOL) -> float:
    """Signed turn angle at b between vectors b-a and c-b, ccw positive.

    Returns a value in [-pi, pi]; 0 means the joint at b is straight.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    u = b - a
    v = c - b
    if np.hypot(*u) <= tol.eps_len or np.hypot(*v) <= tol.eps_len:
        raise DegenerateInput("consecutive points coincide")
    return math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1])


def angle_between(u, v) -> float:
    """Unsigned angle between two vectors, in [0, pi]."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise DegenerateInput("zero-length vector")
    c = float(np.dot(u, v) / (nu * nv))
    return math.acos(min(1.0, max(-1.0, c)))


def unit(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise DegenerateInput("zero-length vector")
    return v / n


def rot90(v):
    """Rotate a 2D vector by +90 degrees."""
    return np.array([-v[1], v[0]])


def segments_properly_intersect(p1, p2, q1, q2, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the open segments p1p2 and q1q2 share a point.

    Contact at endpoints (within eps_len) does not count, nor does
    collinear overlap touching only at endpoints.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    d1 = p2 - p1
    d2 = q2 - q1
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    r = q1 - p1
    scale = max(np.linalg.norm(d1), np.linalg.norm(d2), 1e-300)
    if abs(denom) <= tol.eps_len * scale:
        # Parallel. Proper intersection only via collinear interior overlap.
        if abs(d1[0] * r[1] - d1[1] * r[0]) > tol.eps_len * scale:
            return False
        axis = d1 / max(np.dot(d1, d1), 1e-300)
        t1 = float(np.dot(q1 - p1, axis))
        t2 = float(np.dot(q2 - p1, axis))
        lo, hi = min(t1, t2), max(t1, t2)
        eps = tol.eps_len / max(np.linalg.norm(d1), 1e-300)
        return lo < 1.0 - eps and hi > eps
    t = (r[0] * d2[1] - r[1] * d2[0]) / denom
    s = (r[0] * d1[1] - r[1] * d1[0]) / denom
    eps_t = tol.eps_len / max(np.linalg.norm(d1), 1e-300)
    eps_s = tol.eps_len / max(np.linalg.norm(d2), 1e-300)
    return eps_t < t < 1.0 - eps_t and eps_s < s < 1.0 - eps_s


def segments_cross_transversally(p1, p2, q1, q2, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the segments cross each other's supporting line strictly.

    Stricter than segments_properly_intersect: collinear overlap and
    grazing/tangential contact do not count, only a genuine transversal
    crossing with both endpoints of each segment strictly on opposite
    sides of the other segment's line.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)

    def side(a, b, c, margin):
        cr = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if cr > margin:
            return 1
        if cr < -margin:
            return -1
        return 0

    m1 = tol.eps_len * float(np.linalg.norm(p2 - p1))
    m2 = tol.eps_len * float(np.linalg.norm(q2 - q1))
    s1 = side(p1, p2, q1, m1)
    s2 = side(p1, p2, q2, m1)
    s3 = side(q1, q2, p1, m2)
    s4 = side(q1, q2, p2, m2)
    return s1 * s2 < 0 and s3 * s4 < 0


def polyline_self_intersects(points, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff some pair of polyline segments improperly share interior points."""
    pts = np.asarray(points, dtype=float)
    n = len(pts) - 1
    for i in range(n):
        for j in range(i + 1, n):
            if segments_properly_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1], tol):
                return True
    # adjacent segments folding back onto each other also break simplicity
    for i in range(n - 1):
        u = pts[i + 1] - pts[i]
        w = pts[i + 2] - pts[i + 1]
        cross = u[0] * w[1] - u[1] * w[0]
        if abs(cross) <= tol.eps_len and np.dot(u, w) < 0:
            return True
    return False


def min_max_gap_arc(angles):
    """Smallest arc [start, start+width] (ccw) covering all given angles.

    Returns (start, width) with width in [0, 2*pi). Input angles may be any
    reals; they are reduced mod 2*pi.
    """
    th = np.sort(np.mod(np.asarray(angles, dtype=float), 2.0 * math.pi))
    if len(th) == 1:
        return float(th[0]), 0.0
    gaps = np.diff(np.concatenate([th, th[:1] + 2.0 * math.pi]))
    k = int(np.argmax(gaps))
    width = 2.0 * math.pi - float(gaps[k])
    start = float(th[(k + 1) % len(th)])
    return start, width


# ---------------------------------------------------------------------------
# 3D convex hull (incremental insertion with visibility test)
# ---------------------------------------------------------------------------


def _plane(points, tri):
    a, b, c = points[list(tri)]
    n = np.cross(b - a, c - a)
    return n, a


def convex_hull_3d(points, tol: Tolerance = DEFAULT_TOL):
    """Triangulated convex hull of 3D points, outward-oriented faces.

    Assumes points are in general position (random inputs). Raises
    DegenerateHull for fewer than 4 points or (near) coplanar input.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 4:
        raise DegenerateHull("need at least 4 points")
    scale = float(np.max(np.abs(pts))) or 1.0
    eps = tol.eps_len * scale

    # initial simplex: two extreme points, then max-area, then max-volume
    i0 = int(np.argmin(pts[:, 0]))
    i1 = int(np.argmax(np.linalg.norm(pts - pts[i0], axis=1)))
    if np.linalg.norm(pts[i1] - pts[i0]) <= eps:
        raise DegenerateHull("all points coincide")
    d = pts[i1] - pts[i0]
    areas = np.linalg.norm(np.cross(pts - pts[i0], d), axis=1)
    i2 = int(np.argmax(areas))
    if areas[i2] <= eps * np.linalg.norm(d):
        raise DegenerateHull("points are collinear")
    nrm = np.cross(pts[i2] - pts[i0], d)
    vols = np.abs((pts - pts[i0]) @ nrm)
    i3 = int(np.argmax(vols))
    if vols[i3] <= eps * np.linalg.norm(nrm):
        raise DegenerateHull("points are coplanar")

    faces = [(i0, i1, i2), (i0, i2, i3), (i0, i3, i1), (i1, i3, i2)]
    centroid = pts[[i0, i1, i2, i3]].mean(axis=0)

    def orient(tri):
        nv, a = _plane(pts, tri)
        if np.dot(nv, centroid - a) > 0:
            return (tri[0], tri[2], tri[1])
        return tri

    faces = [orient(f) for f in faces]

    used = {i0, i1, i2, i3}
    order = [i for i in range(n) if i not in used]
    for p in order:
        normals = np.array([_plane(pts, f)[0] for f in faces])
        anchors = np.array([pts[f[0]] for f in faces])
        side = np.einsum("ij,ij->i", normals, pts[p] - anchors)
        nscale = np.linalg.norm(normals, axis=1)
        visible = side > eps * nscale
        if not visible.any():
            continue  # inside current hull
        # horizon = edges between a visible and a hidden face
        edge_count = {}
        for f, vis in zip(faces, visible):
            if not vis:
                continue
            for k in range(3):
                e = (f[k], f[(k + 1) % 3])
                edge_count[e] = edge_count.get(e, 0) + 1
        horizon = []
        for (u, v), _cnt in edge_count.items():
            if (v, u) not in edge_count:
                horizon.append((u, v))
        faces = [f for f, vis in zip(faces, visible) if not vis]
        for u, v in horizon:
            faces.append((u, v, p))

    # validation: every point on or inside every face plane
    normals = np.array([_plane(pts, f)[0] for f in faces])
    anchors = np.array([pts[f[0]] for f in faces])
    nscale = np.linalg.norm(normals, axis=1)
    side = (pts @ normals.T - np.einsum("ij,ij->i", normals, anchors)) / nscale
    if side.max() > 1e-7 * scale:
        raise DegenerateHull("hull construction failed validation")
    return [tuple(int(i) for i in f) for f in faces]
