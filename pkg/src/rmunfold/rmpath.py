"""Radial monotonicity predicates on directed planar paths.

A directed path (v_0, ..., v_k) is radially monotone (rm) w.r.t. v_i when
the distance from v_i to every later point of the path never decreases.
Equivalently, the angle at v_j between the rays toward v_i and toward
v_{j+1} is at least 90 degrees for every j > i. The path is rm outright
when this holds for every source vertex v_0 ... v_{k-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, InternalError
from .geom import (
    DEFAULT_TOL,
    Tolerance,
    min_max_gap_arc,
    polyline_self_intersects,
)


@dataclass(frozen=True)
class PlanarPath:
    """Directed planar polyline; v_0 is the source of all rm checks."""

    points: np.ndarray

    def __init__(self, points, tol: Tolerance = DEFAULT_TOL):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise DegenerateInput("path needs at least two 2D points")
        if not np.isfinite(pts).all():
            raise DegenerateInput("path coordinates must be finite")
        steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        if (steps <= tol.eps_len).any():
            raise DegenerateInput("consecutive path vertices coincide")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def k(self) -> int:
        """Index of the last vertex."""
        return len(self.points) - 1

    def reverse(self) -> "PlanarPath":
        return PlanarPath(self.points[::-1])

    def prepend(self, p) -> "PlanarPath":
        return PlanarPath(np.vstack([np.asarray(p, dtype=float), self.points]))

    def is_simple(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return not polyline_self_intersects(self.points, tol)


def _as_points(q):
    return q.points if isinstance(q, PlanarPath) else np.asarray(q, dtype=float)


def is_rm_wrt(q, i: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the path is radially monotone w.r.t. its vertex v_i."""
    pts = _as_points(q)
    k = len(pts) - 1
    if not 0 <= i < k:
        raise IndexError("source index out of range")
    if i + 1 >= k:
        return True
    src = pts[i]
    mid = pts[i + 1 : k]
    nxt = pts[i + 2 : k + 1]
    u = src - mid
    w = nxt - mid
    dots = np.einsum("ij,ij->i", u, w)
    lim = np.linalg.norm(u, axis=1) * np.linalg.norm(w, axis=1) * math.sin(tol.eps_angle)
    return bool((dots <= lim).all())


def is_rm(q, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the path is radially monotone w.r.t. every vertex."""
    pts = _as_points(q)
    return all(is_rm_wrt(pts, i, tol) for i in range(len(pts) - 1))


def rm_violations(q, tol: Tolerance = DEFAULT_TOL):
    """All (i, j) pairs where monotonicity w.r.t. v_i fails at v_j."""
    pts = _as_points(q)
    k = len(pts) - 1
    out = []
    for i in range(k):
        src = pts[i]
        for j in range(i + 1, k):
            u = src - pts[j]
            w = pts[j + 1] - pts[j]
            lim = np.linalg.norm(u) * np.linalg.norm(w) * math.sin(tol.eps_angle)
            if np.dot(u, w) > lim:
                out.append((i, j))
    return out


def distances_monotone(q, samples_per_edge: int = 100, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Dense-sampling check of the distance definition of rm.

    Samples every edge and verifies, for every vertex v_i, that distances
    from v_i along the remainder of the polyline never decrease. Used by
    tests as an oracle independent of the angle criterion.
    """
    pts = _as_points(q)
    k = len(pts) - 1
    t = np.linspace(0.0, 1.0, samples_per_edge, endpoint=False)
    dense = np.concatenate(
        [pts[j] + t[:, None] * (pts[j + 1] - pts[j]) for j in range(k)] + [pts[-1:]]
    )
    scale = np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)) or 1.0
    for i in range(k):
        d = np.linalg.norm(dense[i * samples_per_edge :] - pts[i], axis=1)
        if (np.diff(d) < -tol.eps_len * scale - scale * tol.eps_angle / samples_per_edge).any():
            return False
    return True


@dataclass(frozen=True)
class ForwardCone:
    """Directions in which the path may be extended beyond its apex vertex.

    The cone is the intersection over earlier vertices v_i of the direction
    halfplanes {d : d . (v_i - apex) <= 0}; it sweeps ccw from dir_lo to
    dir_hi and measures pi minus the angular width of the smallest cone at
    the apex containing all earlier vertices.
    """

    apex: np.ndarray
    dir_lo: np.ndarray
    dir_hi: np.ndarray
    measure: float

    def contains(self, d, tol: Tolerance = DEFAULT_TOL) -> bool:
        d = np.asarray(d, dtype=float)
        lo = math.atan2(self.dir_lo[1], self.dir_lo[0])
        ang = math.atan2(d[1], d[0])
        off = (ang - lo) % (2.0 * math.pi)
        return off <= self.measure + tol.eps_angle


def forward_cone(q, j: int, tol: Tolerance = DEFAULT_TOL) -> ForwardCone:
    """Admissible-extension cone at vertex v_j of an rm path prefix."""
    pts = _as_points(q)
    if not 1 <= j <= len(pts) - 1:
        raise IndexError("cone index out of range")
    apex = pts[j]
    back = pts[:j] - apex
    angles = np.arctan2(back[:, 1], back[:, 0])
    start, width = min_max_gap_arc(angles)
    if width > math.pi:
        # cannot happen for rm prefixes; the caller violated the contract
        raise InternalError("empty forward cone: prefix is not rm")
    measure = math.pi - width
    lo_angle = start + width + math.pi / 2.0
    hi_angle = start - math.pi / 2.0 + 2.0 * math.pi
    dir_lo = np.array([math.cos(lo_angle), math.sin(lo_angle)])
    dir_hi = np.array([math.cos(hi_angle), math.sin(hi_angle)])
    return ForwardCone(apex=apex.copy(), dir_lo=dir_lo, dir_hi=dir_hi, measure=measure)


@dataclass(frozen=True)
class BackwardRegion:
    """Locus of points that can be prepended to an rm path keeping it rm.

    One halfplane per path edge: boundary through v_i orthogonal to the
    edge (v_i, v_{i+1}), excluding v_{i+1}. Stored as (boundary point,
    inward unit normal) pairs; the intersection always contains v_0.
    """

    halfplanes: tuple = field(default_factory=tuple)

    def contains(self, p, tol: Tolerance = DEFAULT_TOL) -> bool:
        p = np.asarray(p, dtype=float)
        for pt, normal in self.halfplanes:
            if np.dot(p - pt, normal) < -tol.eps_len:
                return False
        return True


def backward_region(q, tol: Tolerance = DEFAULT_TOL) -> BackwardRegion:
    """Halfplane description of where a new source vertex may go."""
    pts = _as_points(q)
    planes = []
    for i in range(len(pts) - 1):
        d = pts[i + 1] - pts[i]
        n = -d / np.linalg.norm(d)
        planes.append((pts[i].copy(), n))
    return BackwardRegion(halfplanes=tuple(planes))


def backward_region_area(q, bound: float = 50.0, tol: Tolerance = DEFAULT_TOL) -> float:
    """Area of the backward region clipped to a large box around the path.

    The region may be unbounded; the box (half-width ``bound`` times the
    path extent, centered on v_0) makes the measurement finite.
    """
    pts = _as_points(q)
    scale = max(float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0))), 1.0)
    c = pts[0]
    h = bound * scale
    poly = [
        c + np.array([-h, -h]),
        c + np.array([h, -h]),
        c + np.array([h, h]),
        c + np.array([-h, h]),
    ]
    for pt, normal in backward_region(q, tol).halfplanes:
        clipped = []
        m = len(poly)
        for a_i in range(m):
            a = poly[a_i]
            b = poly[(a_i + 1) % m]
            da = np.dot(a - pt, normal)
            db = np.dot(b - pt, normal)
            if da >= 0:
                clipped.append(a)
            if (da > 0 > db) or (da < 0 < db):
                t = da / (da - db)
                clipped.append(a + t * (b - a))
        poly = clipped
        if len(poly) < 3:
            return 0.0
    arr = np.asarray(poly)
    x, y = arr[:, 0], arr[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def can_extend_backward(q, v_new, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff prepending v_new keeps the path simple and rm."""
    pts = _as_points(q)
    v_new = np.asarray(v_new, dtype=float)
    if np.linalg.norm(v_new - pts[0]) <= tol.eps_len:
        return False
    if not backward_region(pts, tol).contains(v_new, tol):
        return False
    return not polyline_self_intersects(np.vstack([v_new, pts]), tol)


def grow_random_rm_path(rng, n_vertices: int, margin: float = 0.05, step=(0.5, 1.5)):
    """Random rm path built by sampling directions inside the forward cone.

    The cone guarantees extendability (its measure never drops below
    pi/2), so any direction strictly inside it preserves monotonicity
    regardless of step length.
    """
    pts = [np.zeros(2)]
    ang0 = rng.uniform(0.0, 2.0 * math.pi)
    pts.append(np.array([math.cos(ang0), math.sin(ang0)]) * rng.uniform(*step))
    while len(pts) < n_vertices:
        cone = forward_cone(np.asarray(pts), len(pts) - 1)
        lo = math.atan2(cone.dir_lo[1], cone.dir_lo[0])
        ang = lo + rng.uniform(margin, max(cone.measure - margin, margin * 1.5))
        d = np.array([math.cos(ang), math.sin(ang)])
        pts.append(pts[-1] + d * rng.uniform(*step))
    return PlanarPath(np.asarray(pts))
