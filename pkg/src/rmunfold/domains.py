"""Generators for triangulated convex test domains.

The disk meshes tile concentric hexagonal rings with equilateral lattice
triangles (optionally jittered), so they are round and non-obtuse by
construction, which is what the planar forest theorem needs. The
octagonal spiral mesh is built so its natural spanning paths are
45-degree spiral arcs.
"""

from __future__ import annotations

import math

import numpy as np

from .geom import DEFAULT_TOL, Tolerance
from .planeforest import ConvexDomain, is_round

_A = np.array([1.0, 0.0])
_B = np.array([0.5, math.sqrt(3.0) / 2.0])


def _hexdist(q, r):
    return (abs(q) + abs(r) + abs(q + r)) // 2


def hex_disk_mesh(n_rings: int, jitter: float = 0.0, seed: int = 0,
                  rotate: float = 0.0, scale: float = 1.0,
                  validate: bool = True, tol: Tolerance = DEFAULT_TOL) -> ConvexDomain:
    """Hexagonal disk of ``n_rings`` concentric rings of lattice triangles.

    Ring j carries 6*j vertices; the outermost ring forms the convex
    boundary. Interior vertices may be jittered by up to ``jitter`` times
    the lattice spacing (the boundary stays exact so roundness is
    preserved); the mesh is validated non-obtuse and round on request.
    """
    if n_rings < 1:
        raise ValueError("need at least one ring")
    if not 0.0 <= jitter < 0.25:
        raise ValueError("jitter would break the non-obtuse guarantee")
    rng = np.random.Generator(np.random.PCG64(seed))
    index = {}
    verts = []
    for q in range(-n_rings, n_rings + 1):
        for r in range(-n_rings, n_rings + 1):
            if _hexdist(q, r) <= n_rings:
                index[(q, r)] = len(verts)
                verts.append(q * _A + r * _B)
    verts = np.asarray(verts)
    tris = []
    for (q, r), _i in list(index.items()):
        if (q + 1, r) in index and (q, r + 1) in index:
            tris.append((index[(q, r)], index[(q + 1, r)], index[(q, r + 1)]))
        if (q + 1, r) in index and (q + 1, r - 1) in index:
            tris.append((index[(q, r)], index[(q + 1, r - 1)], index[(q + 1, r)]))
    boundary_keys = [k for k in index if _hexdist(*k) == n_rings]
    boundary_keys.sort(key=lambda k: math.atan2(*(k[0] * _A + k[1] * _B)[::-1]))
    boundary = [index[k] for k in boundary_keys]
    interior = sorted(set(range(len(verts))) - set(boundary))
    if jitter > 0.0:
        offs = rng.uniform(-jitter, jitter, size=(len(interior), 2))
        verts[interior] += offs
    if rotate:
        ca, sa = math.cos(rotate), math.sin(rotate)
        verts = verts @ np.array([[ca, sa], [-sa, ca]])
    verts *= scale
    dom = ConvexDomain(vertices=verts, triangles=tris, boundary=boundary)
    if validate:
        dom.validate(tol)
        if not dom.is_nonobtuse(tol):
            raise ValueError(
                f"disk mesh came out obtuse (max angle {dom.max_triangle_angle():.4f})"
            )
        if not is_round(dom, tol):
            raise ValueError("disk mesh came out non-round")
    return dom


def octagonal_spiral_mesh(n_rings: int = 4, validate: bool = True,
                          tol: Tolerance = DEFAULT_TOL) -> ConvexDomain:
    """Octagon rings rotated 22.5 degrees per ring with 45-degree chords.

    The radius ratio is chosen so the ring-to-ring chords meet the radial
    direction at exactly 45 degrees; triangles are right or acute, and the
    natural greedy forest follows the spiral chords.
    """
    if n_rings < 1:
        raise ValueError("need at least one ring")
    ratio = 1.0 / (math.cos(math.pi / 8.0) - math.sin(math.pi / 8.0))
    verts = [np.zeros(2)]
    rings = [[0]]
    for j in range(1, n_rings + 1):
        idx = []
        r = ratio ** (j - 1)
        for t in range(8):
            ang = 2.0 * math.pi * t / 8.0 + (j - 1) * math.pi / 8.0
            idx.append(len(verts))
            verts.append(r * np.array([math.cos(ang), math.sin(ang)]))
        rings.append(idx)
    tris = []
    for a in range(8):
        tris.append((0, rings[1][a], rings[1][(a + 1) % 8]))
    for j in range(1, n_rings):
        inner, outer = rings[j], rings[j + 1]
        for a in range(8):
            # spiral chord inner[a] -> outer[a]; diagonal inner[a+1] -> outer[a]
            tris.append((inner[a], outer[a], inner[(a + 1) % 8]))
            tris.append((inner[(a + 1) % 8], outer[a], outer[(a + 1) % 8]))
    dom = ConvexDomain(vertices=np.asarray(verts), triangles=tris,
                       boundary=rings[-1])
    if validate:
        dom.validate(tol)
        if not dom.is_nonobtuse(tol):
            raise ValueError("spiral mesh came out obtuse")
        if not is_round(dom, tol):
            raise ValueError("spiral mesh came out non-round")
    return dom


def rectangle_domain(aspect: float = 10.0) -> ConvexDomain:
    """Thin two-triangle rectangle; a deliberately non-round fixture."""
    w, h = aspect, 1.0
    verts = np.array([[0.0, 0.0], [w, 0.0], [w, h], [0.0, h]])
    tris = [(0, 1, 2), (0, 2, 3)]
    return ConvexDomain(vertices=verts, triangles=tris, boundary=[0, 1, 2, 3])


def regular_polygon_domain(m: int = 16) -> ConvexDomain:
    """Fan-triangulated regular polygon with one center vertex."""
    verts = [np.zeros(2)]
    for t in range(m):
        ang = 2.0 * math.pi * t / m
        verts.append(np.array([math.cos(ang), math.sin(ang)]))
    tris = [(0, 1 + t, 1 + (t + 1) % m) for t in range(m)]
    return ConvexDomain(vertices=np.asarray(verts), triangles=tris,
                        boundary=list(range(1, m + 1)))
