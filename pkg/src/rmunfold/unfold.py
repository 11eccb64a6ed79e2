"""Develop a cut polyhedron into the plane and detect face overlap.

Faces are placed by breadth-first traversal of the face-dual restricted
to uncut edges; each new face is rigidly attached across its shared
placed edge. Overlap detection is a separating-axis test on slightly
shrunk triangles (so exact seam contact never counts) behind a uniform
grid broad phase.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import DisconnectedDual
from .geom import DEFAULT_TOL, Tolerance
from .polyhedron import Polyhedron


@dataclass
class Unfolding:
    """Planar placement of every face, three 2D points per face."""

    placements: dict  # face index -> (3, 2) array, same vertex order as the face
    root_face: int
    polyhedron: Polyhedron
    cut_edges: set
    max_seam_error: float = 0.0
    max_length_error: float = 0.0

    def placed_point(self, fi, v):
        f = self.polyhedron.faces[fi]
        return self.placements[fi][f.index(v)]


def _place_third(pa, pb, la, lb, lab):
    """Place the apex of a triangle with given side lengths left of a->b."""
    # la = |apex - a|, lb = |apex - b|, lab = |b - a|
    x = (la * la - lb * lb + lab * lab) / (2.0 * lab)
    y2 = la * la - x * x
    y = math.sqrt(max(y2, 0.0))
    e = (pb - pa) / lab
    n = np.array([-e[1], e[0]])
    return pa + x * e + y * n


def unfold(p: Polyhedron, cut_edges, root_face: int = None,
           tol: Tolerance = DEFAULT_TOL) -> Unfolding:
    """Flatten the mesh cut along ``cut_edges`` into a single planar piece.

    ``cut_edges`` may be a CutTree (its edges and boundary quad are used to
    pick the root face) or a plain set of frozenset edges. Raises
    DisconnectedDual when the cut severs the face-dual graph.
    """
    tree = None
    if hasattr(cut_edges, "edges") and isinstance(cut_edges.edges, set):
        tree = cut_edges
        cut = set(tree.edges)
    else:
        cut = {frozenset(e) for e in cut_edges}
    if root_face is None:
        root_face = _default_root(p, tree)

    placements = {}
    f0 = p.faces[root_face]
    a, b, c = p.vertices[list(f0)]
    lab = np.linalg.norm(b - a)
    pa = np.zeros(2)
    pb = np.array([lab, 0.0])
    pc = _place_third(pa, pb, np.linalg.norm(c - a), np.linalg.norm(c - b), lab)
    placements[root_face] = np.array([pa, pb, pc])

    queue = deque([root_face])
    while queue:
        fi = queue.popleft()
        f = p.faces[fi]
        for k in range(3):
            u, v = f[k], f[(k + 1) % 3]
            e = frozenset((u, v))
            if e in cut:
                continue
            for gi in p.edge_faces(u, v):
                if gi == fi or gi in placements:
                    continue
                g = p.faces[gi]
                w = next(x for x in g if x not in (u, v))
                pu = placements[fi][f.index(u)]
                pv = placements[fi][f.index(v)]
                lu = np.linalg.norm(p.vertices[w] - p.vertices[u])
                lv = np.linalg.norm(p.vertices[w] - p.vertices[v])
                luv = np.linalg.norm(p.vertices[v] - p.vertices[u])
                # the neighbor traverses the shared edge v -> u, so placing
                # its apex left of v -> u puts it on the far side of fi
                pw = _place_third(pv, pu, lv, lu, luv)
                pl = np.empty((3, 2))
                pl[g.index(u)] = pu
                pl[g.index(v)] = pv
                pl[g.index(w)] = pw
                placements[gi] = pl
                queue.append(gi)

    if len(placements) != p.n_faces:
        raise DisconnectedDual(
            f"only {len(placements)} of {p.n_faces} faces reachable across uncut edges"
        )

    u = Unfolding(
        placements=placements,
        root_face=root_face,
        polyhedron=p,
        cut_edges=cut,
    )
    u.max_seam_error, u.max_length_error = _residuals(p, u)
    return u


def _default_root(p: Polyhedron, tree) -> int:
    if tree is not None and tree.boundary is not None and tree.bottom_face is not None:
        a, _b, c = tree.boundary
        # develop from the neighbor of the bottom triangle across its uncut
        # edge (a, c); deterministic and keeps the boundary quad on the rim
        for gi in p.edge_faces(a, c):
            if gi != tree.bottom_face:
                return gi
        return tree.bottom_face
    return 0


def _residuals(p: Polyhedron, u: Unfolding):
    seam = 0.0
    length = 0.0
    for fi, pl in u.placements.items():
        f = p.faces[fi]
        for k in range(3):
            d2 = np.linalg.norm(pl[(k + 1) % 3] - pl[k])
            d3 = np.linalg.norm(p.vertices[f[(k + 1) % 3]] - p.vertices[f[k]])
            denom = max(d3, 1e-300)
            length = max(length, abs(d2 - d3) / denom)
    for e, fs in p._edge_faces.items():
        if e in u.cut_edges or len(fs) != 2:
            continue
        x, y = tuple(e)
        for fi in fs:
            pass
        pa1 = u.placed_point(fs[0], x)
        pa2 = u.placed_point(fs[1], x)
        pb1 = u.placed_point(fs[0], y)
        pb2 = u.placed_point(fs[1], y)
        seam = max(seam, float(np.linalg.norm(pa1 - pa2)), float(np.linalg.norm(pb1 - pb2)))
    return seam, length


# ---------------------------------------------------------------------------
# overlap detection
# ---------------------------------------------------------------------------


def _shrink(tri, eps):
    c = tri.mean(axis=0)
    return c + (tri - c) * (1.0 - eps)


def _sat_overlap_batch(t1, t2):
    """Vectorized separating-axis test for triangle pairs.

    t1, t2: (n, 3, 2) arrays. Returns a boolean array marking pairs with a
    positive-area intersection (inputs are expected pre-shrunk).
    """
    n = len(t1)
    out = np.ones(n, dtype=bool)
    for src, other in ((t1, t2), (t2, t1)):
        edges = np.roll(src, -1, axis=1) - src  # (n, 3, 2)
        axes = np.stack([-edges[..., 1], edges[..., 0]], axis=-1)  # (n, 3, 2)
        pr_src = np.einsum("nkd,njd->nkj", axes, src)  # (n, 3 axes, 3 verts)
        pr_oth = np.einsum("nkd,njd->nkj", axes, other)
        sep = (pr_src.max(axis=2) < pr_oth.min(axis=2)) | (
            pr_oth.max(axis=2) < pr_src.min(axis=2)
        )
        out &= ~sep.any(axis=1)
    return out


def detect_overlap(u: Unfolding, tol: Tolerance = DEFAULT_TOL):
    """Face pairs with positive-area intersection in the layout.

    Faces touching only along shared seams or at vertices are not
    overlaps; each triangle is shrunk slightly toward its centroid before
    the separating-axis test so exact contact never registers.
    """
    fids = sorted(u.placements)
    tris = np.stack([u.placements[fi] for fi in fids])
    n = len(fids)
    if n == 0:
        return []
    lo = tris.min(axis=1)
    hi = tris.max(axis=1)
    diam = float(np.median(np.linalg.norm(hi - lo, axis=1))) or 1.0
    cell = diam
    grid = {}
    for i in range(n):
        x0, y0 = np.floor(lo[i] / cell).astype(int)
        x1, y1 = np.floor(hi[i] / cell).astype(int)
        for gx in range(x0, x1 + 1):
            for gy in range(y0, y1 + 1):
                grid.setdefault((gx, gy), []).append(i)
    cand = set()
    for bucket in grid.values():
        for ii in range(len(bucket)):
            for jj in range(ii + 1, len(bucket)):
                i, j = bucket[ii], bucket[jj]
                if (lo[i] <= hi[j]).all() and (lo[j] <= hi[i]).all():
                    cand.add((i, j))
    if not cand:
        return []
    cand = sorted(cand)
    scale = max(float(np.abs(tris).max()), 1.0)
    shrink_eps = max(tol.eps_len / diam, 1e-12 * scale / diam, 1e-9)
    a = np.stack([_shrink(tris[i], shrink_eps) for i, _ in cand])
    b = np.stack([_shrink(tris[j], shrink_eps) for _, j in cand])
    hits = _sat_overlap_batch(a, b)
    return [
        (fids[i], fids[j]) for (i, j), hit in zip(cand, hits) if hit
    ]


# ---------------------------------------------------------------------------
# SVG rendering
# ---------------------------------------------------------------------------


def render_svg(u: Unfolding, overlaps=None, size: int = 900) -> str:
    """Deterministic SVG of the layout with cut edges and overlaps marked.

    Faces are light polygons; edges placed along cut seams are drawn red,
    interior fold edges gray; faces in overlapping pairs get the
    ``overlap`` style class.
    """
    if overlaps is None:
        overlaps = detect_overlap(u)
    flagged = {f for pair in overlaps for f in pair}
    fids = sorted(u.placements)
    pts = np.vstack([u.placements[fi] for fi in fids])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
    pad = 0.03 * span
    scale = (size - 2.0) / (span + 2.0 * pad)

    def sx(p):
        return (p[0] - lo[0] + pad) * scale + 1.0

    def sy(p):
        return size - ((p[1] - lo[1] + pad) * scale + 1.0)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        "<style>.face{fill:#dce9f5;stroke:none}.overlap{fill:#f5b8b8;stroke:none}"
        ".fold{stroke:#9aa5ad;stroke-width:0.6}.cut{stroke:#c0392b;stroke-width:1.2}"
        "</style>",
    ]
    for fi in fids:
        tri = u.placements[fi]
        cls = "overlap" if fi in flagged else "face"
        coords = " ".join(f"{sx(p):.3f},{sy(p):.3f}" for p in tri)
        parts.append(f'<polygon class="{cls}" points="{coords}"/>')
    p = u.polyhedron
    drawn = set()
    for fi in fids:
        f = p.faces[fi]
        tri = u.placements[fi]
        for k in range(3):
            e = frozenset((f[k], f[(k + 1) % 3]))
            key = (fi, tuple(sorted(e)))
            if key in drawn:
                continue
            drawn.add(key)
            cls = "cut" if e in u.cut_edges else "fold"
            x1, y1 = sx(tri[k]), sy(tri[k])
            x2, y2 = sx(tri[(k + 1) % 3]), sy(tri[(k + 1) % 3])
            parts.append(
                f'<line class="{cls}" x1="{x1:.3f}" y1="{y1:.3f}" '
                f'x2="{x2:.3f}" y2="{y2:.3f}"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def vertex_image_angle_sums(u: Unfolding):
    """Total placed angle around each mesh vertex over all its face images.

    A developable layout always reproduces the 3D angle sum 2*pi - omega_v
    no matter how many images the cuts split the vertex into.
    """
    p = u.polyhedron
    sums = np.zeros(p.n_vertices)
    for fi, pl in u.placements.items():
        f = p.faces[fi]
        for k in range(3):
            v1 = pl[(k + 1) % 3] - pl[k]
            v2 = pl[(k + 2) % 3] - pl[k]
            c = float(np.dot(v1, v2) / (np.linalg.norm(v1) * np.linalg.norm(v2)))
            sums[f[k]] += math.acos(min(1.0, max(-1.0, c)))
    return sums
