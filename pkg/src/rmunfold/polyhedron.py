"""Triangulated convex polyhedra: construction, connectivity, curvature.

Meshes are stored as vertex arrays plus outward-oriented triangles.
Vertex fans are kept in counterclockwise order as seen from outside so
path-side angle sums are well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateHull, DegenerateInput
from .geom import DEFAULT_TOL, Tolerance, angle_between, convex_hull_3d


@dataclass
class Polyhedron:
    """Closed triangulated convex surface."""

    vertices: np.ndarray
    faces: list
    _edge_faces: dict = field(default_factory=dict, repr=False)
    _neighbors: dict = field(default_factory=dict, repr=False)
    _vertex_faces: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.faces = [tuple(int(i) for i in f) for f in self.faces]
        self._edge_faces = {}
        self._neighbors = {i: set() for i in range(len(self.vertices))}
        self._vertex_faces = {i: [] for i in range(len(self.vertices))}
        for fi, f in enumerate(self.faces):
            for k in range(3):
                u, v = f[k], f[(k + 1) % 3]
                self._edge_faces.setdefault(frozenset((u, v)), []).append(fi)
                self._neighbors[u].add(v)
                self._neighbors[v].add(u)
            for v in f:
                self._vertex_faces[v].append(fi)

    # -- connectivity -------------------------------------------------------

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self._edge_faces)

    @property
    def n_faces(self):
        return len(self.faces)

    def edges(self):
        return set(self._edge_faces)

    def has_edge(self, u, v):
        return frozenset((u, v)) in self._edge_faces

    def edge_faces(self, u, v):
        return self._edge_faces[frozenset((u, v))]

    def neighbors(self, v):
        return self._neighbors[v]

    def vertex_faces(self, v):
        return self._vertex_faces[v]

    def validate(self, tol: Tolerance = DEFAULT_TOL, check_convex: bool = False):
        if self.n_vertices - self.n_edges + self.n_faces != 2:
            raise DegenerateInput("mesh violates the Euler relation")
        for e, fs in self._edge_faces.items():
            if len(fs) != 2:
                raise DegenerateInput(f"edge {set(e)} borders {len(fs)} faces")
        directed = set()
        for f in self.faces:
            for k in range(3):
                d = (f[k], f[(k + 1) % 3])
                if d in directed:
                    raise DegenerateInput("inconsistent face orientation")
                directed.add(d)
        if check_convex:
            c = self.vertices.mean(axis=0)
            scale = float(np.max(np.abs(self.vertices - c))) or 1.0
            for f in self.faces:
                a, b, d = self.vertices[list(f)]
                n = np.cross(b - a, d - a)
                nn = np.linalg.norm(n)
                if np.dot(n, c - a) > tol.eps_len * scale * nn:
                    raise DegenerateInput("face oriented inward")
                side = (self.vertices - a) @ n / nn
                if side.max() > 1e-7 * scale:
                    raise DegenerateInput("mesh is not convex")
        return True

    def face_normal(self, fi):
        a, b, c = self.vertices[list(self.faces[fi])]
        n = np.cross(b - a, c - a)
        return n / np.linalg.norm(n)

    def face_angle(self, fi, v):
        """Interior angle of face fi at vertex v."""
        f = self.faces[fi]
        k = f.index(v)
        p = self.vertices[v]
        q = self.vertices[f[(k + 1) % 3]]
        r = self.vertices[f[(k + 2) % 3]]
        return angle_between(q - p, r - p)

    def vertex_fan(self, v):
        """Neighbor cycle around v, counterclockwise seen from outside."""
        succ = {}
        for fi in self._vertex_faces[v]:
            f = self.faces[fi]
            k = f.index(v)
            succ[f[(k + 1) % 3]] = f[(k + 2) % 3]
        start = next(iter(succ))
        cyc = [start]
        while True:
            nxt = succ[cyc[-1]]
            if nxt == start:
                break
            cyc.append(nxt)
            if len(cyc) > len(succ):
                raise DegenerateInput(f"open or non-manifold fan at vertex {v}")
        return cyc

    def total_angle(self, v):
        return sum(self.face_angle(fi, v) for fi in self._vertex_faces[v])


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------


def _hull_polyhedron(points, tol: Tolerance = DEFAULT_TOL) -> Polyhedron:
    faces = convex_hull_3d(points, tol)
    used = sorted({i for f in faces for i in f})
    if len(used) != len(points):
        # random spherical points are all extreme; anything else is degenerate
        remap = {old: new for new, old in enumerate(used)}
        points = np.asarray(points, dtype=float)[used]
        faces = [tuple(remap[i] for i in f) for f in faces]
    p = Polyhedron(vertices=np.asarray(points, dtype=float), faces=faces)
    p.validate()
    return p


def random_spherical(n: int, seed: int = 0, add_poles: bool = False,
                     tol: Tolerance = DEFAULT_TOL) -> Polyhedron:
    """Convex hull of n uniform unit-sphere points (PCG64-seeded).

    With ``add_poles`` the north and south poles (0,0,+-1) are appended.
    Retries internally with a derived sub-seed if the hull degenerates.
    """
    if n < 4:
        raise ValueError("need at least four points")
    for attempt in range(3):
        rng = np.random.Generator(np.random.PCG64((seed, attempt)))
        pts = rng.normal(size=(n, 3))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        if add_poles:
            pts = np.vstack([pts, [[0.0, 0.0, 1.0]], [[0.0, 0.0, -1.0]]])
        try:
            return _hull_polyhedron(pts, tol)
        except DegenerateHull:
            continue
    raise DegenerateHull("could not build a spherical polyhedron")


def random_ellipsoidal(n: int, seed: int = 0, axes=(1.0, 1.0, 0.25),
                       add_poles: bool = False, tol: Tolerance = DEFAULT_TOL) -> Polyhedron:
    """Convex hull of random points on an axis-aligned ellipsoid."""
    if n < 4:
        raise ValueError("need at least four points")
    ax = np.asarray(axes, dtype=float)
    for attempt in range(3):
        rng = np.random.Generator(np.random.PCG64((seed, attempt)))
        pts = rng.normal(size=(n, 3))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        pts = pts * ax
        if add_poles:
            pts = np.vstack([pts, [[0.0, 0.0, ax[2]]], [[0.0, 0.0, -ax[2]]]])
        try:
            return _hull_polyhedron(pts, tol)
        except DegenerateHull:
            continue
    raise DegenerateHull("could not build an ellipsoidal polyhedron")


def regular_tetrahedron() -> Polyhedron:
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    v /= math.sqrt(3.0)
    return _hull_polyhedron(v)


def regular_octahedron() -> Polyhedron:
    v = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],
                 dtype=float)
    return _hull_polyhedron(v)


def triangulated_cube() -> Polyhedron:
    v = np.array(
        [[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)], dtype=float
    ) / math.sqrt(3.0)
    return _hull_polyhedron(v)


# ---------------------------------------------------------------------------
# curvature, ordering, bottom face
# ---------------------------------------------------------------------------


def curvatures(p: Polyhedron) -> np.ndarray:
    """Angle defect 2*pi - sum of incident face angles, per vertex."""
    out = np.full(p.n_vertices, 2.0 * math.pi)
    for fi, f in enumerate(p.faces):
        for v in f:
            out[v] -= p.face_angle(fi, v)
    return out


@dataclass(frozen=True)
class GeodesicOrder:
    """Vertices sorted by geodesic distance from the north direction."""

    gamma: np.ndarray
    order: list  # vertex indices, farthest from the pole first


def geodesic_order(p: Polyhedron, pole=(0.0, 0.0, 1.0)) -> GeodesicOrder:
    pole = np.asarray(pole, dtype=float)
    pole = pole / np.linalg.norm(pole)
    u = p.vertices / np.linalg.norm(p.vertices, axis=1, keepdims=True)
    gamma = np.arccos(np.clip(u @ pole, -1.0, 1.0))
    order = sorted(range(p.n_vertices), key=lambda i: (-gamma[i], i))
    return GeodesicOrder(gamma=gamma, order=order)


def bottommost_triangle(p: Polyhedron) -> int:
    """Face with the most southward outward normal (ties by index)."""
    best = None
    for fi in range(p.n_faces):
        key = (-(-p.face_normal(fi)[2]), fi)
        if best is None or key < best:
            best = key
    return best[1]


def most_equilateral_triangle(p: Polyhedron) -> int:
    """Face minimizing the longest/shortest edge ratio (ties by index)."""
    best = None
    for fi, f in enumerate(p.faces):
        a, b, c = p.vertices[list(f)]
        lens = sorted(
            [np.linalg.norm(a - b), np.linalg.norm(b - c), np.linalg.norm(c - a)]
        )
        key = (lens[2] / lens[0], fi)
        if best is None or key < best:
            best = key
    return best[1]


# ---------------------------------------------------------------------------
# obtuse splitting
# ---------------------------------------------------------------------------


def split_obtuse(p: Polyhedron, tol: Tolerance = DEFAULT_TOL) -> Polyhedron:
    """Split obtuse triangles that sit beside a non-obtuse neighbor.

    One pass over the original faces, no recursion: for each still-alive
    obtuse face whose longest edge (opposite the obtuse corner) is shared
    with a currently non-obtuse face, insert the foot of the altitude on
    that edge and split both incident faces in two. Faces created by
    earlier splits may serve as the non-obtuse partner but are not
    themselves examined. Inserted vertices are flat (zero curvature) and
    lie strictly inside the circumsphere.
    """
    verts = [v.copy() for v in p.vertices]
    faces = {fi: list(f) for fi, f in enumerate(p.faces)}
    edge_faces = {}

    def register(fi):
        f = faces[fi]
        for k in range(3):
            edge_faces.setdefault(frozenset((f[k], f[(k + 1) % 3])), set()).add(fi)

    def unregister(fi):
        f = faces[fi]
        for k in range(3):
            edge_faces[frozenset((f[k], f[(k + 1) % 3]))].discard(fi)

    for fi in faces:
        register(fi)

    def obtuse_corner(f):
        tri = [verts[i] for i in f]
        for k in range(3):
            ang = angle_between(tri[(k + 1) % 3] - tri[k], tri[(k + 2) % 3] - tri[k])
            if ang > math.pi / 2.0 + tol.eps_angle:
                return k
        return None

    next_id = len(faces)
    for fi in range(p.n_faces):
        if fi not in faces:
            continue
        f = faces[fi]
        k = obtuse_corner(f)
        if k is None:
            continue
        u, v = f[(k + 1) % 3], f[(k + 2) % 3]
        others = [g for g in edge_faces[frozenset((u, v))] if g != fi]
        if not others:
            continue
        gi = others[0]
        if obtuse_corner(faces[gi]) is not None:
            continue
        # altitude foot from the obtuse corner onto edge (u, v)
        a = verts[f[k]]
        pu, pv = verts[u], verts[v]
        t = float(np.dot(a - pu, pv - pu) / np.dot(pv - pu, pv - pu))
        t = min(1.0 - 1e-9, max(1e-9, t))
        w = len(verts)
        verts.append(pu + t * (pv - pu))
        g = faces[gi]
        b = next(g[i] for i in range(3) if g[i] not in (u, v))
        # f traverses u before v, g traverses v before u; keep windings
        unregister(fi)
        unregister(gi)
        del faces[fi]
        del faces[gi]
        for newf in ([f[k], u, w], [f[k], w, v], [b, w, u], [b, v, w]):
            faces[next_id] = newf
            register(next_id)
            next_id += 1

    out = Polyhedron(vertices=np.asarray(verts), faces=[tuple(f) for f in faces.values()])
    out.validate()
    return out


# ---------------------------------------------------------------------------
# OBJ I/O
# ---------------------------------------------------------------------------


def save_obj(p: Polyhedron, path):
    with open(path, "w", encoding="ascii") as fh:
        for v in p.vertices:
            fh.write(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
        for f in p.faces:
            fh.write(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}\n")


def load_obj(path) -> Polyhedron:
    verts = []
    faces = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                idx = [int(tok.split("/")[0]) - 1 for tok in parts[1:]]
                if len(idx) != 3:
                    raise DegenerateInput("only triangular faces are supported")
                faces.append(tuple(idx))
    if not verts or not faces:
        raise DegenerateInput("OBJ file holds no mesh")
    return Polyhedron(vertices=np.asarray(verts), faces=faces)
