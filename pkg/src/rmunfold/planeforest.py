"""Greedy radially monotone spanning forests on triangulated convex domains.

Interior vertices are processed farthest-from-center first and each one is
joined to the growing forest by the triangulation edge whose full path to
the boundary stays radially monotone with the smallest worst turn angle.
Hourglass cones (double 45-degree cones baselined tangent to concentric
circles around the center) are exposed for diagnostics; the greedy step
itself only checks radial monotonicity.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, NoRmConnection, NotAnEdge, TooLarge
from .geom import DEFAULT_TOL, Tolerance, angle_between, unit
from .rmpath import is_rm_wrt


# ---------------------------------------------------------------------------
# minimum enclosing circle (randomized incremental)
# ---------------------------------------------------------------------------


def _circle_two(a, b):
    c = 0.5 * (a + b)
    return c, float(np.linalg.norm(a - c))


def _circumcircle(a, b, c):
    d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    if abs(d) < 1e-14 * max(np.linalg.norm(b - a), np.linalg.norm(c - a), 1.0) ** 2:
        return None
    ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])) / d
    uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])) / d
    ctr = np.array([ux, uy])
    return ctr, float(np.linalg.norm(a - ctr))


def min_enclosing_circle(points, tol: Tolerance = DEFAULT_TOL):
    """Smallest circle containing all points; center and radius.

    Randomized incremental construction (expected linear time); the order
    is shuffled with a fixed seed so results are deterministic.
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    if not pts:
        raise DegenerateInput("need at least one point")
    order = list(range(len(pts)))
    random.Random(0x5EED).shuffle(order)
    eps = tol.eps_len

    def inside(c, r, p):
        return np.linalg.norm(p - c) <= r + eps

    c, r = pts[order[0]], 0.0
    for qi in range(1, len(order)):
        q = pts[order[qi]]
        if inside(c, r, q):
            continue
        c, r = q, 0.0
        for pi in range(qi):
            p = pts[order[pi]]
            if inside(c, r, p):
                continue
            c, r = _circle_two(p, q)
            for oi in range(pi):
                o = pts[order[oi]]
                if inside(c, r, o):
                    continue
                cc = _circumcircle(p, q, o)
                if cc is not None:
                    c, r = cc
    return c, r


# ---------------------------------------------------------------------------
# domain
# ---------------------------------------------------------------------------


@dataclass
class ConvexDomain:
    """Triangulated convex planar region with a distinguished circle center."""

    vertices: np.ndarray
    triangles: list
    boundary: list
    center: np.ndarray = None
    radius: float = 0.0
    _edges: set = field(default_factory=set, repr=False)
    _neighbors: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.triangles = [tuple(int(i) for i in t) for t in self.triangles]
        self.boundary = [int(i) for i in self.boundary]
        if self.center is None:
            self.center, self.radius = min_enclosing_circle(self.vertices)
        self.center = np.asarray(self.center, dtype=float)
        self._edges = set()
        self._neighbors = {i: set() for i in range(len(self.vertices))}
        for t in self.triangles:
            for k in range(3):
                u, v = t[k], t[(k + 1) % 3]
                self._edges.add(frozenset((u, v)))
                self._neighbors[u].add(v)
                self._neighbors[v].add(u)

    @property
    def boundary_set(self):
        return set(self.boundary)

    @property
    def interior(self):
        bset = self.boundary_set
        return [i for i in range(len(self.vertices)) if i not in bset]

    def edges(self):
        return self._edges

    def has_edge(self, u, v) -> bool:
        return frozenset((u, v)) in self._edges

    def neighbors(self, v):
        return self._neighbors[v]

    def validate(self, tol: Tolerance = DEFAULT_TOL):
        """Structural checks: convex boundary, manifold triangle tiling."""
        b = self.vertices[self.boundary]
        m = len(b)
        if m < 3:
            raise DegenerateInput("boundary needs at least three vertices")
        sign = 0.0
        for i in range(m):
            u = b[(i + 1) % m] - b[i]
            w = b[(i + 2) % m] - b[(i + 1) % m]
            cr = u[0] * w[1] - u[1] * w[0]
            if abs(cr) > tol.eps_len:
                if sign == 0.0:
                    sign = math.copysign(1.0, cr)
                elif math.copysign(1.0, cr) != sign:
                    raise DegenerateInput("boundary polygon is not convex")
        edge_use = {}
        for t in self.triangles:
            for k in range(3):
                e = frozenset((t[k], t[(k + 1) % 3]))
                edge_use[e] = edge_use.get(e, 0) + 1
        boundary_edges = {
            frozenset((self.boundary[i], self.boundary[(i + 1) % m])) for i in range(m)
        }
        for e, cnt in edge_use.items():
            want = 1 if e in boundary_edges else 2
            if cnt != want:
                raise DegenerateInput(f"edge {set(e)} used {cnt} times, expected {want}")
        used = set()
        for t in self.triangles:
            used.update(t)
        if used != set(range(len(self.vertices))):
            raise DegenerateInput("dangling vertices outside the triangulation")
        return True

    def max_triangle_angle(self) -> float:
        worst = 0.0
        for t in self.triangles:
            p = self.vertices[list(t)]
            for k in range(3):
                ang = angle_between(p[(k + 1) % 3] - p[k], p[(k + 2) % 3] - p[k])
                worst = max(worst, ang)
        return worst

    def is_nonobtuse(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.max_triangle_angle() <= math.pi / 2.0 + tol.eps_angle


# ---------------------------------------------------------------------------
# hourglass cones
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hourglass:
    """Double 45-degree cone at a vertex, baselined tangent to the circle
    through the vertex centered on the domain center."""

    apex: np.ndarray
    out_dir: np.ndarray  # outward radial (away from center)

    @property
    def in_dir(self):
        return -self.out_dir

    def in_cone_contains(self, d, tol: Tolerance = DEFAULT_TOL) -> bool:
        return angle_between(d, self.in_dir) <= math.pi / 4.0 + tol.eps_angle

    def out_cone_contains(self, d, tol: Tolerance = DEFAULT_TOL) -> bool:
        return angle_between(d, self.out_dir) <= math.pi / 4.0 + tol.eps_angle


def hourglass_at(center, p) -> Hourglass:
    p = np.asarray(p, dtype=float)
    return Hourglass(apex=p, out_dir=unit(p - np.asarray(center, dtype=float)))


def is_round(c: ConvexDomain, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether every boundary wedge contains the local inward 45-degree cone."""
    m = len(c.boundary)
    for i in range(m):
        v = c.vertices[c.boundary[i]]
        prv = c.vertices[c.boundary[(i - 1) % m]]
        nxt = c.vertices[c.boundary[(i + 1) % m]]
        hg = hourglass_at(c.center, v)
        # wedge of the domain at v spans from one boundary edge to the other
        e1 = unit(prv - v)
        e2 = unit(nxt - v)
        wedge = angle_between(e1, e2)
        bis = e1 + e2
        if np.linalg.norm(bis) < tol.eps_len:  # straight boundary, wedge = pi
            bis = -hg.out_dir
            wedge = math.pi
        bis = unit(bis)
        for sgn in (1.0, -1.0):
            ray = _rotate(hg.in_dir, sgn * math.pi / 4.0)
            if angle_between(ray, bis) > wedge / 2.0 + tol.eps_angle:
                return False
    return True


def _rotate(v, ang):
    ca, sa = math.cos(ang), math.sin(ang)
    return np.array([ca * v[0] - sa * v[1], sa * v[0] + ca * v[1]])


def is_hourglass_path(c: ConvexDomain, q, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether a boundary-rooted vertex path walks inside the hourglasses.

    ``q`` lists vertex indices from the boundary inward (u_0 on the
    boundary). Each edge must leave u_i within its inward cone and arrive
    at u_{i+1} within its outward cone.
    """
    if q[0] not in c.boundary_set:
        raise DegenerateInput("hourglass paths start on the boundary")
    for i in range(len(q) - 1):
        u, v = q[i], q[i + 1]
        if not c.has_edge(u, v):
            raise NotAnEdge(f"({u}, {v}) is not a triangulation edge")
        d = c.vertices[v] - c.vertices[u]
        if not hourglass_at(c.center, c.vertices[u]).in_cone_contains(d, tol):
            return False
        if not hourglass_at(c.center, c.vertices[v]).out_cone_contains(-d, tol):
            return False
    return True


# ---------------------------------------------------------------------------
# turn quality and the greedy forest
# ---------------------------------------------------------------------------


def path_turn_quality(c: ConvexDomain, q, tol: Tolerance = DEFAULT_TOL) -> float:
    """Worst turn angle of a path from an interior vertex to the boundary.

    For paths of two or more edges this is the largest angle between the
    vector from the source v_0 to v_i and the outgoing edge at v_i, which
    exceeds a right angle exactly when the path stops being radially
    monotone w.r.t. v_0. A single boundary edge is scored by its angle to
    the tangent of the concentric circle through its boundary endpoint.
    """
    pts = c.vertices[list(q)]
    return turn_quality_points(pts, c.center)


def turn_quality_points(pts, center) -> float:
    pts = np.asarray(pts, dtype=float)
    if len(pts) < 2:
        raise DegenerateInput("path needs at least one edge")
    if len(pts) == 2:
        e = pts[1] - pts[0]
        rad = pts[1] - np.asarray(center, dtype=float)
        if np.linalg.norm(rad) == 0.0:
            return math.pi / 2.0
        tang = np.array([-rad[1], rad[0]])
        ang = angle_between(e, tang)
        return min(ang, math.pi - ang)
    worst = 0.0
    for i in range(1, len(pts) - 1):
        worst = max(worst, angle_between(pts[i] - pts[0], pts[i + 1] - pts[i]))
    return worst


@dataclass
class CutForest:
    """Boundary-rooted forest over the interior vertices of a domain."""

    parent: dict
    roots: dict  # interior vertex -> boundary root of its tree
    taus: dict  # interior vertex -> worst turn angle of its chosen path
    edges: set = field(default_factory=set)

    def __post_init__(self):
        if not self.edges:
            self.edges = {frozenset((v, u)) for v, u in self.parent.items()}

    def path_to_root(self, v, boundary_set):
        out = [v]
        while out[-1] not in boundary_set:
            out.append(self.parent[out[-1]])
        return out

    @property
    def worst_tau(self) -> float:
        return max(self.taus.values()) if self.taus else 0.0


def _candidate_path(c, forest, v0, v1):
    if v1 in c.boundary_set:
        return [v0, v1]
    return [v0] + forest.path_to_root(v1, c.boundary_set)


def grow_spanning_forest(c: ConvexDomain, tol: Tolerance = DEFAULT_TOL) -> CutForest:
    """Greedy boundary-rooted rm spanning forest of the interior vertices.

    Interior vertices are processed by decreasing distance from the circle
    center (nearest the boundary first); each is attached through the
    triangulation edge minimizing the worst turn angle among connections
    whose whole path to the boundary is radially monotone w.r.t. the new
    vertex. Raises NoRmConnection if a vertex has no such edge.
    """
    x = c.center
    dist = np.linalg.norm(c.vertices - x, axis=1)
    order = sorted(c.interior, key=lambda i: (-dist[i], i))
    bset = c.boundary_set
    forest = CutForest(parent={}, roots={}, taus={})
    connected = set()
    for v0 in order:
        best = None
        best_bad = None
        for v1 in sorted(c.neighbors(v0)):
            if v1 not in bset and v1 not in connected:
                continue
            path = _candidate_path(c, forest, v0, v1)
            pts = c.vertices[path]
            tau = turn_quality_points(pts, x)
            key = (tau, dist[v1], v1)
            if is_rm_wrt(pts, 0, tol):
                if best is None or key < best[0]:
                    best = (key, v1, path, tau)
            else:
                if best_bad is None or key < best_bad[0]:
                    best_bad = (key, v1, path, tau)
        if best is None:
            raise NoRmConnection(v0, None if best_bad is None else best_bad[3])
        _, v1, path, tau = best
        forest.parent[v0] = v1
        forest.roots[v0] = path[-1]
        forest.taus[v0] = tau
        forest.edges.add(frozenset((v0, v1)))
        connected.add(v0)
    return forest


def forest_leaves(forest: CutForest):
    parents = set(forest.parent.values())
    return [v for v in forest.parent if v not in parents]


def cut_dual_is_tree(c: ConvexDomain, cut_edges) -> bool:
    """Whether cutting the given edges leaves the triangle-dual connected.

    With the right edge count this makes the dual a tree, so the domain
    stays one piece after cutting.
    """
    edge_faces = {}
    for fi, t in enumerate(c.triangles):
        for k in range(3):
            e = frozenset((t[k], t[(k + 1) % 3]))
            edge_faces.setdefault(e, []).append(fi)
    adj = {fi: [] for fi in range(len(c.triangles))}
    n_dual = 0
    for e, fs in edge_faces.items():
        if len(fs) == 2 and e not in cut_edges:
            adj[fs[0]].append(fs[1])
            adj[fs[1]].append(fs[0])
            n_dual += 1
    if len(c.triangles) == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in seen:
                seen.add(g)
                stack.append(g)
    return len(seen) == len(c.triangles) and n_dual == len(c.triangles) - 1


# ---------------------------------------------------------------------------
# exhaustive oracle
# ---------------------------------------------------------------------------


@dataclass
class PlaneGraph:
    """Plain straight-line plane graph (not necessarily triangulated)."""

    vertices: np.ndarray
    edges: set
    boundary: list

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.edges = {frozenset(e) for e in self.edges}
        self.boundary = [int(i) for i in self.boundary]
        self._neighbors = {i: set() for i in range(len(self.vertices))}
        for e in self.edges:
            u, v = tuple(e)
            self._neighbors[u].add(v)
            self._neighbors[v].add(u)

    @property
    def boundary_set(self):
        return set(self.boundary)

    @property
    def interior(self):
        bset = self.boundary_set
        return [i for i in range(len(self.vertices)) if i not in bset]

    def neighbors(self, v):
        return self._neighbors[v]


def _as_graph(c):
    if isinstance(c, PlaneGraph):
        return c
    return PlaneGraph(vertices=c.vertices, edges=set(c.edges()), boundary=list(c.boundary))


def rm_paths_to_boundary(g, v, tol: Tolerance = DEFAULT_TOL, limit: int = None):
    """All radially monotone edge paths from v to the boundary.

    Depth-first enumeration pruning every prefix that already violates
    monotonicity w.r.t. any of its vertices.
    """
    g = _as_graph(g)
    bset = g.boundary_set
    pts = g.vertices
    found = []

    def extend_ok(path, nxt):
        p_nxt = pts[nxt]
        p_last = pts[path[-1]]
        w = p_nxt - p_last
        for vi in path:
            u = pts[vi] - p_last
            nu = np.linalg.norm(u)
            if nu == 0.0:
                continue
            if np.dot(u, w) > nu * np.linalg.norm(w) * math.sin(tol.eps_angle):
                return False
        return True

    def dfs(path):
        if limit is not None and len(found) >= limit:
            return
        last = path[-1]
        for nxt in sorted(g.neighbors(last)):
            if nxt in path:
                continue
            if not extend_ok(path, nxt):
                continue
            if nxt in bset:
                found.append(path + [nxt])
                if limit is not None and len(found) >= limit:
                    return
            else:
                dfs(path + [nxt])

    if v in bset:
        raise DegenerateInput("source must be an interior vertex")
    dfs([v])
    return found


def oracle_rm_forest_exists(c, max_interior: int = 18, tol: Tolerance = DEFAULT_TOL):
    """Exhaustive search for a boundary-rooted rm spanning forest.

    Returns (True, forest_parent_map) or (False, None). Accepts either a
    ConvexDomain or a PlaneGraph. Only feasible for small instances;
    raises TooLarge beyond ``max_interior`` interior vertices.
    """
    g = _as_graph(c)
    interior = g.interior
    if len(interior) > max_interior:
        raise TooLarge(f"{len(interior)} interior vertices exceed bound {max_interior}")
    bset = g.boundary_set
    pts = g.vertices

    # quick refutation: some vertex with no rm escape at all
    for v in interior:
        if not rm_paths_to_boundary(g, v, tol, limit=1):
            return False, None

    interior_set = set(interior)

    def path_of(parent, v):
        out = [v]
        while out[-1] in interior_set:
            out.append(parent[out[-1]])
        return out

    def rm_wrt_source(path):
        arr = pts[path]
        return is_rm_wrt(arr, 0, tol)

    seen_states = set()

    def search(parent, connected):
        if len(connected) == len(interior):
            return dict(parent)
        key = frozenset(parent.items())
        if key in seen_states:
            return None
        seen_states.add(key)
        for v in interior:
            if v in connected:
                continue
            for u in sorted(g.neighbors(v)):
                if u not in bset and u not in connected:
                    continue
                parent[v] = u
                if rm_wrt_source(path_of(parent, v)):
                    connected.add(v)
                    res = search(parent, connected)
                    if res is not None:
                        return res
                    connected.discard(v)
                del parent[v]
        return None

    res = search({}, set())
    if res is None:
        return False, None
    return True, res
