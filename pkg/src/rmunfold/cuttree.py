"""Growing a medially radially monotone cut tree on a spherical polyhedron.

The whole polyhedron is treated as a cap whose boundary is the degenerate
quad (a, b, c, b) around the bottommost triangle. A forest is grown from
{a, b, c} upward in latitude order; each new vertex joins through the
mesh edge whose developed medial path stays radially monotone with the
smallest worst turn angle. Closing the forest with edges ab and bc yields
a spanning cut tree.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CyclicCut, NoRmConnection, NotSpanning
from .geom import DEFAULT_TOL, Tolerance, angle_between
from .lmr import develop_cut_chains, medial_path_is_rm, medial_rm_wrt_source, path_angles
from .polyhedron import (
    Polyhedron,
    bottommost_triangle,
    geodesic_order,
    most_equilateral_triangle,
    split_obtuse,
)


@dataclass
class CutTree:
    """Spanning set of cut edges, usually a closed forest plus ab and bc."""

    edges: set
    parent: dict = field(default_factory=dict)
    boundary: tuple = None  # (a, b, c) of the boundary quad, if any
    bottom_face: int = None
    non_rm_vertices: list = field(default_factory=list)
    taus: dict = field(default_factory=dict)

    def __post_init__(self):
        self.edges = {frozenset(e) for e in self.edges}

    @property
    def is_fully_rm(self) -> bool:
        return not self.non_rm_vertices

    def path_to_boundary(self, v):
        out = [v]
        while out[-1] in self.parent:
            out.append(self.parent[out[-1]])
        return out

    def leaves(self):
        parents = set(self.parent.values())
        return [v for v in self.parent if v not in parents]


@dataclass
class CutTreeResult:
    polyhedron: Polyhedron
    tree: CutTree
    success: bool
    stuck_vertices: list
    was_split: bool = False


def _latitude_tangent_angle(p: Polyhedron, v0: int, root: int) -> float:
    """Angle between edge (v0, root) and the latitude-circle tangent at root."""
    e = p.vertices[root] - p.vertices[v0]
    r = p.vertices[root]
    t = np.array([-r[1], r[0], 0.0])
    if np.linalg.norm(t) < 1e-12:
        return math.pi / 2.0  # polar root: every edge is meridional
    ang = angle_between(e, t)
    return min(ang, math.pi - ang)


def grow_cut_tree(
    p: Polyhedron,
    allow_non_rm: bool = False,
    split_obtuse_retry: bool = False,
    equilateral_base: bool = False,
    best_first: bool = False,
    tol: Tolerance = DEFAULT_TOL,
) -> CutTreeResult:
    """Grow a (usually) radially monotone spanning cut tree.

    Vertices join in order of decreasing geodesic distance from the north
    direction; on exhaustion the default is to raise NoRmConnection. With
    ``allow_non_rm`` the best non-monotone edge is taken and the vertex
    recorded; with ``split_obtuse_retry`` one retry is attempted on the
    obtuse-split mesh. ``equilateral_base`` and ``best_first`` enable the
    optional heuristics (non-default base triangle and global greedy
    growth order).
    """
    u = np.linalg.norm(p.vertices, axis=1)
    if np.abs(u / u.mean() - 1.0).max() > 1e-6:
        warnings.warn(
            "vertices are not on a common sphere; the growth heuristic is "
            "tuned for spherical polyhedra",
            stacklevel=2,
        )
    try:
        return _grow(p, allow_non_rm, equilateral_base, best_first, tol)
    except NoRmConnection:
        if not split_obtuse_retry:
            raise
        q = split_obtuse(p, tol)
        res = _grow(q, allow_non_rm, equilateral_base, best_first, tol)
        return CutTreeResult(
            polyhedron=q,
            tree=res.tree,
            success=res.success,
            stuck_vertices=res.stuck_vertices,
            was_split=True,
        )


def _grow(p, allow_non_rm, equilateral_base, best_first, tol) -> CutTreeResult:
    bottom = most_equilateral_triangle(p) if equilateral_base else bottommost_triangle(p)
    a, b, c = p.faces[bottom]
    go = geodesic_order(p)
    gamma = go.gamma
    boundary = (a, b, c)
    connected = set(boundary)
    parent = {}
    taus = {}
    stuck = []

    def candidate(v0, v1):
        """(is_rm, tau) for joining v0 through connected vertex v1."""
        if v1 in boundary:
            path = [v0, v1]
        else:
            path = [v0] + _chain(parent, v1, boundary)
        if len(path) == 2:
            return True, _latitude_tangent_angle(p, v0, path[1]), path
        cp = path_angles(p, path, tol=tol)
        ok, tau = medial_rm_wrt_source(cp, tol)
        return ok, tau, path

    def scan(v0):
        best = None
        best_bad = None
        for v1 in sorted(p.neighbors(v0)):
            if v1 not in connected:
                continue
            if v1 not in boundary and gamma[v1] < gamma[v0] - 1e-12:
                continue  # growth stays latitude-monotone
            ok, tau, _path = candidate(v0, v1)
            key = (tau, gamma[v1], v1)
            if ok:
                if best is None or key < best[0]:
                    best = (key, v1, tau)
            else:
                if best_bad is None or key < best_bad[0]:
                    best_bad = (key, v1, tau)
        return best, best_bad

    def attach(v0, v1, tau, rm_ok):
        parent[v0] = v1
        taus[v0] = tau
        connected.add(v0)
        if not rm_ok:
            stuck.append(v0)

    interior = [v for v in go.order if v not in boundary]
    if best_first:
        remaining = set(interior)
        while remaining:
            overall = None
            overall_bad = None
            for v0 in sorted(remaining):
                for v1 in sorted(p.neighbors(v0)):
                    if v1 not in connected:
                        continue
                    ok, tau, _path = candidate(v0, v1)
                    key = (tau, gamma[v1], v0, v1)
                    if ok:
                        if overall is None or key < overall[0]:
                            overall = (key, v0, v1, tau)
                    else:
                        if overall_bad is None or key < overall_bad[0]:
                            overall_bad = (key, v0, v1, tau)
            if overall is not None:
                _, v0, v1, tau = overall
                attach(v0, v1, tau, True)
            elif overall_bad is not None and allow_non_rm:
                _, v0, v1, tau = overall_bad
                attach(v0, v1, tau, False)
            elif overall_bad is not None:
                raise NoRmConnection(overall_bad[1], overall_bad[3])
            else:
                raise NoRmConnection(sorted(remaining)[0], None)
            remaining.discard(v0)
    else:
        for v0 in interior:
            best, best_bad = scan(v0)
            if best is not None:
                _, v1, tau = best
                attach(v0, v1, tau, True)
            elif allow_non_rm and best_bad is not None:
                _, v1, tau = best_bad
                attach(v0, v1, tau, False)
            else:
                raise NoRmConnection(v0, None if best_bad is None else best_bad[2])

    edges = {frozenset((v, u)) for v, u in parent.items()}
    edges.add(frozenset((a, b)))
    edges.add(frozenset((b, c)))
    tree = CutTree(
        edges=edges,
        parent=parent,
        boundary=boundary,
        bottom_face=bottom,
        non_rm_vertices=list(stuck),
        taus=taus,
    )
    return CutTreeResult(
        polyhedron=p, tree=tree, success=not stuck, stuck_vertices=list(stuck)
    )


def _chain(parent, v, boundary):
    out = [v]
    while out[-1] not in boundary:
        out.append(parent[out[-1]])
    return out


# ---------------------------------------------------------------------------
# independent verification
# ---------------------------------------------------------------------------


def _tree_structure(p: Polyhedron, t: CutTree):
    adj = {v: [] for v in range(p.n_vertices)}
    for e in t.edges:
        u, v = tuple(e)
        adj[u].append(v)
        adj[v].append(u)
    if len(t.edges) != p.n_vertices - 1:
        if len(t.edges) > p.n_vertices - 1:
            raise CyclicCut(f"{len(t.edges)} edges on {p.n_vertices} vertices")
        raise NotSpanning(f"{len(t.edges)} edges cannot span {p.n_vertices} vertices")
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != p.n_vertices:
        raise NotSpanning("cut edges do not span all vertices")
    return adj


def cut_dual_connected(p: Polyhedron, t: CutTree) -> bool:
    """Whether the face dual stays connected across uncut edges."""
    adj = {fi: [] for fi in range(p.n_faces)}
    for e, fs in p._edge_faces.items():
        if e in t.edges:
            continue
        adj[fs[0]].append(fs[1])
        adj[fs[1]].append(fs[0])
    seen = {0}
    stack = [0]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in seen:
                seen.add(g)
                stack.append(g)
    return len(seen) == p.n_faces


def verify_cut_tree(p: Polyhedron, t: CutTree, tol: Tolerance = DEFAULT_TOL):
    """Re-check a cut tree without trusting its construction.

    Returns a report dict with per-leaf-path medial verdicts, worst turn
    angles, total curvatures, and the non-crossing precondition flags.
    Raises NotSpanning/CyclicCut for structurally invalid trees.
    """
    adj = _tree_structure(p, t)
    if t.parent and t.boundary:
        roots = set(t.boundary)
        parent = dict(t.parent)
    else:
        root = min(v for v in range(p.n_vertices))
        roots = {root}
        parent = {}
        stack = [root]
        seen = {root}
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    parent[y] = x
                    stack.append(y)
    parents = set(parent.values())
    leaves = [v for v in parent if v not in parents]
    per_path = []
    for leaf in sorted(leaves):
        path = [leaf]
        while path[-1] not in roots:
            path.append(parent[path[-1]])
        if len(path) < 2:
            continue
        cp = path_angles(p, path, tol=tol)
        if cp.k == 1:
            rm_ok, tau = True, 0.0
            omega = cp.total_curvature
        else:
            rm_ok, tau = medial_path_is_rm(cp, tol)
            omega = cp.total_curvature
        per_path.append(
            {
                "leaf": leaf,
                "rm": bool(rm_ok),
                "tau": float(tau),
                "omega": float(omega),
                "tau_le_half_pi": bool(tau <= math.pi / 2.0 + tol.eps_angle),
                "omega_le_pi": bool(omega <= math.pi + tol.eps_angle),
            }
        )
    return {
        "n_paths": len(per_path),
        "all_rm": all(r["rm"] for r in per_path),
        "dual_connected": cut_dual_connected(p, t),
        "per_path": per_path,
    }
