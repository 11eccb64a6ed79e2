"""Planar development of cut paths: left, medial, and right chains.

Cutting a convex polyhedron along a path and flattening the two sides
produces two planar images of the cut. With lambda_i / rho_i the face
angle left / right of the path at interior vertex v_i and omega_i its
angle defect (lambda_i + omega_i + rho_i = 2*pi), the developed left
chain turns by pi - lambda_i at each vertex, the right chain by
rho_i - pi, and the medial chain splits the defect evenly: it turns by
(rho_i - lambda_i) / 2, half a defect clockwise of the left image. At
the source the gap omega_0 opens symmetrically, so the left and right
first edges sit +-omega_0/2 off the medial first edge, which lies on
the +x axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotAPath
from .geom import DEFAULT_TOL, Tolerance, segments_cross_transversally
from .rmpath import PlanarPath, is_rm, is_rm_wrt


@dataclass
class CutPath3:
    """Angle data of a mesh path from a leaf vertex to the cap boundary.

    ``lam``, ``rho``, ``om`` hold the left/right/defect angles of the
    interior vertices v_1 ... v_{k-1}; ``omega0`` is the defect at the
    source v_0. ``total_curvature`` is the sum of all defects along the
    path including the source.
    """

    lengths: np.ndarray
    lam: np.ndarray
    rho: np.ndarray
    om: np.ndarray
    omega0: float
    path: list = None

    def __post_init__(self):
        self.lengths = np.asarray(self.lengths, dtype=float)
        self.lam = np.asarray(self.lam, dtype=float)
        self.rho = np.asarray(self.rho, dtype=float)
        self.om = np.asarray(self.om, dtype=float)
        k = len(self.lengths)
        if not (len(self.lam) == len(self.rho) == len(self.om) == k - 1):
            raise ValueError("need one angle triple per interior vertex")

    @property
    def k(self) -> int:
        return len(self.lengths)

    @property
    def total_curvature(self) -> float:
        return float(self.omega0 + self.om.sum())

    def angle_residual(self) -> float:
        """Largest deviation from lambda + omega + rho = 2*pi."""
        if self.k < 2:
            return 0.0
        return float(np.abs(self.lam + self.om + self.rho - 2.0 * math.pi).max())


@dataclass
class CutChains:
    """The three planar developments of one cut path."""

    left: PlanarPath
    medial: PlanarPath
    right: PlanarPath
    tau_medial: float  # largest |direction angle| of medial edges vs +x
    total_curvature: float
    gap_last: float  # direction angle of last left edge minus last right edge

    def chains(self):
        return {"L": self.left, "M": self.medial, "R": self.right}


def _chain_points(lengths, dirs):
    steps = lengths[:, None] * np.stack([np.cos(dirs), np.sin(dirs)], axis=1)
    return np.vstack([np.zeros(2), np.cumsum(steps, axis=0)])


def develop_cut_chains(cp: CutPath3) -> CutChains:
    """Build the left, medial, and right chains of a cut path."""
    k = cp.k
    turns_m = 0.5 * (cp.rho - cp.lam)
    turns_l = math.pi - cp.lam
    turns_r = cp.rho - math.pi
    dirs_m = np.concatenate([[0.0], np.cumsum(turns_m)])
    dirs_l = cp.omega0 / 2.0 + np.concatenate([[0.0], np.cumsum(turns_l)])
    dirs_r = -cp.omega0 / 2.0 + np.concatenate([[0.0], np.cumsum(turns_r)])
    left = PlanarPath(_chain_points(cp.lengths, dirs_l))
    medial = PlanarPath(_chain_points(cp.lengths, dirs_m))
    right = PlanarPath(_chain_points(cp.lengths, dirs_r))
    return CutChains(
        left=left,
        medial=medial,
        right=right,
        tau_medial=float(np.abs(dirs_m).max()),
        total_curvature=cp.total_curvature,
        gap_last=float(dirs_l[-1] - dirs_r[-1]),
    )


def medial_path_is_rm(cp: CutPath3, tol: Tolerance = DEFAULT_TOL):
    """(is_rm(M), worst turn angle of M measured from its source)."""
    ch = develop_cut_chains(cp)
    pts = ch.medial.points
    worst = 0.0
    for i in range(1, len(pts) - 1):
        u = pts[i] - pts[0]
        w = pts[i + 1] - pts[i]
        c = float(np.dot(u, w) / (np.linalg.norm(u) * np.linalg.norm(w)))
        worst = max(worst, math.acos(min(1.0, max(-1.0, c))))
    return is_rm(ch.medial, tol), worst


def medial_rm_wrt_source(cp: CutPath3, tol: Tolerance = DEFAULT_TOL):
    """(rm w.r.t. the source only, worst turn from the source).

    Forest growth verifies suffix paths when they are inserted, so a new
    connection only needs the source-vertex check; the worst turn doubles
    as the greedy quality score.
    """
    ch = develop_cut_chains(cp)
    pts = ch.medial.points
    worst = 0.0
    for i in range(1, len(pts) - 1):
        u = pts[i] - pts[0]
        w = pts[i + 1] - pts[i]
        c = float(np.dot(u, w) / (np.linalg.norm(u) * np.linalg.norm(w)))
        worst = max(worst, math.acos(min(1.0, max(-1.0, c))))
    return is_rm_wrt(pts, 0, tol), worst


def lmr_cross_check(ch: CutChains, tol: Tolerance = DEFAULT_TOL):
    """Pairwise transversal-crossing report among the three chains.

    All three chains share the source vertex; contact there (or any pure
    endpoint/tangential contact) does not count as a crossing.
    """

    def crossing(a: PlanarPath, b: PlanarPath) -> bool:
        pa, pb = a.points, b.points
        for i in range(len(pa) - 1):
            for j in range(len(pb) - 1):
                if segments_cross_transversally(pa[i], pa[i + 1], pb[j], pb[j + 1], tol):
                    return True
        return False

    return {
        "LM": crossing(ch.left, ch.medial),
        "LR": crossing(ch.left, ch.right),
        "MR": crossing(ch.medial, ch.right),
    }


# ---------------------------------------------------------------------------
# extracting angles from a mesh path
# ---------------------------------------------------------------------------


def path_angles(p, q, tree_context=None, tol: Tolerance = DEFAULT_TOL) -> CutPath3:
    """Angle data for a mesh path from leaf ``q[0]`` to root ``q[-1]``.

    The left angle at an interior vertex sums the face angles swept
    counterclockwise (seen from outside) from the outgoing edge to the
    incoming edge; attached cut subtrees therefore contribute their whole
    fan to whichever side of the through-path they hang on. The optional
    ``tree_context`` is accepted for interface parity but the split is
    fully determined by the mesh fan.
    """
    del tree_context
    if len(q) < 2:
        raise NotAPath("path needs at least one edge")
    for i in range(len(q) - 1):
        if not p.has_edge(q[i], q[i + 1]):
            raise NotAPath(f"({q[i]}, {q[i + 1]}) is not a mesh edge")
    from .polyhedron import curvatures  # local import to avoid a cycle

    pts = p.vertices
    lengths = np.array([np.linalg.norm(pts[q[i + 1]] - pts[q[i]]) for i in range(len(q) - 1)])
    om_all = curvatures(p)
    lam = []
    rho = []
    om = []
    for i in range(1, len(q) - 1):
        v = q[i]
        fan = p.vertex_fan(v)
        succ = {fan[t]: fan[(t + 1) % len(fan)] for t in range(len(fan))}
        cur = q[i + 1]
        left = 0.0
        guard = 0
        while cur != q[i - 1]:
            nxt = succ[cur]
            left += _fan_angle(p, v, cur, nxt)
            cur = nxt
            guard += 1
            if guard > len(fan):
                raise NotAPath(f"path vertices not adjacent around vertex {v}")
        total = p.total_angle(v)
        lam.append(left)
        rho.append(total - left)
        om.append(om_all[v])
    return CutPath3(
        lengths=lengths,
        lam=np.array(lam),
        rho=np.array(rho),
        om=np.array(om),
        omega0=float(om_all[q[0]]),
        path=list(q),
    )


def _fan_angle(p, v, a, b):
    for fi in p.vertex_faces(v):
        f = p.faces[fi]
        k = f.index(v)
        if f[(k + 1) % 3] == a and f[(k + 2) % 3] == b:
            return p.face_angle(fi, v)
    raise NotAPath(f"no face ({v}, {a}, {b})")


# ---------------------------------------------------------------------------
# synthetic chains for tests and figures
# ---------------------------------------------------------------------------


def chain_from_turns(lengths, medial_turns, defects, omega0: float) -> CutPath3:
    """CutPath3 whose medial path turns by ``medial_turns`` at each vertex.

    Inverts the development relations: lambda_i = pi - omega_i/2 - turn_i
    and rho_i = pi - omega_i/2 + turn_i.
    """
    lengths = np.asarray(lengths, dtype=float)
    turns = np.asarray(medial_turns, dtype=float)
    om = np.asarray(defects, dtype=float)
    lam = math.pi - om / 2.0 - turns
    rho = math.pi - om / 2.0 + turns
    if (lam <= 0).any() or (rho <= 0).any():
        raise ValueError("turns too sharp for positive side angles")
    return CutPath3(lengths=lengths, lam=lam, rho=rho, om=om, omega0=float(omega0))


def spiral_medial_chain(phi: float, span: float, k: int, total_curvature: float) -> CutPath3:
    """Chain whose medial path is a discretized log spiral of pitch phi.

    The defect ``total_curvature`` is spread uniformly over the source and
    the interior vertices.
    """
    from .spiral import LogSpiral, spiral_points

    pts = spiral_points(LogSpiral(phi), 0.0, span, k + 1).points
    steps = np.diff(pts, axis=0)
    lengths = np.linalg.norm(steps, axis=1)
    dirs = np.arctan2(steps[:, 1], steps[:, 0])
    turns = np.diff(np.unwrap(dirs))
    om_each = total_curvature / (k if k > 0 else 1)
    return chain_from_turns(lengths, turns, np.full(k - 1, om_each), om_each)
