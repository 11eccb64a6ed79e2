"""Logarithmic-spiral numerics.

A log spiral r = a * exp(b * theta) with a = 1 and b = 1/tan(phi) keeps a
constant angle phi between the radial vector and the tangent. Spirals with
small enough phi are radially monotone as smooth curves; this module
discretizes them, locates the critical pitch angle by bisection, and
evaluates the two auxiliary angle surfaces used to argue that hourglass
paths are radially monotone and always extendable inward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoBracket
from .geom import DEFAULT_TOL, Tolerance
from .rmpath import PlanarPath


@dataclass(frozen=True)
class LogSpiral:
    """Spiral r(theta) = exp(b * theta), pitch angle phi in (0, pi/2]."""

    phi: float

    def __post_init__(self):
        if not 0.0 < self.phi <= math.pi / 2.0:
            raise ValueError("pitch angle must lie in (0, pi/2]")

    @property
    def b(self) -> float:
        return 1.0 / math.tan(self.phi)

    def point(self, theta):
        theta = np.asarray(theta, dtype=float)
        r = np.exp(self.b * theta)
        return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)

    def tangent(self, theta):
        """Unit tangent in the direction of increasing theta (outward)."""
        theta = np.asarray(theta, dtype=float)
        b = self.b
        t = np.stack(
            [b * np.cos(theta) - np.sin(theta), b * np.sin(theta) + np.cos(theta)],
            axis=-1,
        )
        return t / np.sqrt(1.0 + b * b)


def spiral_points(s: LogSpiral, theta_min: float, theta_max: float, n: int) -> PlanarPath:
    """Uniform-theta polyline along the spiral, source at the inner end."""
    if n < 2:
        raise ValueError("need at least two sample points")
    if not theta_min < theta_max:
        raise ValueError("empty theta range")
    th = np.linspace(theta_min, theta_max, n)
    return PlanarPath(s.point(th))


def _rm_discretized(phi: float, n: int, theta_span: float, eps: float) -> bool:
    """rm check of the discretized spiral.

    The spiral polyline is self-similar: the map v_i -> v_{i+1} is a fixed
    rotation+scaling, so the monotonicity condition for the pair (i, i+d)
    is congruent to the pair (0, d). Checking all offsets d against the
    first vertex is therefore equivalent to the full quadratic scan.
    """
    s = LogSpiral(phi)
    th = np.linspace(0.0, theta_span, n)
    pts = s.point(th)
    u = pts[0] - pts[1:-1]
    w = pts[2:] - pts[1:-1]
    dots = np.einsum("ij,ij->i", u, w)
    lim = np.linalg.norm(u, axis=1) * np.linalg.norm(w, axis=1) * math.sin(eps)
    return bool((dots <= lim).all())


def spiral_is_rm(phi: float, n: int = 10_000, theta_span: float = 3.0 * math.pi,
                 tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the discretized spiral of pitch phi is radially monotone.

    The angle slack is relaxed proportionally to the theta step to absorb
    discretization error; the span must cover the critical three-quarter
    turn of lookback, hence the 3*pi minimum.
    """
    if n < 100:
        raise ValueError("discretization too coarse")
    if theta_span < 3.0 * math.pi - 1e-12:
        raise ValueError("theta span must be at least 3*pi")
    eps = max(tol.eps_angle, theta_span / n)
    return _rm_discretized(phi, n, theta_span, eps)


def critical_rm_pitch(tol_angle: float = math.radians(0.01), n: int = 100_000) -> float:
    """Largest pitch angle (radians) whose spiral stays radially monotone.

    Bisects spiral_is_rm over [45, 90] degrees. Raises NoBracket when the
    predicate does not change sign there, which would indicate a bug.
    """
    if tol_angle <= 0:
        raise ValueError("tolerance must be positive")
    lo, hi = math.radians(45.0), math.radians(90.0) - 1e-12
    if not spiral_is_rm(lo, n) or spiral_is_rm(hi, n):
        raise NoBracket("rm predicate does not change sign on [45, 90] degrees")
    while hi - lo > tol_angle:
        mid = 0.5 * (lo + hi)
        if spiral_is_rm(mid, n):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def critical_lookback_angle(phi: float) -> float:
    """Angle between the tangent at theta and the chord from theta - 3*pi/2.

    At the critical pitch this is exactly a right angle: the tangent is
    orthogonal to the vector from the point three quarter-turns back.
    """
    s = LogSpiral(phi)
    q = s.point(0.0)
    p = s.point(-1.5 * math.pi)
    t = s.tangent(0.0)
    v = q - p
    c = float(np.dot(t, v) / np.linalg.norm(v))
    return math.acos(min(1.0, max(-1.0, c)))


@dataclass(frozen=True)
class ChordAngleSample:
    """One (r, alpha) -> beta evaluation of the chord/radial angle surface."""

    r: float
    alpha: float
    beta: float


def chord_radial_angle(r: float, alpha: float) -> float:
    """Angle beta between an inner-anchored chord and the outward radial.

    Configuration (reconstructed from the hourglass rm argument): the
    circle center x sits at the origin, the innermost path vertex a at
    distance 1. A chord leaves a at angle ``alpha`` (ccw) from the outward
    radial at a; b is the point of that ray at distance ``r`` >= 1 from x.
    beta is the angle at b between the chord direction and the outward
    radial at b. An out-cone edge at b can turn at most 45 degrees past
    the radial, so beta <= 45 degrees keeps the turn within a right angle.
    """
    if r < 1.0:
        raise ValueError("r is a radius beyond the unit circle, so r >= 1")
    a = np.array([1.0, 0.0])
    d = np.array([math.cos(alpha), math.sin(alpha)])
    ad = float(a @ d)
    disc = ad * ad + (r * r - 1.0)
    t = -ad + math.sqrt(max(disc, 0.0))
    if t <= 0.0:
        return float(alpha)  # b == a; continuity limit
    b = a + t * d
    rad = b / np.linalg.norm(b)
    c = float(np.dot(d, rad))
    return math.acos(min(1.0, max(-1.0, c)))


def chord_angle_surface(r_grid, alpha_grid):
    """Evaluate the beta surface over a grid of (r, alpha) pairs."""
    return [
        ChordAngleSample(r=float(r), alpha=float(al), beta=chord_radial_angle(r, al))
        for r in r_grid
        for al in alpha_grid
    ]


def spiral_chord_trajectory(theta_grid):
    """(r, alpha, beta) traced by a 45-degree spiral leaving the anchor.

    The 45-degree spiral is the extreme hourglass path; its trajectory
    through the (r, alpha) plane touches beta = 45 degrees only at r = 1.
    """
    out = []
    a = np.array([1.0, 0.0])
    for th in np.asarray(theta_grid, dtype=float):
        if th <= 0.0:
            out.append(ChordAngleSample(r=1.0, alpha=math.pi / 4.0, beta=math.pi / 4.0))
            continue
        b = math.exp(th) * np.array([math.cos(th), math.sin(th)])
        chord = b - a
        chord = chord / np.linalg.norm(chord)
        r = math.exp(th)
        alpha = math.acos(min(1.0, max(-1.0, float(chord @ a))))
        rad = b / np.linalg.norm(b)
        beta = math.acos(min(1.0, max(-1.0, float(chord @ rad))))
        out.append(ChordAngleSample(r=r, alpha=alpha, beta=beta))
    return out


def cone_corner_clearance(theta_grid):
    """cos of the angle between the inward radial and the cone corner.

    Setup (reconstructed from the no-clipping argument): x at the origin;
    the path's innermost vertex a = (0, 1) on the unit circle; the inward
    45-degree cone at a reaches the horizontal through x, with corner
    c = (1, 0) on the side the extreme spiral departs toward. For a point
    b at polar angle theta on the 45-degree spiral r = exp(pi/2 - theta),
    returns (theta, cos beta) with beta the angle x-b-c. The halfplane
    generated by the spiral edge at b clips the corner only if beta
    exceeds 45 degrees, i.e. cos beta < sqrt(2)/2.
    """
    c = np.array([1.0, 0.0])
    out = []
    for th in np.asarray(theta_grid, dtype=float):
        if th > math.pi / 2.0 + 1e-12:
            raise ValueError("theta beyond the anchor point")
        r = math.exp(math.pi / 2.0 - th)
        b = r * np.array([math.cos(th), math.sin(th)])
        u = -b
        v = c - b
        nv = np.linalg.norm(v)
        if nv == 0.0:
            cb = 1.0
        else:
            cb = float(u @ v / (np.linalg.norm(u) * nv))
        out.append((float(th), cb))
    return out


def spiral_svg(s: LogSpiral, theta_min: float, theta_max: float, n: int = 2000,
               size: int = 640) -> str:
    """Standalone SVG rendering of a spiral arc (deterministic output)."""
    pts = spiral_points(s, theta_min, theta_max, n).points
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
    pad = 0.05 * span
    scale = (size - 2) / (span + 2 * pad)

    def sx(p):
        return (p[0] - lo[0] + pad) * scale + 1

    def sy(p):
        return size - ((p[1] - lo[1] + pad) * scale + 1)

    coords = " ".join(f"{sx(p):.3f},{sy(p):.3f}" for p in pts)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n'
        f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.2" points="{coords}"/>\n'
        "</svg>\n"
    )
