"""Euclidean/projective primitives for profile-plane constructions.

Profile planes are vertical (parallel to the z-direction).  Each plane
carries a 2D chart (r, z) where r is the signed coordinate along the
plane's horizontal direction; planes through the z-axis all share r = 0 on
the axis, so per-apex maps act identically in every axial plane.

Two maps generate a cone row from the previous one, both centered at the
middle apex of a height triple:

* a central scaling taking the lower apex to the upper one, and
* a perspective collineation (planar homology) with the same center whose
  pointwise-fixed axis is the perpendicular bisector of the two outer
  apexes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCollineation, PointAtInfinity, PointOffPlane
from .tolerances import DEFAULT

EZ = np.array([0.0, 0.0, 1.0])


def point(x, y, z) -> np.ndarray:
    return np.array([float(x), float(y), float(z)])


def unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    return v / n


@dataclass(frozen=True)
class PlanePoint:
    """Chart coordinates inside a profile plane: signed horizontal r, height z."""

    r: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.z])


@dataclass(frozen=True)
class ProfilePlane:
    """Vertical plane given by the angle of its horizontal direction and its
    signed distance from the z-axis."""

    theta: float
    offset: float
    anchor: tuple

    @classmethod
    def through(cls, vertex, direction_point, tol=None) -> "ProfilePlane":
        """Plane through ``vertex`` and ``direction_point``, parallel to z.

        The direction point must be at the same height as the vertex.
        """
        tol = (tol or DEFAULT).incidence if not isinstance(tol, float) else tol
        v = np.asarray(vertex, float)
        d = np.asarray(direction_point, float) - v
        if abs(d[2]) > tol * (1.0 + np.linalg.norm(d)):
            raise ValueError("direction point is not horizontal from the vertex")
        e = unit(np.array([d[0], d[1], 0.0]))
        theta = math.atan2(e[1], e[0])
        normal = np.array([-e[1], e[0], 0.0])
        return cls(theta=theta, offset=float(normal @ v), anchor=tuple(v))

    @classmethod
    def axial(cls, theta: float) -> "ProfilePlane":
        return cls(theta=float(theta), offset=0.0, anchor=(0.0, 0.0, 0.0))

    @property
    def direction(self) -> np.ndarray:
        return np.array([math.cos(self.theta), math.sin(self.theta), 0.0])

    @property
    def normal(self) -> np.ndarray:
        return np.array([-math.sin(self.theta), math.cos(self.theta), 0.0])

    def distance(self, p) -> float:
        return abs(float(self.normal @ np.asarray(p, float)) - self.offset)

    def is_axial(self, tol=1e-12) -> bool:
        return abs(self.offset) <= tol


def to_plane_coords(p, plane: ProfilePlane, tol=None) -> PlanePoint:
    """Chart a 3D point lying on ``plane``.

    Raises PointOffPlane when the point misses the plane by more than the
    incidence tolerance (scaled by the point's magnitude).
    """
    tol = (tol or DEFAULT).incidence
    p = np.asarray(p, float)
    if plane.distance(p) > tol * (1.0 + np.linalg.norm(p)):
        raise PointOffPlane(
            f"point {p.tolist()} is {plane.distance(p):.3e} away from the plane"
        )
    return PlanePoint(r=float(plane.direction @ p), z=float(p[2]))


def from_plane_coords(pp: PlanePoint, plane: ProfilePlane) -> np.ndarray:
    return plane.offset * plane.normal + pp.r * plane.direction + pp.z * EZ


@dataclass(frozen=True)
class ApexTriple:
    """Three consecutive apex heights with the sign assigned to the middle one.

    sign = +1 selects the central scaling, sign = -1 the homology.
    """

    z_prev: float
    z_center: float
    z_next: float
    sign: int

    def __post_init__(self):
        scale = 1.0 + max(abs(self.z_prev), abs(self.z_center), abs(self.z_next))
        pairs = (
            (self.z_prev, self.z_center),
            (self.z_center, self.z_next),
            (self.z_prev, self.z_next),
        )
        if any(abs(a - b) <= 1e-12 * scale for a, b in pairs):
            raise ValueError("apex heights in a consecutive triple must be pairwise distinct")
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def bisector_height(self) -> float:
        return 0.5 * (self.z_prev + self.z_next)


def central_scaling(t: ApexTriple, p: PlanePoint) -> PlanePoint:
    """Scale ``p`` from the center (0, z_center) by the ratio taking the lower
    apex to the upper one."""
    if t.sign != +1:
        raise ValueError("central_scaling requires a plus-signed triple")
    lam = (t.z_next - t.z_center) / (t.z_prev - t.z_center)
    return PlanePoint(r=lam * p.r, z=t.z_center + lam * (p.z - t.z_center))


def homology_matrix(t: ApexTriple) -> np.ndarray:
    """Homogeneous 3x3 matrix of the homology with center (0, z_center), axis
    z = (z_prev+z_next)/2, mapping (0, z_prev) to (0, z_next)."""
    mid = t.bisector_height
    k = 2.0 / (t.z_next - t.z_center)
    c = np.array([0.0, t.z_center, 1.0])
    a = np.array([0.0, 1.0, -mid])
    return np.eye(3) + k * np.outer(c, a)


def axis_homology(t: ApexTriple, p: PlanePoint, tol=None) -> PlanePoint:
    """Apply the perspective collineation selected by a minus sign."""
    if t.sign != -1:
        raise ValueError("axis_homology requires a minus-signed triple")
    tol = tol or DEFAULT
    mid = t.bisector_height
    scale = 1.0 + max(abs(t.z_prev), abs(t.z_center), abs(t.z_next))
    if abs(t.z_center - mid) <= 1e-12 * scale:
        raise DegenerateCollineation(
            "homology center sits on its axis (elation); such triples are rejected"
        )
    k = 2.0 / (t.z_next - t.z_center)
    w = 1.0 + k * (p.z - mid)
    if abs(w) < tol.homogeneous_weight:
        raise PointAtInfinity(
            f"chart point (r={p.r:g}, z={p.z:g}) maps to infinity under the "
            f"homology of the triple ({t.z_prev:g}, {t.z_center:g}-, {t.z_next:g})"
        )
    return PlanePoint(
        r=p.r / w,
        z=(p.z + k * (p.z - mid) * t.z_center) / w,
    )


def apex_map(t: ApexTriple, p: PlanePoint) -> PlanePoint:
    """Dispatch to the scaling or the homology according to the triple's sign."""
    if t.sign == +1:
        return central_scaling(t, p)
    return axis_homology(t, p)
