"""Build P-hedron meshes from the three control polylines.

Pipeline: normalize the frame, validate the input assumptions, translate
every profile plane onto the z-axis strip by strip (recording the inverse
translations in a ledger), grow the vertex rows inside each axial plane by
the per-apex maps, then translate the columns back and attach the two
boundary rows traced out by the first and last apex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateFrame, PointAtInfinity, TranslationUndefined
from .geometry import EZ, ApexTriple, ProfilePlane, apex_map, PlanePoint, unit
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class Options:
    """Per-model knobs carried alongside the control polylines."""

    normalize: bool = True
    samples: int = DEFAULT.samples
    tolerances: Tolerances = DEFAULT


@dataclass
class ControlPolylines:
    """The three user inputs.

    trajectory : (m+1, 3) base vertices, one per profile plane
    directions : (m+1, 3) direction points, horizontal from each base vertex
    apex_z     : (n+1,)   apex heights along the axis
    apex_signs : (n+1,)   +1 / -1 on interior apexes, 0 on the two ends
    """

    trajectory: np.ndarray
    directions: np.ndarray
    apex_z: np.ndarray
    apex_signs: np.ndarray
    options: Options = field(default_factory=Options)

    def __post_init__(self):
        self.trajectory = np.asarray(self.trajectory, float)
        self.directions = np.asarray(self.directions, float)
        self.apex_z = np.asarray(self.apex_z, float)
        self.apex_signs = np.asarray(self.apex_signs, int)

    @property
    def m(self) -> int:
        return len(self.trajectory) - 1

    @property
    def n(self) -> int:
        return len(self.apex_z) - 1

    def planes(self) -> list[ProfilePlane]:
        return [
            ProfilePlane.through(v, d)
            for v, d in zip(self.trajectory, self.directions)
        ]

    def scale(self) -> float:
        pts = np.vstack([self.trajectory, self.directions])
        span = np.linalg.norm(pts.max(axis=0) - pts.min(axis=0))
        return max(1.0, span, float(np.abs(self.apex_z).max()))


@dataclass(frozen=True)
class Issue:
    code: str
    message: str
    index: int | None = None


@dataclass
class ValidationReport:
    violations: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code, message, index=None):
        self.violations.append(Issue(code, message, index))

    def warn(self, code, message, index=None):
        self.warnings.append(Issue(code, message, index))

    def codes(self) -> set:
        return {v.code for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [vars(v) for v in self.violations],
            "warnings": [vars(w) for w in self.warnings],
        }


@dataclass(frozen=True)
class FrameTransform:
    """Rigid map X -> R X + t applied during frame normalization, plus the
    z-shift that was applied to the apex heights."""

    rotation: np.ndarray
    translation: np.ndarray
    apex_shift: float = 0.0

    @classmethod
    def identity(cls) -> "FrameTransform":
        return cls(np.eye(3), np.zeros(3), 0.0)

    def apply(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(pts, float) @ self.rotation.T + self.translation

    def inverse(self) -> "FrameTransform":
        rt = self.rotation.T
        return FrameTransform(rt, -rt @ self.translation, -self.apex_shift)

    def is_identity(self, tol=1e-12) -> bool:
        return (
            np.allclose(self.rotation, np.eye(3), atol=tol)
            and np.allclose(self.translation, 0.0, atol=tol)
            and abs(self.apex_shift) <= tol
        )


@dataclass
class TranslationLedger:
    """Signed inverse-translation magnitudes per strip and their directions.

    directions[i] is the unit vector of trajectory edge i-1 -> i; offsets[i]
    is the accumulated vector restoring column i of the general P-hedron
    from the axial one.  Entries for i < 2 are zero.
    """

    directions: np.ndarray  # (m+1, 3)
    magnitudes: np.ndarray  # (m+1,)

    @classmethod
    def empty(cls, m: int) -> "TranslationLedger":
        return cls(np.zeros((m + 1, 3)), np.zeros(m + 1))

    @property
    def offsets(self) -> np.ndarray:
        return np.cumsum(self.directions * self.magnitudes[:, None], axis=0)

    def is_trivial(self, tol=1e-12) -> bool:
        return bool(np.all(np.abs(self.magnitudes) <= tol))


@dataclass
class AxialModel:
    """The pencil configuration: every profile plane contains the z-axis."""

    thetas: np.ndarray        # (m+1,)
    trajectory: np.ndarray    # (m+1, 3) axial base vertices
    apex_z: np.ndarray        # (n+1,)
    apex_signs: np.ndarray    # (n+1,)
    ledger: TranslationLedger
    grid: np.ndarray | None = None   # (m+1, n, 3) once rows are propagated
    options: Options = field(default_factory=Options)

    @property
    def m(self) -> int:
        return len(self.trajectory) - 1

    @property
    def n(self) -> int:
        return len(self.apex_z) - 1

    def plane(self, i: int) -> ProfilePlane:
        return ProfilePlane.axial(self.thetas[i])

    def apexes(self) -> np.ndarray:
        out = np.zeros((self.n + 1, 3))
        out[:, 2] = self.apex_z
        return out

    def scale(self) -> float:
        pts = self.grid.reshape(-1, 3) if self.grid is not None else self.trajectory
        span = np.linalg.norm(pts.max(axis=0) - pts.min(axis=0))
        return max(1.0, span, float(np.abs(self.apex_z).max()))

    def is_flat(self, tol=1e-9) -> bool:
        """True when all profile planes coincide (developed configuration)."""
        d = (self.thetas - self.thetas[0]) % math.pi
        return bool(np.all((d <= tol) | (math.pi - d <= tol)))


@dataclass
class PHedronMesh:
    """Quad grid of the general P-hedron including the two apex-trail rows.

    vertices[i, 0] is the low-boundary point of column i, vertices[i, 1..n]
    are the rows grown from the base vertex, vertices[i, n+1] the high
    boundary.  Faces index the flattened row-major vertex order used by the
    OBJ exporter.
    """

    vertices: np.ndarray            # (m+1, n+2, 3)
    faces: np.ndarray               # (m*(n+1), 4)
    planarity_defects: np.ndarray   # (m*(n+1),)
    classification: str
    edge_lengths_inplane: np.ndarray  # (m+1, n+1)
    edge_lengths_cross: np.ndarray    # (m, n+2)

    @property
    def m(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def n(self) -> int:
        return self.vertices.shape[1] - 2

    def scale(self) -> float:
        pts = self.vertices.reshape(-1, 3)
        return max(1.0, float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0))))

    def flat_vertices(self) -> np.ndarray:
        """Vertices in exporter order: row-major, boundary-low row first."""
        return self.vertices.transpose(1, 0, 2).reshape(-1, 3)


def grid_faces(m: int, n_rows: int) -> np.ndarray:
    """Quad indices for an (m+1) x n_rows vertex grid flattened row-major."""
    faces = []
    for jj in range(n_rows - 1):
        for i in range(m):
            a = jj * (m + 1) + i
            b = jj * (m + 1) + i + 1
            c = (jj + 1) * (m + 1) + i + 1
            d = (jj + 1) * (m + 1) + i
            faces.append((a, b, c, d))
    return np.array(faces, dtype=int)


def quad_defect(corners: np.ndarray) -> float:
    """Normalized tetrahedral volume of a quad's four corners."""
    a, b, c, d = corners
    vol = abs(float(np.linalg.det(np.stack([b - a, c - a, d - a]))))
    s = max(
        np.linalg.norm(b - a), np.linalg.norm(c - b),
        np.linalg.norm(d - c), np.linalg.norm(a - d),
        np.linalg.norm(c - a), np.linalg.norm(d - b),
    )
    if s <= 1e-300:
        return 0.0
    return vol / s**3


def mesh_planarity_defects(vertices_flat: np.ndarray, faces: np.ndarray) -> np.ndarray:
    return np.array([quad_defect(vertices_flat[f]) for f in faces])


# ---------------------------------------------------------------------------
# frame normalization


def _plane_intersection_xy(p0: ProfilePlane, p1: ProfilePlane, tol: Tolerances):
    """Horizontal coordinates of the vertical line shared by two planes."""
    n0, n1 = p0.normal[:2], p1.normal[:2]
    det = n0[0] * n1[1] - n0[1] * n1[0]
    if abs(det) <= tol.parallelism * 10:
        raise DegenerateFrame("first two profile planes are parallel; no axis line")
    rhs = np.array([p0.offset, p1.offset])
    mat = np.array([n0, n1])
    return np.linalg.solve(mat, rhs)


def _unit_directions(traj: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Direction points re-emitted at unit distance; already-unit entries are
    kept bit for bit so canonical files are fixed points."""
    out = dirs.copy()
    for i in range(len(traj)):
        d = dirs[i] - traj[i]
        n = np.linalg.norm(d)
        if abs(n - 1.0) > 1e-15:
            out[i] = traj[i] + d / n
    return out


def _is_canonical_flat(cp: ControlPolylines, planes, tol: Tolerances) -> bool:
    scale = cp.scale()
    v0 = cp.trajectory[0]
    if abs(v0[1]) > tol.incidence * scale or abs(v0[2]) > tol.incidence * scale \
            or v0[0] <= tol.incidence * scale:
        return False
    return all(
        abs(p.offset) <= tol.incidence * scale
        and abs(math.sin(p.theta)) <= tol.parallelism * 100
        for p in planes
    )


def normalize_frame(cp: ControlPolylines, tol: Tolerances | None = None):
    """Rigidly move the input into the canonical frame.

    Afterwards the first profile plane is the xz-plane, the z-axis is the
    intersection of the first two planes, and the first trajectory vertex
    sits on the positive x-axis.  Direction points are re-emitted at unit
    distance.  Returns the normalized polylines together with the applied
    rigid transform (for round-tripping edits in a UI).
    """
    tol = tol or cp.options.tolerances
    planes = cp.planes()
    if len(planes) < 2:
        raise DegenerateFrame("need at least two profile planes")
    try:
        xy = _plane_intersection_xy(planes[0], planes[1], tol)
    except DegenerateFrame:
        # coincident planes leave the axis line ambiguous; developed (flat)
        # inputs are accepted only when already in the canonical frame
        if _is_canonical_flat(cp, planes, tol):
            out = ControlPolylines(
                trajectory=cp.trajectory.copy(),
                directions=_unit_directions(cp.trajectory, cp.directions),
                apex_z=cp.apex_z.copy(),
                apex_signs=cp.apex_signs.copy(),
                options=cp.options,
            )
            return out, FrameTransform.identity()
        raise
    t1 = np.array([-xy[0], -xy[1], 0.0])

    # snap an (up to rounding) identity transform so canonical inputs are
    # exact fixed points of normalization
    scale = cp.scale()
    if (
        np.linalg.norm(t1) <= 1e-12 * scale
        and abs(math.sin(planes[0].theta)) <= 1e-12
        and math.cos(planes[0].theta) > 0
        and float(planes[0].direction @ (cp.trajectory[0] + t1)) > tol.incidence * scale
        and abs(cp.trajectory[0][2]) <= 1e-12 * scale
    ):
        out = ControlPolylines(
            trajectory=cp.trajectory.copy(),
            directions=_unit_directions(cp.trajectory, cp.directions),
            apex_z=cp.apex_z.copy(),
            apex_signs=cp.apex_signs.copy(),
            options=cp.options,
        )
        return out, FrameTransform.identity()

    # rotate the first plane onto the xz-plane
    theta0 = planes[0].theta
    flip_first = False
    v0 = cp.trajectory[0] + t1
    # after rotating by -theta0 the first direction is +x; the base vertex
    # must land on the positive x side, otherwise flip the direction point
    r0 = float(planes[0].direction @ v0)
    if abs(r0) <= tol.incidence:
        raise DegenerateFrame("first trajectory vertex lies on the axis")
    if r0 < 0:
        theta0 = theta0 + math.pi
        flip_first = True
    cth, sth = math.cos(-theta0), math.sin(-theta0)
    rot = np.array([[cth, -sth, 0.0], [sth, cth, 0.0], [0.0, 0.0, 1.0]])

    traj = (cp.trajectory + t1) @ rot.T
    dirs = (cp.directions + t1) @ rot.T
    dz = -traj[0, 2]
    traj[:, 2] += dz
    dirs[:, 2] += dz

    if flip_first:
        dirs[0] = traj[0] - (dirs[0] - traj[0])

    dirs = _unit_directions(traj, dirs)

    transform = FrameTransform(rot, rot @ t1 + np.array([0.0, 0.0, dz]), dz)
    out = ControlPolylines(
        trajectory=traj,
        directions=dirs,
        apex_z=cp.apex_z + dz,
        apex_signs=cp.apex_signs.copy(),
        options=cp.options,
    )
    return out, transform


# ---------------------------------------------------------------------------
# validation


def _planes_parallel(pa: ProfilePlane, pb: ProfilePlane, tol: Tolerances) -> bool:
    return abs(math.sin(pa.theta - pb.theta)) <= tol.parallelism * 100


def _planes_identical(pa, pb, va, vb, tol, scale) -> bool:
    if not _planes_parallel(pa, pb, tol):
        return False
    return abs(float(pa.normal @ (np.asarray(vb) - np.asarray(va)))) <= tol.incidence * scale


def validate(cp: ControlPolylines, allow_flat: bool = False) -> ValidationReport:
    """Check every input assumption; report-valued so a UI can show all
    problems at once.  Expects a frame-normalized input (run normalize_frame
    first for raw data)."""
    tol = cp.options.tolerances
    rep = ValidationReport()
    scale = cp.scale()

    m, n = cp.m, cp.n
    if len(cp.directions) != m + 1:
        rep.add("CountMismatch", "trajectory and direction polylines differ in length")
        return rep
    if m < 1:
        rep.add("TooFewPlanes", "need at least two trajectory vertices")
    if n < 2 or len(cp.apex_signs) != n + 1:
        rep.add("TooFewApexes", "need at least three apexes")
        return rep

    for i, (v, d) in enumerate(zip(cp.trajectory, cp.directions)):
        dv = d - v
        if np.linalg.norm(dv) <= tol.incidence * scale:
            rep.add("DirectionCoincidesVertex", f"direction point {i} equals its vertex", i)
        elif abs(dv[2]) > tol.incidence * (1.0 + np.linalg.norm(dv)):
            rep.add("DirectionNotHorizontal", f"direction {i} is not horizontal", i)

    if rep.violations:
        return rep

    planes = cp.planes()
    identical_pairs = []
    for i in range(m):
        if _planes_identical(planes[i], planes[i + 1], cp.trajectory[i],
                             cp.trajectory[i + 1], tol, scale):
            identical_pairs.append(i)
        elif _planes_parallel(planes[i], planes[i + 1], tol):
            rep.add(
                "TranslationalStrip",
                f"profile planes {i} and {i + 1} are parallel; translational "
                "strips are out of scope",
                i,
            )
    flat_input = len(identical_pairs) == m and m >= 1
    if identical_pairs and not (allow_flat and flat_input):
        for i in identical_pairs:
            rep.add(
                "ConsecutivePlanesIdentical",
                f"profile planes {i} and {i + 1} coincide (bifurcation configuration)"
                + ("; this looks like a developed pattern, use the flat pipeline"
                   if flat_input else ""),
                i,
            )
    elif flat_input and allow_flat:
        rep.warn("FlatPattern", "all profile planes coincide; flat-pattern rules apply")

    for j in range(n - 1):
        trio = cp.apex_z[j : j + 3]
        if (abs(trio[0] - trio[1]) <= tol.incidence * scale
                or abs(trio[1] - trio[2]) <= tol.incidence * scale
                or abs(trio[0] - trio[2]) <= tol.incidence * scale):
            rep.add(
                "ConsecutiveApexesEqual",
                f"apex heights {j}..{j + 2} are not pairwise distinct",
                j,
            )

    if cp.apex_signs[0] != 0 or cp.apex_signs[-1] != 0:
        rep.add("SignOnBoundaryApex", "first and last apex carry no sign")
    for j in range(1, n):
        if cp.apex_signs[j] not in (+1, -1):
            rep.add("MissingInteriorSign", f"interior apex {j} needs a +/- sign", j)
    for j in range(1, n):
        if cp.apex_signs[j] == -1:
            mid = 0.5 * (cp.apex_z[j - 1] + cp.apex_z[j + 1])
            if abs(cp.apex_z[j] - mid) <= tol.incidence * scale:
                rep.add(
                    "DegenerateHomology",
                    f"minus-signed apex {j} sits midway between its neighbours",
                    j,
                )

    # frame assumptions
    if planes and not rep.violations:
        if abs(planes[0].offset) > tol.incidence * scale or \
                abs(math.sin(planes[0].theta)) > tol.parallelism * 100:
            rep.add("FrameNotNormalized", "first profile plane is not the xz-plane")
        if m >= 1 and abs(planes[1].offset) > tol.incidence * scale:
            rep.add("FrameNotNormalized", "second profile plane misses the z-axis")
        v0 = cp.trajectory[0]
        if abs(v0[1]) > tol.incidence * scale or abs(v0[2]) > tol.incidence * scale \
                or v0[0] <= tol.incidence * scale:
            rep.add(
                "DegenerateFrame",
                "first trajectory vertex must sit on the positive x-axis",
            )

    if np.all(np.abs(cp.trajectory[:, 2]) <= tol.incidence * scale):
        rep.warn(
            "TrajectoryInBasePlane",
            "trajectory lies in the xy-plane; the model is T-hedral and only "
            "generic handling is provided",
        )

    if rep.violations:
        return rep

    # equal-bar rule: a column equidistant from the first two apexes makes
    # every chain scissor-like and forbids minus signs
    try:
        model = axialize(cp)
    except TranslationUndefined as exc:
        rep.add("TranslationUndefined", str(exc), exc.strip)
        return rep
    s0 = np.array([0.0, 0.0, cp.apex_z[0]])
    s1 = np.array([0.0, 0.0, cp.apex_z[1]])
    d0 = np.linalg.norm(model.trajectory - s0, axis=1)
    d1 = np.linalg.norm(model.trajectory - s1, axis=1)
    scissor = np.abs(d0 - d1) <= tol.tie * scale
    if scissor.any() and (cp.apex_signs == -1).any():
        idx = int(np.argmax(scissor))
        rep.add(
            "ScissorRequiresAllPlus",
            f"column {idx} is equidistant from the first two apexes; such "
            "inputs admit only plus signs (points would drop to infinity)",
            idx,
        )
    if scissor.all():
        rep.add(
            "AllColumnsEquidistant",
            "every column is equidistant from the first two apexes; the "
            "motion parameter cannot be selected",
        )

    # warn about quad strips that cannot stay planar once columns are offset
    if not model.ledger.is_trivial(tol.incidence * scale):
        minus = [j for j in range(1, n) if cp.apex_signs[j] == -1]
        interior_minus = [j for j in minus if j <= n - 2]
        if interior_minus:
            rep.warn(
                "NonPlanarInterior",
                "minus signs below the last interior apex make translated "
                f"strips non-planar (apexes {interior_minus})",
            )
        if n - 1 in minus:
            rep.warn(
                "NonPlanarBoundaryStrip",
                "a minus sign on the last interior apex leaves the high "
                "boundary strip non-planar on translated columns",
            )
    return rep


# ---------------------------------------------------------------------------
# construction steps


def axialize(cp: ControlPolylines) -> AxialModel:
    """Translate every profile plane onto the z-axis (grid not yet filled).

    Strip i is translated along trajectory edge i-1 -> i by the unique amount
    that brings plane i onto the axis; the inverse magnitudes go into the
    ledger.
    """
    tol = cp.options.tolerances
    m = cp.m
    traj = cp.trajectory.copy()
    dirs = cp.directions.copy()
    ledger = TranslationLedger.empty(m)
    scale = cp.scale()

    for i in range(2, m + 1):
        plane = ProfilePlane.through(traj[i], dirs[i])
        edge = traj[i] - traj[i - 1]
        if np.linalg.norm(edge) <= tol.incidence * scale:
            raise TranslationUndefined(f"trajectory edge {i - 1}->{i} degenerates", strip=i)
        u = unit(edge)
        denom = float(u @ plane.normal)
        if abs(denom) <= tol.parallelism * 100:
            if abs(plane.offset) <= tol.incidence * scale:
                s = 0.0  # already axial, no translation needed
            else:
                raise TranslationUndefined(
                    f"trajectory edge {i - 1}->{i} is parallel to profile plane {i}",
                    strip=i,
                )
        else:
            s = -plane.offset / denom
        traj[i:] += s * u
        dirs[i:] += s * u
        ledger.directions[i] = u
        ledger.magnitudes[i] = -s

    thetas = np.array(
        [ProfilePlane.through(v, d).theta for v, d in zip(traj, dirs)]
    )
    thetas[0] = 0.0
    return AxialModel(
        thetas=thetas,
        trajectory=traj,
        apex_z=cp.apex_z.copy(),
        apex_signs=cp.apex_signs.copy(),
        ledger=ledger,
        options=cp.options,
    )


def propagate_rows(model: AxialModel) -> AxialModel:
    """Grow the vertex rows in every axial plane by iterating the apex maps."""
    m, n = model.m, model.n
    grid = np.zeros((m + 1, n, 3))
    for i in range(m + 1):
        plane = model.plane(i)
        p = PlanePoint(
            r=float(plane.direction @ model.trajectory[i]),
            z=float(model.trajectory[i][2]),
        )
        grid[i, 0] = model.trajectory[i]
        for j in range(n - 1):
            triple = ApexTriple(
                z_prev=model.apex_z[j],
                z_center=model.apex_z[j + 1],
                z_next=model.apex_z[j + 2],
                sign=int(model.apex_signs[j + 1]),
            )
            try:
                p = apex_map(triple, p)
            except PointAtInfinity as exc:
                exc.apex_index = j + 1
                exc.column = i
                raise
            grid[i, j + 1] = p.r * plane.direction + p.z * EZ
    return replace(model, grid=grid)


def deaxialize(model: AxialModel) -> PHedronMesh:
    """Translate the columns back and attach the two apex-trail rows."""
    if model.grid is None:
        raise ValueError("propagate rows before assembling the mesh")
    m, n = model.m, model.n
    tol = model.options.tolerances
    offsets = model.ledger.offsets
    s_low = np.array([0.0, 0.0, model.apex_z[0]])
    s_high = np.array([0.0, 0.0, model.apex_z[-1]])

    vertices = np.zeros((m + 1, n + 2, 3))
    for i in range(m + 1):
        vertices[i, 0] = s_low + offsets[i]
        vertices[i, 1 : n + 1] = model.grid[i] + offsets[i]
        vertices[i, n + 1] = s_high + offsets[i]

    faces = grid_faces(m, n + 2)
    flat = vertices.transpose(1, 0, 2).reshape(-1, 3)
    defects = mesh_planarity_defects(flat, faces)

    scale = model.scale()
    if np.all(np.abs(model.grid[:, 0, 2]) <= tol.incidence * scale):
        classification = "t_hedral"
    elif model.ledger.is_trivial(tol.incidence * scale):
        classification = "axial"
    else:
        classification = "general"

    inplane = np.linalg.norm(np.diff(vertices, axis=1), axis=2)
    cross = np.linalg.norm(np.diff(vertices, axis=0), axis=2)
    return PHedronMesh(
        vertices=vertices,
        faces=faces,
        planarity_defects=defects,
        classification=classification,
        edge_lengths_inplane=inplane,
        edge_lengths_cross=cross,
    )


def construct(cp: ControlPolylines, allow_flat: bool = False):
    """Run the full pipeline on a validated, frame-normalized input."""
    model = propagate_rows(axialize(cp))
    mesh = deaxialize(model)
    return model, mesh


def extract_polylines(model: AxialModel, mesh: PHedronMesh) -> ControlPolylines:
    """Recover the control polylines from a constructed model (round-trip)."""
    m = model.m
    traj = mesh.vertices[:, 1, :].copy()
    dirs = np.zeros_like(traj)
    for i in range(m + 1):
        e = model.plane(i).direction
        dirs[i] = traj[i] + e
    return ControlPolylines(
        trajectory=traj,
        directions=dirs,
        apex_z=model.apex_z.copy(),
        apex_signs=model.apex_signs.copy(),
        options=model.options,
    )
