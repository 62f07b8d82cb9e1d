"""Closed-form isometric deformation of an axial P-hedron.

The motion parameter is the z-coordinate of whichever of the first two
apexes hangs on the shorter bar of the base vertex (only that endpoint can
cross the base plane during the flex).  The first column's chain is swept
by alternating two recurrences: the next row vertex sits on the ray from
the current apex through the current vertex at its stored bar distance, and
the next apex is reached by a stored multiple of the (optionally
z-reflected) vector from the previous apex to the previous vertex.  Every
further column is propagated by intersecting two axis-centered spheres with
a sphere around the previous column's base vertex, which yields exactly two
mirror-symmetric candidates; a per-strip sign vector picks the branch.  The
discriminant of that intersection doubles as the flexion-limit detector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .construction import (
    AxialModel,
    PHedronMesh,
    TranslationLedger,
    grid_faces,
    mesh_planarity_defects,
)
from .errors import (
    ComplexBranch,
    DegenerateK,
    NotALimit,
    NumericallyTangent,
    OutOfDomain,
    ScissorRequiresAllPlus,
)
from .geometry import EZ, unit
from .tolerances import DEFAULT, Tolerances


def _sgn(x: float) -> float:
    # zero is mapped to +1 by convention; callers flag when it actually occurs
    return -1.0 if x < 0 else 1.0


@dataclass(frozen=True)
class Limit:
    """One end of a real-motion range: a discriminant root owned by one or
    more strips, or a hard endpoint of the driving bar's domain."""

    t: float
    owners: tuple
    kind: str  # "discriminant" | "domain"


@dataclass
class FlexionInterval:
    limits: list            # sorted Limit entries over the whole domain
    t_star: float
    t_lambda: float
    t_mu: float
    hard: tuple             # (-c, +c) from the driving bar
    zero_length: bool = False   # a root coincides with t_star (flat pattern)

    @property
    def length(self) -> float:
        return self.t_mu - self.t_lambda

    def limit_at(self, t: float, tol: float = 1e-9):
        for lim in self.limits:
            if abs(lim.t - t) <= tol:
                return lim
        return None

    def to_dict(self) -> dict:
        return {
            "t_star": self.t_star,
            "t_lambda": self.t_lambda,
            "t_mu": self.t_mu,
            "hard": list(self.hard),
            "zero_length": self.zero_length,
            "limits": [
                {"t": l.t, "owners": list(l.owners), "kind": l.kind}
                for l in self.limits
            ],
        }


@dataclass
class DeformationPlan:
    """Every time-invariant constant of the flex."""

    case: str                  # "a": parameter is the first apex height, "b": the second
    t_star: float
    driving_length: float      # reach of the driving bar; hard domain is +/- this
    bar_to_lower: np.ndarray   # (m+1, n) |V_ij - S_j|
    bar_to_upper: np.ndarray   # (m+1, n) |V_ij - S_{j+1}|
    edge_lengths: np.ndarray   # (m+1,)  trajectory edge i-1 -> i (entry 0 unused)
    kappa: np.ndarray          # (m+1, n-1) ray-side signs per column and row step
    ratio: np.ndarray          # (m+1, n-1) bar ratios per column and row step
    mirror_z: np.ndarray       # (n+1,) +1 keeps z, -1 reflects it (interior apexes)
    sign_z0: float
    sign_z1: float
    branch: np.ndarray         # (m+1,) candidate signs per strip (entry 0 unused)
    apex_z_ref: np.ndarray     # (n+1,) heights at t_star
    grid_ref: np.ndarray       # (m+1, n, 3) axial grid at t_star
    ledger: TranslationLedger
    scale: float
    sign_zero_flagged: bool = False
    tolerances: Tolerances = field(default_factory=lambda: DEFAULT)

    @property
    def m(self) -> int:
        return self.grid_ref.shape[0] - 1

    @property
    def n(self) -> int:
        return self.grid_ref.shape[1]

    def with_branch(self, branch) -> "DeformationPlan":
        return replace(self, branch=np.asarray(branch, float).copy())


@dataclass
class FlexState:
    """One evaluated configuration of the flex."""

    t: float
    apex_z: np.ndarray          # (n+1,)
    axial_grid: np.ndarray      # (m+1, n, 3)
    vertices: np.ndarray | None  # (m+1, n+2, 3) general mesh incl. boundary rows
    branch: np.ndarray
    tangent_strips: tuple = ()

    @property
    def apexes(self) -> np.ndarray:
        out = np.zeros((len(self.apex_z), 3))
        out[:, 2] = self.apex_z
        return out

    def plane_angles(self) -> np.ndarray:
        return np.arctan2(self.axial_grid[:, 0, 1], self.axial_grid[:, 0, 0])

    def chart_rz(self) -> np.ndarray:
        """Per-plane (r, z) coordinates of the axial grid, (m+1, n, 2).

        The chart direction of each plane points at the column's base
        vertex, so base rows have positive r.
        """
        out = np.zeros(self.axial_grid.shape[:2] + (2,))
        for i in range(self.axial_grid.shape[0]):
            e = unit(np.array([*self.axial_grid[i, 0, :2], 0.0]))
            out[i, :, 0] = self.axial_grid[i] @ e
            out[i, :, 1] = self.axial_grid[i, :, 2]
        return out

    def mesh_vertices_flat(self) -> np.ndarray:
        return self.vertices.transpose(1, 0, 2).reshape(-1, 3)


# ---------------------------------------------------------------------------
# plan assembly


def build_plan(model: AxialModel) -> DeformationPlan:
    """Freeze all motion constants from a constructed axial model."""
    if model.grid is None:
        raise ValueError("axial grid must be propagated before planning a flex")
    tol = model.options.tolerances
    m, n = model.m, model.n
    scale = model.scale()
    apexes = model.apexes()
    grid = model.grid

    c_lo = np.linalg.norm(grid - apexes[:n][None, :, :], axis=2)
    c_up = np.linalg.norm(grid - apexes[1 : n + 1][None, :, :], axis=2)

    d0 = np.linalg.norm(grid[:, 0] - apexes[0], axis=1)
    d1 = np.linalg.norm(grid[:, 0] - apexes[1], axis=1)
    equal = np.abs(d0 - d1) <= tol.tie * scale
    if equal.any() and (model.apex_signs == -1).any():
        raise ScissorRequiresAllPlus(
            "an equal-bar column forbids minus-signed apexes"
        )
    case = None
    for i in range(m + 1):
        if not equal[i]:
            case = "a" if d0[i] < d1[i] else "b"
            break
    if case is None:
        raise DegenerateK("every column is equidistant from the first two apexes")

    kappa = np.zeros((m + 1, n - 1))
    ratio = np.zeros((m + 1, n - 1))
    for i in range(m + 1):
        for j in range(n - 1):
            k = float((grid[i, j + 1] - apexes[j + 1]) @ (grid[i, j] - apexes[j + 1]))
            if abs(k) <= tol.tangent * scale**2:
                raise DegenerateK(
                    f"vertex ({i},{j}) or ({i},{j + 1}) coincides with apex {j + 1}"
                )
            kappa[i, j] = _sgn(k)
            ratio[i, j] = c_lo[i, j + 1] / c_up[i, j]

    edge = np.zeros(m + 1)
    edge[1:] = np.linalg.norm(np.diff(grid[:, 0], axis=0), axis=1)

    # branch signs: which side of the mirror plane (z-axis + previous base
    # vertex) each column's base vertex occupies at the reference state
    branch = np.ones(m + 1)
    for i in range(1, m + 1):
        prev_xy = grid[i - 1, 0, :2]
        nrm = np.array([-prev_xy[1], prev_xy[0]])
        side = float(grid[i, 0, :2] @ nrm)
        branch[i] = _sgn(side)

    t_star = model.apex_z[0] if case == "a" else model.apex_z[1]
    driving = d0[0] if case == "a" else d1[0]
    sz0, sz1 = _sgn(model.apex_z[0]), _sgn(model.apex_z[1])
    flagged = (case == "a" and model.apex_z[1] == 0) or (
        case == "b" and model.apex_z[0] == 0
    )

    return DeformationPlan(
        case=case,
        t_star=float(t_star),
        driving_length=float(driving),
        bar_to_lower=c_lo,
        bar_to_upper=c_up,
        edge_lengths=edge,
        kappa=kappa,
        ratio=ratio,
        mirror_z=model.apex_signs.astype(float).copy(),
        sign_z0=sz0,
        sign_z1=sz1,
        branch=branch,
        apex_z_ref=model.apex_z.copy(),
        grid_ref=grid.copy(),
        ledger=model.ledger,
        scale=scale,
        sign_zero_flagged=bool(flagged),
        tolerances=tol,
    )


# ---------------------------------------------------------------------------
# the first column's chain


def _axis_pair(plan: DeformationPlan, t: float):
    """Heights of the first two apexes and the base vertex reach at t."""
    c = plan.bar_to_lower[0, 0]
    cp = plan.bar_to_upper[0, 0]
    lim = plan.driving_length
    rad = lim * lim - t * t
    if rad < -plan.tolerances.tangent * max(1.0, lim * lim):
        raise OutOfDomain(
            f"parameter {t:g} exceeds the driving bar reach {lim:g}"
        )
    x00 = math.sqrt(max(rad, 0.0))
    if plan.case == "a":
        z0 = t
        z1 = plan.sign_z1 * math.sqrt(max(cp * cp - x00 * x00, 0.0))
    else:
        z1 = t
        z0 = plan.sign_z0 * math.sqrt(max(c * c - x00 * x00, 0.0))
    return z0, z1, x00


def linkage_chain_at(plan: DeformationPlan, t: float):
    """First column's chain at parameter t: all apex heights and the column
    vertices, with the base vertex pinned to the positive x-axis."""
    n = plan.n
    z0, z1, x00 = _axis_pair(plan, t)
    apex_z = np.zeros(n + 1)
    apex_z[0], apex_z[1] = z0, z1
    col = np.zeros((n, 3))
    col[0] = np.array([x00, 0.0, 0.0])
    s_prev = np.array([0.0, 0.0, z0])
    s_cur = np.array([0.0, 0.0, z1])
    for j in range(n - 1):
        step = plan.kappa[0, j] * plan.ratio[0, j]
        col[j + 1] = s_cur + step * (col[j] - s_cur)
        mirror = np.array([1.0, 1.0, plan.mirror_z[j + 1]])
        s_next = col[j + 1] + step * mirror * (s_prev - col[j])
        apex_z[j + 2] = s_next[2]
        s_prev, s_cur = s_cur, s_next
    return apex_z, col


def _row_fill(plan: DeformationPlan, i: int, base: np.ndarray, apex_z: np.ndarray):
    """Grow column i from its base vertex using the stored ratios."""
    n = plan.n
    col = np.zeros((n, 3))
    col[0] = base
    for j in range(n - 1):
        s = np.array([0.0, 0.0, apex_z[j + 1]])
        col[j + 1] = s + plan.kappa[i, j] * plan.ratio[i, j] * (col[j] - s)
    return col


def trajectory_point_at(plan: DeformationPlan, i: int, t: float, prev: np.ndarray):
    """Both candidates for base vertex i at parameter t.

    Solves the three sphere constraints (two axis apexes, previous base
    vertex) in closed form.  Returns (candidate_plus, candidate_minus,
    discriminant) where plus/minus refer to the orientation of the mirror
    plane spanned by the z-axis and ``prev``.
    """
    tol = plan.tolerances
    z0, z1, _ = _axis_pair(plan, t)
    c_a = plan.bar_to_lower[i, 0]
    c_b = plan.bar_to_upper[i, 0]
    ell = plan.edge_lengths[i]
    za, zb = z0, z1
    if abs(zb - za) <= 1e-14 * plan.scale:
        raise ComplexBranch(
            "first two apexes coincide; constraints degenerate",
            strip=i, t=t, discriminant=-math.inf,
        )
    z = (c_a * c_a - c_b * c_b + zb * zb - za * za) / (2.0 * (zb - za))
    rho2 = c_a * c_a - (z - za) * (z - za)
    px, py, pz = float(prev[0]), float(prev[1]), float(prev[2])
    h = 0.5 * (rho2 + z * z - 2.0 * pz * z + px * px + py * py + pz * pz - ell * ell)
    qq = px * px + py * py
    disc = rho2 * qq - h * h
    if disc < -tol.tangent:
        raise ComplexBranch(
            f"strip {i} leaves the real branch at t={t:g}",
            strip=i, t=t, discriminant=disc,
        )
    if qq <= 1e-28:
        raise ComplexBranch(
            f"previous base vertex sits on the axis at t={t:g}",
            strip=i, t=t, discriminant=disc,
        )
    # at a limit the two candidates coalesce; merging them keeps states
    # evaluable exactly at reported limit parameters
    root = 0.0 if abs(disc) <= tol.tangent else math.sqrt(disc)
    base = np.array([h * px / qq, h * py / qq])
    offs = root / qq * np.array([-py, px])
    cand_plus = np.array([*(base + offs), z])
    cand_minus = np.array([*(base - offs), z])
    return cand_plus, cand_minus, disc


def axial_state_at(plan: DeformationPlan, t: float, branch=None,
                   strict_tangent: bool = False) -> FlexState:
    """Axial configuration at parameter t on the given branch."""
    tol = plan.tolerances
    branch = plan.branch if branch is None else np.asarray(branch, float)
    m, n = plan.m, plan.n
    apex_z, col0 = linkage_chain_at(plan, t)
    grid = np.zeros((m + 1, n, 3))
    grid[0] = col0
    tangent = []
    prev = col0[0]
    for i in range(1, m + 1):
        cp_, cm_, disc = trajectory_point_at(plan, i, t, prev)
        if abs(disc) <= tol.tangent:
            if strict_tangent:
                raise NumericallyTangent(
                    f"strip {i} is at a flexion limit at t={t:g}", strip=i, t=t
                )
            tangent.append(i)
        base = cp_ if branch[i] > 0 else cm_
        grid[i] = _row_fill(plan, i, base, apex_z)
        prev = base
    return FlexState(
        t=float(t),
        apex_z=apex_z,
        axial_grid=grid,
        vertices=None,
        branch=branch.copy(),
        tangent_strips=tuple(tangent),
    )


def general_state_at(plan: DeformationPlan, t: float, branch=None,
                     strict_tangent: bool = False) -> FlexState:
    """General configuration: axial state plus the ledger offsets recomputed
    along the current trajectory edges, boundary rows included."""
    state = axial_state_at(plan, t, branch, strict_tangent)
    m, n = plan.m, plan.n
    d = plan.ledger.magnitudes
    offsets = np.zeros((m + 1, 3))
    acc = np.zeros(3)
    for i in range(1, m + 1):
        if abs(d[i]) > 0:
            u = unit(state.axial_grid[i, 0] - state.axial_grid[i - 1, 0])
            acc = acc + d[i] * u
        offsets[i] = acc
    vertices = np.zeros((m + 1, n + 2, 3))
    s_low = np.array([0.0, 0.0, state.apex_z[0]])
    s_high = np.array([0.0, 0.0, state.apex_z[-1]])
    for i in range(m + 1):
        vertices[i, 0] = s_low + offsets[i]
        vertices[i, 1 : n + 1] = state.axial_grid[i] + offsets[i]
        vertices[i, n + 1] = s_high + offsets[i]
    state.vertices = vertices
    return state


def state_mesh(state: FlexState, classification: str = "general") -> PHedronMesh:
    """Package a general state as a mesh (for export and diagnostics)."""
    if state.vertices is None:
        raise ValueError("state has no general vertices; evaluate general_state_at")
    m = state.vertices.shape[0] - 1
    n = state.vertices.shape[1] - 2
    faces = grid_faces(m, n + 2)
    flat = state.vertices.transpose(1, 0, 2).reshape(-1, 3)
    defects = mesh_planarity_defects(flat, faces)
    inplane = np.linalg.norm(np.diff(state.vertices, axis=1), axis=2)
    cross = np.linalg.norm(np.diff(state.vertices, axis=0), axis=2)
    return PHedronMesh(
        vertices=state.vertices,
        faces=faces,
        planarity_defects=defects,
        classification=classification,
        edge_lengths_inplane=inplane,
        edge_lengths_cross=cross,
    )


# ---------------------------------------------------------------------------
# flexion limits


def _discriminants(plan: DeformationPlan, t: float, branch) -> np.ndarray:
    """Per-strip discriminants at t; NaN where an earlier strip already left
    the real branch."""
    m = plan.m
    out = np.full(m + 1, np.nan)
    try:
        apex_z, col0 = linkage_chain_at(plan, t)
    except OutOfDomain:
        return out
    prev = col0[0]
    for i in range(1, m + 1):
        try:
            cp_, cm_, disc = trajectory_point_at(plan, i, t, prev)
        except ComplexBranch as exc:
            out[i] = exc.discriminant if exc.discriminant is not None else np.nan
            break
        out[i] = disc
        prev = cp_ if branch[i] > 0 else cm_
    return out


def _bisect_root(f, a, b, neg_at_a, tol_val, tol_t):
    """Bisect a sign change of f on [a, b]; undefined values count as the
    negative (beyond-limit) side.

    Refines past the nominal parameter tolerance down to float resolution
    so the reported parameter carries |f| below the tangent-merge threshold
    whenever the slope allows; it also sits on the real (non-negative) side
    of the final bracket, keeping states evaluable at the reported limit.
    """
    floor = max(4e-16 * max(1.0, abs(a), abs(b)), 1e-300)
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if math.isfinite(fm) and abs(fm) < tol_val:
            return mid
        if (b - a) < floor:
            break
        neg_m = (not math.isfinite(fm)) or (fm < 0)
        if neg_m == neg_at_a:
            a = mid
        else:
            b = mid
    return b if neg_at_a else a


def flexion_limits(plan: DeformationPlan, branch=None,
                   samples: int | None = None) -> FlexionInterval:
    """Locate every real root of the per-strip discriminants on the hard
    domain and bracket the active interval around the reference parameter."""
    tol = plan.tolerances
    branch = plan.branch if branch is None else np.asarray(branch, float)
    samples = samples or tol.samples
    c = plan.driving_length
    m = plan.m
    ts = np.linspace(-c, c, samples)
    vals = np.array([_discriminants(plan, t, branch) for t in ts])  # (samples, m+1)

    raw_roots: list = []
    for i in range(1, m + 1):
        col = vals[:, i]
        for k in range(samples - 1):
            va, vb = col[k], col[k + 1]
            if not math.isfinite(va):
                continue
            neg_a = va < 0
            neg_b = (not math.isfinite(vb)) or (vb < 0)
            if neg_a == neg_b:
                continue
            f = lambda t, i=i: _discriminants(plan, t, branch)[i]
            r = _bisect_root(f, ts[k], ts[k + 1], neg_a,
                             0.1 * min(tol.root, tol.tangent), tol.root)
            raw_roots.append((r, i))

    # merge roots shared by several strips
    raw_roots.sort()
    merged: list = []
    for r, i in raw_roots:
        if merged and abs(r - merged[-1][0]) <= 1e-9 * max(1.0, c):
            merged[-1][1].add(i)
        else:
            merged.append((r, {i}))
    limits = [Limit(t=float(t), owners=tuple(sorted(o)), kind="discriminant")
              for t, o in merged]
    limits.insert(0, Limit(t=float(-c), owners=(), kind="domain"))
    limits.append(Limit(t=float(c), owners=(), kind="domain"))

    t_star = plan.t_star
    zero_length = any(
        lim.kind == "discriminant" and abs(lim.t - t_star) <= 1e-9 * max(1.0, c)
        for lim in limits
    )
    eps = 1e-9 * max(1.0, c)
    lows = [l.t for l in limits if l.t < t_star - eps]
    highs = [l.t for l in limits if l.t > t_star + eps]
    t_lambda = max(lows) if lows else -c
    t_mu = min(highs) if highs else c
    return FlexionInterval(
        limits=limits,
        t_star=t_star,
        t_lambda=float(t_lambda),
        t_mu=float(t_mu),
        hard=(-float(c), float(c)),
        zero_length=zero_length,
    )


def switch_branch(plan: DeformationPlan, interval: FlexionInterval,
                  at: Limit | float) -> DeformationPlan:
    """Cross over to the other branch at a flexion limit.

    The returned plan evaluates identically at the limit itself (both
    candidates coincide there) and mirrors the owning strips everywhere
    else.  Domain endpoints have no second branch.
    """
    if not isinstance(at, Limit):
        lim = interval.limit_at(float(at))
        if lim is None:
            raise NotALimit(f"{at:g} is not a stored limit of this interval")
        at = lim
    if at.kind == "domain" or not at.owners:
        raise NotALimit("domain endpoints have no second branch")
    branch = plan.branch.copy()
    for i in at.owners:
        branch[i] = -branch[i]
    return plan.with_branch(branch)


def sweep(plan: DeformationPlan, branch=None, frames: int = 24,
          interval: FlexionInterval | None = None) -> list:
    """Uniform general-state samples across the open flexion interval."""
    if frames < 2:
        raise ValueError("need at least two frames")
    branch = plan.branch if branch is None else np.asarray(branch, float)
    if interval is None:
        interval = flexion_limits(plan, branch)
    delta = 1e-6 * max(interval.length, 1e-12)
    ts = np.linspace(interval.t_lambda + delta, interval.t_mu - delta, frames)
    return [general_state_at(plan, float(t), branch) for t in ts]
