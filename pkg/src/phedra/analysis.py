"""Invariant checkers, flat-pattern first-order flexibility, tube closure.

A developed or flat-folded pattern has every profile plane collapsed into
one plane.  Its point chains form an overconstrained planar linkage: rigid
rods through each interior apex (the apex pins the rod to an axis slider)
hinged at the row vertices, with a single bar at each end of every column.
First-order flexibility is decided by the null space of the corresponding
velocity constraint system; the non-expansion criterion then checks that no
coupling distance between neighbouring columns grows to first order, since
the spatial mesh could not absorb an expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .construction import AxialModel, PHedronMesh
from .deformation import DeformationPlan, FlexionInterval, axial_state_at, FlexState
from .errors import GridMismatch, IndeterminatePattern, NotFlat, RigidPattern
from .tolerances import DEFAULT


# ---------------------------------------------------------------------------
# metric checkers


def check_isometry(state: FlexState | PHedronMesh, reference: PHedronMesh) -> float:
    """Largest relative edge-length drift against the reference mesh.

    Covers the full quad grid including both boundary rows.  Zero-length
    reference edges (coincident boundary corners of axial models) are
    compared absolutely against the mesh scale.
    """
    verts = state.vertices if isinstance(state, (FlexState,)) else state.vertices
    if verts is None:
        raise GridMismatch("state carries no general vertex grid")
    if verts.shape != reference.vertices.shape:
        raise GridMismatch(
            f"grid {verts.shape} does not match reference {reference.vertices.shape}"
        )
    scale = reference.scale()
    inplane = np.linalg.norm(np.diff(verts, axis=1), axis=2)
    cross = np.linalg.norm(np.diff(verts, axis=0), axis=2)
    worst = 0.0
    for cur, ref in (
        (inplane, reference.edge_lengths_inplane),
        (cross, reference.edge_lengths_cross),
    ):
        diff = np.abs(cur - ref)
        denom = np.where(ref > 1e-12 * scale, ref, scale)
        worst = max(worst, float((diff / denom).max()))
    return worst


def check_planarity(mesh: PHedronMesh) -> float:
    """Largest normalized quad-planarity defect of the mesh."""
    return float(mesh.planarity_defects.max()) if len(mesh.planarity_defects) else 0.0


def cone_apex_deviation(state: FlexState) -> float:
    """Largest distance of an apex to the row edge lines that should pass
    through it, relative to nothing (absolute, caller scales)."""
    grid = state.axial_grid
    apexes = state.apexes
    worst = 0.0
    m1, n = grid.shape[0], grid.shape[1]
    for i in range(m1):
        for j in range(n - 1):
            a, b = grid[i, j], grid[i, j + 1]
            ab = b - a
            nrm = np.linalg.norm(ab)
            if nrm <= 1e-14:
                continue
            dist = np.linalg.norm(np.cross(apexes[j + 1] - a, ab)) / nrm
            worst = max(worst, float(dist))
    return worst


# ---------------------------------------------------------------------------
# flat patterns


@dataclass
class LinkageVelocityField:
    """First-order motion of the collapsed linkage.

    apex_rates[j] is the axis speed of apex j; velocities[i, j] the in-plane
    2D velocity of grid vertex (i, j).  Defined up to a global sign; the
    returned field has unit norm and its largest component is positive
    (recorded in normalization_tag).
    """

    apex_rates: np.ndarray      # (n+1,)
    velocities: np.ndarray      # (m+1, n, 2)
    normalization_tag: str
    nullity: int = 1

    def bar_residual(self, chart: np.ndarray, apex_z: np.ndarray) -> float:
        """Largest rate of change of any bar length under the field."""
        worst = 0.0
        m1, n = chart.shape[0], chart.shape[1]
        for i in range(m1):
            for j in range(n):
                p = chart[i, j]
                v = self.velocities[i, j]
                for jj, s_z in ((j, apex_z[j]), (j + 1, apex_z[j + 1])):
                    rel = v - np.array([0.0, self.apex_rates[jj]])
                    bar = p - np.array([0.0, s_z])
                    worst = max(worst, abs(float(rel @ bar)))
        return worst


def flat_chart(model: AxialModel, tol=None) -> np.ndarray:
    """Common-plane 2D coordinates of a flat model's grid, (m+1, n, 2).

    Requires every profile plane to coincide; the common plane is charted by
    (x, z) of the 3D embedding, which keeps reflected columns (direction
    angle off by pi) on the negative side.
    """
    tol = tol or model.options.tolerances
    if model.grid is None:
        raise ValueError("flat analysis needs a propagated grid")
    if not model.is_flat(1e-9):
        raise NotFlat("profile planes do not all coincide")
    scale = model.scale()
    if np.abs(model.grid[:, :, 1]).max() > tol.incidence * scale * 10:
        raise NotFlat("flat models must be given in the xz-plane")
    return model.grid[:, :, [0, 2]].copy()


def first_order_flex(model: AxialModel) -> LinkageVelocityField:
    """Velocity field of the collapsed linkage, when it is one-dimensional.

    Unknowns are the apex rates and the vertex velocities.  Each end bar
    contributes one length-rate row; each interior apex contributes the two
    bar rows of its rod plus the first-order collinearity of the rod (the
    three points stay aligned, which plain bar rows cannot see at a straight
    configuration).  One grounding row pins the base vertex to the x-axis.
    """
    tol = model.options.tolerances
    chart = flat_chart(model)
    m1, n = chart.shape[0], chart.shape[1]
    n_apex = n + 1
    n_unknown = n_apex + 2 * m1 * n

    def vcol(i, j):
        return n_apex + 2 * (i * n + j)

    rows = []

    def bar_row(i, j, apex_index, apex_z):
        row = np.zeros(n_unknown)
        p = chart[i, j]
        bar = p - np.array([0.0, apex_z])
        row[vcol(i, j) : vcol(i, j) + 2] = bar
        row[apex_index] = -bar[1]
        rows.append(row)

    for i in range(m1):
        bar_row(i, 0, 0, model.apex_z[0])
        bar_row(i, n - 1, n, model.apex_z[n])
        for j in range(n - 1):
            bar_row(i, j, j + 1, model.apex_z[j + 1])
            bar_row(i, j + 1, j + 1, model.apex_z[j + 1])
            # collinearity rate of (vertex j, apex j+1, vertex j+1):
            # d/dt [(A - S) x (B - S)] = 0 with x the 2D cross product
            row = np.zeros(n_unknown)
            s = np.array([0.0, model.apex_z[j + 1]])
            a = chart[i, j] - s
            b = chart[i, j + 1] - s
            # (vA - vS) x b + a x (vB - vS) with vS = (0, s_dot)
            row[vcol(i, j)] = b[1]
            row[vcol(i, j) + 1] = -b[0]
            row[vcol(i, j + 1)] = -a[1]
            row[vcol(i, j + 1) + 1] = a[0]
            row[j + 1] = b[0] - a[0]
            rows.append(row)

    ground = np.zeros(n_unknown)
    ground[vcol(0, 0) + 1] = 1.0
    rows.append(ground)

    mat = np.vstack(rows)
    u, sv, vt = np.linalg.svd(mat)
    cutoff = tol.rank * (sv[0] if len(sv) else 1.0)
    rank = int((sv > cutoff).sum())
    nullity = n_unknown - rank
    if nullity == 0:
        raise RigidPattern("the collapsed linkage admits only a standstill")
    if nullity >= 2:
        raise IndeterminatePattern(
            f"the collapsed linkage has a {nullity}-dimensional motion space",
            nullity,
        )
    vec = vt[-1]
    k = int(np.argmax(np.abs(vec)))
    if vec[k] < 0:
        vec = -vec
    vec = vec / np.linalg.norm(vec)
    names = [f"apex_rate[{j}]" for j in range(n_apex)] + [
        f"v[{i},{j}].{c}" for i in range(m1) for j in range(n) for c in ("r", "z")
    ]
    return LinkageVelocityField(
        apex_rates=vec[:n_apex].copy(),
        velocities=vec[n_apex:].reshape(m1, n, 2).copy(),
        normalization_tag=names[k],
        nullity=1,
    )


@dataclass
class NonExpansionVerdict:
    verdict: str                 # "flexes" | "blocked"
    coupling_rates: np.ndarray   # (m, n) first derivative of half the squared
                                 # coupling distances

    def to_dict(self):
        return {"verdict": self.verdict,
                "coupling_rates": self.coupling_rates.tolist()}


def non_expansion_check(field: LinkageVelocityField, model: AxialModel) -> NonExpansionVerdict:
    """Decide whether the flat linkage motion folds without tearing.

    The motion direction is free, so the test accepts fields whose coupling
    rates are one-signed either way.
    """
    tol = model.options.tolerances
    chart = flat_chart(model)
    m1, n = chart.shape[0], chart.shape[1]
    scale = model.scale()
    rates = np.zeros((m1 - 1, n))
    for i in range(m1 - 1):
        for j in range(n):
            d = chart[i, j] - chart[i + 1, j]
            rates[i, j] = float(
                field.velocities[i, j] @ d - field.velocities[i + 1, j] @ d
            )
    bound = tol.nonexpansion * scale * scale
    if np.all(rates <= bound) or np.all(rates >= -bound):
        verdict = "flexes"
    else:
        verdict = "blocked"
    return NonExpansionVerdict(verdict=verdict, coupling_rates=rates)


# ---------------------------------------------------------------------------
# tubes


@dataclass
class TubeReport:
    closed: bool
    closure_error: float
    tube_class: str              # "parallelogram" | "anti_parallelogram" | "other"
    symmetry_ok: bool
    sampled_max_error: float | None = None

    def to_dict(self):
        return {
            "closed": self.closed,
            "closure_error": self.closure_error,
            "class": self.tube_class,
            "symmetry_ok": self.symmetry_ok,
            "sampled_max_error": self.sampled_max_error,
        }


def _segments_cross(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def tube_check(model: AxialModel, plan: DeformationPlan | None = None,
               interval: FlexionInterval | None = None,
               sweep_samples: int = 16) -> TubeReport:
    """Closure and loop classification of the first column's chain.

    A tube closes when the first and last row vertices coincide for the
    whole flex.  For five apexes the closed loop of row vertices is a
    parallelogram or an anti-parallelogram whose symmetry line must be
    orthogonal to the axis; anything else (and any other row count) is
    reported as "other".
    """
    tol = model.options.tolerances
    if model.grid is None:
        raise ValueError("tube check needs a propagated grid")
    n = model.n
    scale = model.scale()
    err = float(np.linalg.norm(model.grid[0, 0] - model.grid[0, n - 1]))
    closed = err <= tol.closure * scale
    sampled_max = None
    if closed:
        from .deformation import build_plan, flexion_limits

        plan = plan or build_plan(model)
        interval = interval or flexion_limits(plan)
        delta = 1e-6 * max(interval.length, 1e-12)
        ts = np.linspace(interval.t_lambda + delta, interval.t_mu - delta,
                         sweep_samples)
        worst = 0.0
        for t in ts:
            st = axial_state_at(plan, float(t))
            worst = max(worst, float(
                np.linalg.norm(st.axial_grid[0, 0] - st.axial_grid[0, n - 1])
            ))
        sampled_max = worst
        closed = worst <= tol.closure_sweep * scale

    tube_class = "other"
    symmetry_ok = False
    if closed and n == 5:
        plane = model.plane(0)
        pts = np.stack([
            [float(plane.direction @ model.grid[0, j]), float(model.grid[0, j][2])]
            for j in range(4)
        ])
        side = [pts[(k + 1) % 4] - pts[k] for k in range(4)]
        tol_len = tol.closure_sweep * scale * 10
        opp_equal = (
            abs(np.linalg.norm(side[0]) - np.linalg.norm(side[2])) <= tol_len
            and abs(np.linalg.norm(side[1]) - np.linalg.norm(side[3])) <= tol_len
        )
        if opp_equal and np.allclose(side[0], -side[2], atol=tol_len) \
                and np.allclose(side[1], -side[3], atol=tol_len):
            tube_class = "parallelogram"
            symmetry_ok = True
        elif opp_equal and (_segments_cross(pts[0], pts[1], pts[2], pts[3])
                            or _segments_cross(pts[1], pts[2], pts[3], pts[0])):
            # anti-parallelogram: vertices swap pairwise under reflection in
            # a line z = const, which must be orthogonal to the axis
            mid02 = 0.5 * (pts[0][1] + pts[2][1])
            mid13 = 0.5 * (pts[1][1] + pts[3][1])
            sym = (
                abs(mid02 - mid13) <= tol_len
                and abs(pts[0][0] - pts[2][0]) <= tol_len
                and abs(pts[1][0] - pts[3][0]) <= tol_len
            )
            tube_class = "anti_parallelogram"
            symmetry_ok = bool(sym)
    return TubeReport(
        closed=bool(closed),
        closure_error=err,
        tube_class=tube_class,
        symmetry_ok=symmetry_ok,
        sampled_max_error=sampled_max,
    )
