"""Shared fixtures: reference models, tube loops, flat patterns, and a
random-model generator for the property sweeps."""

import math

import numpy as np

from phedra.construction import ControlPolylines, construct, validate
from phedra.deformation import axial_state_at, build_plan, flexion_limits
from phedra.errors import PhedraError


def _dir_point(v, theta):
    return np.asarray(v, float) + np.array([math.cos(theta), math.sin(theta), 0.0])


def reference_model() -> ControlPolylines:
    """Two-plane model with apexes (-1, 2+, 4), base vertex (2,0,0) and the
    second plane at 60 degrees holding (r=1.5, z=1)."""
    th1 = math.radians(60.0)
    v1 = 1.5 * np.array([math.cos(th1), math.sin(th1), 0.0]) + np.array([0, 0, 1.0])
    return ControlPolylines(
        trajectory=np.array([[2.0, 0.0, 0.0], v1]),
        directions=np.array([_dir_point([2, 0, 0], 0.0), _dir_point(v1, th1)]),
        apex_z=np.array([-1.0, 2.0, 4.0]),
        apex_signs=np.array([0, +1, 0]),
    )


def reference_model_minus() -> ControlPolylines:
    cp = reference_model()
    cp.apex_signs = np.array([0, -1, 0])
    return cp


THETA_2 = math.radians(110.0)
AXIAL_COL2_R = 1.2
AXIAL_COL2_Z = 0.3
COL2_OFFSET = 0.5


def reference_model_3col() -> ControlPolylines:
    """Three-column extension: the reference model plus a plane at 110
    degrees whose axial base vertex (r=1.2, z=0.3) is shifted by 0.5 along
    the second trajectory edge, making the input genuinely general."""
    cp = reference_model()
    e2 = np.array([math.cos(THETA_2), math.sin(THETA_2), 0.0])
    v2_axial = AXIAL_COL2_R * e2 + np.array([0, 0, AXIAL_COL2_Z])
    u2 = v2_axial - cp.trajectory[1]
    u2 = u2 / np.linalg.norm(u2)
    v2 = v2_axial + COL2_OFFSET * u2
    return ControlPolylines(
        trajectory=np.vstack([cp.trajectory, v2]),
        directions=np.vstack([cp.directions, _dir_point(v2, THETA_2)]),
        apex_z=cp.apex_z.copy(),
        apex_signs=cp.apex_signs.copy(),
    )


def scissor_model(all_plus=True) -> ControlPolylines:
    """First column equidistant from the first two apexes (z0 = -z1 and the
    base vertex at height zero)."""
    th1 = math.radians(55.0)
    v1 = 1.8 * np.array([math.cos(th1), math.sin(th1), 0.0]) + np.array([0, 0, 0.7])
    sign = +1 if all_plus else -1
    return ControlPolylines(
        trajectory=np.array([[2.0, 0.0, 0.0], v1]),
        directions=np.array([_dir_point([2, 0, 0], 0.0), _dir_point(v1, th1)]),
        apex_z=np.array([-1.5, 1.5, 3.4]),
        apex_signs=np.array([0, sign, 0]),
    )


def parallelogram_tube_model() -> ControlPolylines:
    """Closed five-apex loop: point-symmetric all-plus apex heights close the
    chain for every start point, tracing a parallelogram."""
    s0, s1, center = -1.0, 1.5, 0.6
    apex_z = np.array([s0, s1, 2 * center - s0, 2 * center - s1, s0, s1])
    th1 = math.radians(50.0)
    v1 = 1.7 * np.array([math.cos(th1), math.sin(th1), 0.0]) + np.array([0, 0, 0.35])
    return ControlPolylines(
        trajectory=np.array([[2.0, 0.0, 0.0], v1]),
        directions=np.array([_dir_point([2, 0, 0], 0.0), _dir_point(v1, th1)]),
        apex_z=apex_z,
        apex_signs=np.array([0, 1, 1, 1, 1, 0]),
    )


def antiparallelogram_tube_model() -> ControlPolylines:
    """Closed five-apex loop with all minus signs: apex heights symmetric
    under reflection in a height line, tracing an anti-parallelogram."""
    center = 0.3
    apex_z = np.array([-1.2, 1.0, 2 * center + 1.2, 2 * center - 1.0, -1.2, 1.0])
    th1 = math.radians(50.0)
    v1 = 1.7 * np.array([math.cos(th1), math.sin(th1), 0.0]) + np.array([0, 0, 0.35])
    return ControlPolylines(
        trajectory=np.array([[2.0, 0.0, 0.0], v1]),
        directions=np.array([_dir_point([2, 0, 0], 0.0), _dir_point(v1, th1)]),
        apex_z=apex_z,
        apex_signs=np.array([0, -1, -1, -1, -1, 0]),
    )


def flat_parallelogram_model() -> ControlPolylines:
    """Developed parallelogram pattern: the folded tube flexed to its lower
    flexion limit, where all profile planes coincide with the xz-plane."""
    model, _ = construct(parallelogram_tube_model())
    plan = build_plan(model)
    interval = flexion_limits(plan)
    state = axial_state_at(plan, interval.t_lambda)
    traj = state.axial_grid[:, 0, :].copy()
    traj[:, 1] = 0.0
    return ControlPolylines(
        trajectory=traj,
        directions=traj + np.array([1.0, 0.0, 0.0]),
        apex_z=state.apex_z.copy(),
        apex_signs=np.array([0, 1, 1, 1, 1, 0]),
    )


def flat_blocked_model() -> ControlPolylines:
    """Hand-tuned flat pattern whose linkage motion expands some couplings
    and contracts others (found by seeded search, then frozen)."""
    return ControlPolylines(
        trajectory=np.array([
            [2.2794, 0.0, 0.0],
            [1.4506, 0.0, -1.2255],
            [0.2469, 0.0, 0.0233],
        ]),
        directions=np.array([
            [3.2794, 0.0, 0.0],
            [2.4506, 0.0, -1.2255],
            [1.2469, 0.0, 0.0233],
        ]),
        apex_z=np.array([-1.4902, -0.5691, 1.0873]),
        apex_signs=np.array([0, -1, 0]),
    )


def random_model(rng: np.random.Generator, max_m=4, max_n=5,
                 allow_minus=True) -> ControlPolylines:
    """A random valid model in general position.

    Multi-strip models use plus signs only so the whole bordered mesh stays
    a planar-quad surface (translated strips above a homology row cannot be
    planar); single-strip models draw random signs.  Rejects and retries on
    validation failure or equal-bar ties.
    """
    for _ in range(200):
        m = int(rng.integers(1, max_m + 1))
        n = int(rng.integers(2, max_n + 1))
        gaps = rng.uniform(math.radians(20), math.radians(65), m)
        thetas = np.concatenate([[0.0], np.cumsum(gaps)])
        if thetas[-1] > math.radians(170):
            continue
        r = rng.uniform(0.9, 2.4, m + 1)
        z = rng.uniform(-1.2, 1.2, m + 1)
        z[0] = 0.0
        if np.abs(z[1:]).max() < 0.1:
            continue  # nearly T-hedral
        spread = rng.uniform(0.7, 1.6, n)
        apex_z = np.concatenate([[0.0], np.cumsum(spread)])
        apex_z = (apex_z + rng.uniform(-2.0, -0.5)) * rng.choice([-1.0, 1.0])
        signs = np.zeros(n + 1, int)
        if m == 1 and allow_minus:
            signs[1:n] = rng.choice([1, -1], n - 1)
        else:
            signs[1:n] = 1

        axial_traj = np.stack([
            ri * np.array([math.cos(th), math.sin(th), 0.0]) + np.array([0, 0, zi])
            for ri, th, zi in zip(r, thetas, z)
        ])
        # avoid equal-bar ties at every column
        s0 = np.array([0, 0, apex_z[0]])
        s1 = np.array([0, 0, apex_z[1]])
        d0 = np.linalg.norm(axial_traj - s0, axis=1)
        d1 = np.linalg.norm(axial_traj - s1, axis=1)
        if np.abs(d0 - d1).min() < 5e-2:
            continue

        # shift columns 2.. off the axis to make the input general
        traj = axial_traj.copy()
        acc = np.zeros(3)
        ok = True
        for i in range(2, m + 1):
            u = axial_traj[i] - axial_traj[i - 1]
            nu = np.linalg.norm(u)
            if nu < 1e-9:
                ok = False
                break
            acc = acc + float(rng.uniform(-0.8, 0.8)) * u / nu
            traj[i] = axial_traj[i] + acc
        if not ok:
            continue
        dirs = np.stack([_dir_point(v, th) for v, th in zip(traj, thetas)])
        cp = ControlPolylines(traj, dirs, apex_z, signs)
        report = validate(cp)
        if not report.ok:
            continue
        try:
            model, _ = construct(cp)
            plan = build_plan(model)
            interval = flexion_limits(plan, samples=256)
        except PhedraError:
            continue
        if interval.length < 1e-3:
            continue
        return cp
    raise RuntimeError("random model generation failed to converge")
