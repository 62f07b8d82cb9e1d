"""Cross over to the mirror branch at a flexion limit.

At a limit the two continuations of a strip coincide, so the flex can
switch branches and travel back.  Returning to the reference parameter on
the other branch reproduces the same linkage data (apex heights, per-plane
chart coordinates) in a different spatial shape.
"""

import numpy as np

from phedra import (
    build_plan,
    construct,
    flexion_limits,
    general_state_at,
    switch_branch,
)

import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "tests"))
from fixtures import reference_model  # noqa: E402

model, mesh = construct(reference_model())
plan = build_plan(model)
interval = flexion_limits(plan)
limit = interval.limit_at(interval.t_lambda)
print(f"switching at t = {limit.t:.6f} (strips {list(limit.owners)})")

other = switch_branch(plan, interval, limit)

at_limit_a = general_state_at(plan, limit.t)
at_limit_b = general_state_at(other, limit.t)
print("states at the limit coincide:",
      np.abs(at_limit_a.vertices - at_limit_b.vertices).max())

back_a = general_state_at(plan, plan.t_star)
back_b = general_state_at(other, plan.t_star)
print("apex heights equal:", np.abs(back_a.apex_z - back_b.apex_z).max())
print("plane charts equal:", np.abs(back_a.chart_rz() - back_b.chart_rz()).max())
print("largest 3D vertex difference:",
      np.abs(back_a.vertices - back_b.vertices).max())
print("plane angles:", np.degrees(back_a.plane_angles()),
      "vs", np.degrees(back_b.plane_angles()))
