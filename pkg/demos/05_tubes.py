"""Closed column chains: rigid-foldable tubes.

With five apexes a column chain can close onto itself and stay closed for
the whole flex, but only as a parallelogram (a prismatic tube) or an
anti-parallelogram whose symmetry line is orthogonal to the axis.
"""

import numpy as np

from phedra import build_plan, construct, flexion_limits, tube_check
from phedra.deformation import axial_state_at

import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "tests"))
from fixtures import (  # noqa: E402
    antiparallelogram_tube_model,
    parallelogram_tube_model,
    reference_model,
)

for name, cp in (("parallelogram tube", parallelogram_tube_model()),
                 ("anti-parallelogram tube", antiparallelogram_tube_model()),
                 ("open reference surface", reference_model())):
    model, _ = construct(cp)
    rep = tube_check(model)
    print(f"{name}: closed={rep.closed} class={rep.tube_class} "
          f"symmetry_ok={rep.symmetry_ok}")
    if rep.sampled_max_error is not None:
        print(f"  closure drift across the flex: {rep.sampled_max_error:.2e}")

# watch the parallelogram loop stay a parallelogram while flexing
model, _ = construct(parallelogram_tube_model())
plan = build_plan(model)
interval = flexion_limits(plan)
print("\nparallelogram loop vertices during the flex:")
for t in np.linspace(interval.t_lambda + 1e-3, interval.t_mu - 1e-3, 4):
    st = axial_state_at(plan, float(t))
    loop = st.axial_grid[0, :4]
    side_a = loop[1] - loop[0]
    side_b = loop[2] - loop[3]
    print(f"  t={t: .3f}: opposite sides parallel to "
          f"{np.abs(side_a - side_b).max():.2e}")
