"""Decide whether a developed pattern can actually fold.

When every profile plane collapses into one plane, all branch limits meet
at the reference parameter and the generic argument for a real flex breaks
down.  First-order analysis of the collapsed linkage plus the coupling
non-expansion criterion separates foldable patterns from blocked ones.
"""

import numpy as np

from phedra import (
    build_plan,
    construct,
    first_order_flex,
    general_state_at,
    non_expansion_check,
)
from phedra.errors import ComplexBranch

import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "tests"))
from fixtures import flat_blocked_model, flat_parallelogram_model  # noqa: E402

for name, cp in (("parallelogram pattern", flat_parallelogram_model()),
                 ("hand-built blocked pattern", flat_blocked_model())):
    model, mesh = construct(cp)
    field = first_order_flex(model)
    verdict = non_expansion_check(field, model)
    print(f"{name}: verdict = {verdict.verdict}")
    print("  coupling rates:", np.round(verdict.coupling_rates, 4).tolist())

    if verdict.verdict != "flexes":
        # the verdict grades the linkage's own first-order motion; a pattern
        # may still fold through a mode that leaves the linkage stationary
        continue
    plan = build_plan(model)
    for dt in (+1e-3, -1e-3):
        try:
            state = general_state_at(plan, plan.t_star + dt)
            lift = np.abs(state.vertices[:, :, 1]).max()
            print(f"  finite fold at t*{dt:+.0e}: lifts {lift:.4f} out of plane")
            break
        except ComplexBranch:
            print(f"  no real fold at t*{dt:+.0e}")
