"""Shared load/construct/plan bundle used by the CLI and the service."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import check_isometry, check_planarity
from .construction import (
    AxialModel,
    ControlPolylines,
    PHedronMesh,
    ValidationReport,
    construct,
    validate,
)
from .deformation import (
    DeformationPlan,
    FlexionInterval,
    FlexState,
    build_plan,
    flexion_limits,
    general_state_at,
    state_mesh,
    switch_branch,
)
from .errors import NotALimit
from .model_io import parse_model


@dataclass
class ModelBundle:
    cp: ControlPolylines
    model: AxialModel
    mesh: PHedronMesh
    plan: DeformationPlan
    interval: FlexionInterval
    report: ValidationReport

    @property
    def classification(self) -> str:
        if self.model.is_flat():
            return "flat"
        return self.mesh.classification

    def branch_for(self, flips) -> np.ndarray:
        branch = self.plan.branch.copy()
        for i in flips:
            if i < 1 or i > self.plan.m:
                raise NotALimit(f"strip {i} does not exist")
            branch[i] = -branch[i]
        return branch

    def interval_for(self, flips) -> FlexionInterval:
        if not flips:
            return self.interval
        return flexion_limits(self.plan, self.branch_for(flips),
                              samples=self.cp.options.samples)

    def state_at(self, t: float, flips=()) -> FlexState:
        return general_state_at(self.plan, t, self.branch_for(flips))

    def diagnostics(self, state: FlexState) -> dict:
        mesh = state_mesh(state, self.mesh.classification)
        return {
            "max_isometry_deviation": check_isometry(state, self.mesh),
            "max_planarity_defect": check_planarity(mesh),
            "tangent_strips": list(state.tangent_strips),
        }


def assemble(cp: ControlPolylines) -> ModelBundle:
    """Construct, plan and bracket a validated model."""
    report = validate(cp, allow_flat=True)
    if not report.ok:
        raise ValueError("assemble() requires a validated model")
    model, mesh = construct(cp)
    plan = build_plan(model)
    interval = flexion_limits(plan, samples=cp.options.samples)
    return ModelBundle(cp=cp, model=model, mesh=mesh, plan=plan,
                       interval=interval, report=report)


def load(text: str):
    """Parse model text into a bundle, or return the ValidationReport."""
    parsed = parse_model(text)
    if isinstance(parsed, ValidationReport):
        return parsed
    return assemble(parsed)
