"""Build a flexible quad surface from its three control polylines.

The three inputs are a trajectory polyline (one base vertex per profile
plane), a direction polyline fixing each plane's horizontal direction, and
an apex polyline of signed heights on the z-axis.  Construction translates
every plane onto the axis, grows the vertex rows by the per-apex maps, and
translates the columns back.
"""

import math
import os

import numpy as np

from phedra import construct, validate
from phedra.construction import ControlPolylines
from phedra.model_io import write_obj

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

# a three-plane model: planes at 0, 60 and 110 degrees; the third column is
# deliberately shifted off the axis pencil so the input is "general"
theta = [0.0, math.radians(60), math.radians(110)]
e = [np.array([math.cos(t), math.sin(t), 0.0]) for t in theta]
trajectory = np.array([
    [2.0, 0.0, 0.0],
    1.5 * e[1] + [0, 0, 1.0],
    1.2 * e[2] + [0, 0, 0.3],
])
trajectory[2] += 0.5 * (trajectory[2] - trajectory[1]) / np.linalg.norm(
    trajectory[2] - trajectory[1]
)
directions = trajectory + np.array(e)

cp = ControlPolylines(
    trajectory=trajectory,
    directions=directions,
    apex_z=np.array([-1.0, 2.0, 4.0]),
    apex_signs=np.array([0, +1, 0]),
)

report = validate(cp)
print("validation:", "ok" if report.ok else report.violations)

model, mesh = construct(cp)
print(f"classification: {mesh.classification}")
print(f"quad faces: {len(mesh.faces)}")
print(f"max planarity defect: {mesh.planarity_defects.max():.2e}")
print("per-strip inverse translations:", np.round(model.ledger.magnitudes, 6))

path = os.path.join(OUT, "surface.obj")
write_obj(mesh, path)
print("wrote", path)
