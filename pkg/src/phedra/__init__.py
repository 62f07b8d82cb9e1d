"""phedra: continuous-flexible planar-quad surfaces from three control polylines.

Construction of the quad mesh, its exact isometric deformation with flexion
limits and branch switching, flat-pattern and tube analysis, plus a model
file format, OBJ export, a CLI and a small JSON service for interactive use.
"""

from .construction import (
    AxialModel,
    ControlPolylines,
    Options,
    PHedronMesh,
    TranslationLedger,
    ValidationReport,
    axialize,
    construct,
    deaxialize,
    extract_polylines,
    normalize_frame,
    propagate_rows,
    validate,
)
from .deformation import (
    DeformationPlan,
    FlexionInterval,
    FlexState,
    Limit,
    axial_state_at,
    build_plan,
    flexion_limits,
    general_state_at,
    linkage_chain_at,
    state_mesh,
    sweep,
    switch_branch,
    trajectory_point_at,
)
from .analysis import (
    LinkageVelocityField,
    NonExpansionVerdict,
    TubeReport,
    check_isometry,
    check_planarity,
    cone_apex_deviation,
    first_order_flex,
    non_expansion_check,
    tube_check,
)
from .geometry import (
    ApexTriple,
    PlanePoint,
    ProfilePlane,
    apex_map,
    axis_homology,
    central_scaling,
    from_plane_coords,
    to_plane_coords,
)
from .model_io import obj_string, parse_model, write_model, write_obj
from .tolerances import DEFAULT, Tolerances
from . import errors

__version__ = "0.1.0"
