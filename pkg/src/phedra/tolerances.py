"""Central numeric tolerances.

Values are absolute for quantities of order one (models are desk scale);
checks that depend on model size multiply by the model's scale explicitly.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    incidence: float = 1e-9            # point-on-plane checks, scaled by 1+|p|
    homogeneous_weight: float = 1e-12  # affine-chart cutoff for homology images
    planarity: float = 1e-8            # normalized tetrahedral volume per quad
    isometry: float = 1e-8             # relative edge-length drift
    cone_apex: float = 1e-9            # apex-to-edge-line distance, scaled
    parallelism: float = 1e-10         # angular deviation in radians
    tangent: float = 1e-12             # |discriminant| treated as a limit
    root: float = 1e-12                # bisection tolerance (value and parameter)
    rank: float = 1e-9                 # relative singular-value cutoff
    closure: float = 1e-9              # tube closure at the reference state
    closure_sweep: float = 1e-8        # tube closure along the flex
    nonexpansion: float = 1e-10        # coupling-rate sign test, scaled
    tie: float = 1e-9                  # equal-bar detection, scaled
    samples: int = 512                 # discriminant sampling density

    def with_(self, **kwargs) -> "Tolerances":
        return replace(self, **kwargs)


DEFAULT = Tolerances()
