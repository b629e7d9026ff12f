"""Farthest-point structures, set metrics, and rotundity diagnostics in
finite-dimensional normed spaces.

The toolkit computes farthest radii and almost-farthest sets, their
nearest-side mirrors, metrics between finite point sets (diameter,
generalized diameter, Hausdorff and infimal distance), and turns the decay
of almost-farthest sets on sampled unit spheres into finite-sample
consistency verdicts for rotund, locally uniformly rotund, and uniformly
rotund behavior.
"""

from ._version import __version__
from .errors import (
    DimensionMismatch,
    RemotalError,
    SamplingFloorError,
    ValidationError,
)
from .norms import NormSpec, norm_eval, norm_values, normalize
from .sets import (
    PointSet,
    Provenance,
    Scheme,
    sample_ball,
    sample_sphere,
    sampling_error_estimate,
    sampling_floor,
    scale_set,
    translate_set,
    union_sets,
)
from .farthest import (
    FarthestResult,
    NearestResult,
    almost_farthest_set,
    farthest_radius,
    maximizing_sequence,
    nearest_radius,
    nearly_nearest_set,
    polyhedral_farthest_radius,
)
from .setmetrics import (
    MetricValue,
    diameter,
    generalized_diameter,
    hausdorff_distance,
    infimal_distance,
)
from .diagnostics import (
    DecayProfile,
    ProfileRow,
    Thresholds,
    Verdict,
    chebyshev_profile,
    classify,
    gd_identity_profile,
    gd_normalization_bound_check,
    q_decay_profile,
    uniform_decay_profile,
    unique_remotality_check,
)
from .propcheck import (
    PropertyCase,
    check_containment_cont,
    check_farclose,
    check_gd_axioms,
    check_qf_algebra,
    check_union_lemma,
    default_palette,
)
from .harness import (
    ExperimentConfig,
    Report,
    ReproRow,
    reproduce_linf_r2,
    run_experiment,
    run_property_suite,
)

__all__ = [
    "__version__",
    "RemotalError",
    "ValidationError",
    "DimensionMismatch",
    "SamplingFloorError",
    "NormSpec",
    "norm_eval",
    "norm_values",
    "normalize",
    "PointSet",
    "Provenance",
    "Scheme",
    "sample_sphere",
    "sample_ball",
    "translate_set",
    "scale_set",
    "union_sets",
    "sampling_error_estimate",
    "sampling_floor",
    "FarthestResult",
    "NearestResult",
    "farthest_radius",
    "almost_farthest_set",
    "nearest_radius",
    "nearly_nearest_set",
    "maximizing_sequence",
    "polyhedral_farthest_radius",
    "MetricValue",
    "diameter",
    "generalized_diameter",
    "hausdorff_distance",
    "infimal_distance",
    "DecayProfile",
    "ProfileRow",
    "Thresholds",
    "Verdict",
    "q_decay_profile",
    "uniform_decay_profile",
    "unique_remotality_check",
    "gd_identity_profile",
    "gd_normalization_bound_check",
    "chebyshev_profile",
    "classify",
    "PropertyCase",
    "check_qf_algebra",
    "check_union_lemma",
    "check_containment_cont",
    "check_farclose",
    "check_gd_axioms",
    "default_palette",
    "ExperimentConfig",
    "Report",
    "ReproRow",
    "run_experiment",
    "reproduce_linf_r2",
    "run_property_suite",
]
