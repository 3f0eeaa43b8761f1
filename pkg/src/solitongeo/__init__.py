"""Extrinsic geometry engine and soliton-criteria verification suite.

Core layers: ``jets`` (second-order forward AD plus FD oracles),
``geometry`` (metric, normal frame, second fundamental form, curvature),
``position`` (tangential/normal position split and its identities),
``solitons`` (fits and classifiers over sample sets), ``catalog``
(closed-form surfaces with analytic expectations), ``runner`` (batch
verification and deterministic reports).  ``service`` exposes the runner
over HTTP and ``cli`` is a thin client for it.
"""

__version__ = "0.1.0"

from .catalog import CATALOG, Expectation, SurfaceSpec, expected, make_surface, sample_points
from .errors import (
    CodimensionError,
    ConfigError,
    DegeneratePointError,
    DomainError,
    GeometryError,
    IndeterminateVerdictError,
    NonFiniteError,
    SolitonFieldVanishesError,
)
from .geometry import (
    CurvatureSummary,
    MetricData,
    NormalFrame,
    SecondFundamentalForm,
    WeylTensor,
    hessian_scalar,
    induced_metric,
    normal_connection_derivative,
    normal_frame,
    riemann_via_gauss,
    second_fundamental_form,
    shape_operator,
    weyl_tensor,
)
from .jets import (
    ImmersionDef,
    ImmersionJet2,
    Jet2,
    directional_derivative_field,
    evaluate_jet2,
    finite_difference_jet2,
)
from .position import (
    IdentityReport,
    PositionSplit,
    lie_derivative_metric,
    split_position,
    tangent_covariant_derivative,
    verify_structural_identities,
)
from .runner import RunConfig, RunReport, parse_config, render_report, run
from .solitons import (
    ClassificationVerdict,
    SampleSet,
    SolitonFit,
    build_sample_set,
    classify,
    classify_position_type,
    classify_yamabe_hypersurface,
    conformal_flatness_check,
    normal_section_parallelism,
    quasi_umbilical_check,
    quasi_yamabe_fit,
    torse_forming_fit,
    yamabe_fit,
)

__all__ = [
    "__version__",
    "CATALOG",
    "Expectation",
    "SurfaceSpec",
    "expected",
    "make_surface",
    "sample_points",
    "GeometryError",
    "DomainError",
    "NonFiniteError",
    "DegeneratePointError",
    "SolitonFieldVanishesError",
    "CodimensionError",
    "IndeterminateVerdictError",
    "ConfigError",
    "Jet2",
    "ImmersionDef",
    "ImmersionJet2",
    "evaluate_jet2",
    "finite_difference_jet2",
    "directional_derivative_field",
    "MetricData",
    "NormalFrame",
    "SecondFundamentalForm",
    "CurvatureSummary",
    "WeylTensor",
    "induced_metric",
    "normal_frame",
    "second_fundamental_form",
    "shape_operator",
    "riemann_via_gauss",
    "weyl_tensor",
    "hessian_scalar",
    "normal_connection_derivative",
    "PositionSplit",
    "IdentityReport",
    "split_position",
    "tangent_covariant_derivative",
    "lie_derivative_metric",
    "verify_structural_identities",
    "SampleSet",
    "SolitonFit",
    "ClassificationVerdict",
    "build_sample_set",
    "yamabe_fit",
    "quasi_yamabe_fit",
    "classify_position_type",
    "classify_yamabe_hypersurface",
    "quasi_umbilical_check",
    "torse_forming_fit",
    "normal_section_parallelism",
    "conformal_flatness_check",
    "classify",
    "RunConfig",
    "RunReport",
    "parse_config",
    "run",
    "render_report",
]
