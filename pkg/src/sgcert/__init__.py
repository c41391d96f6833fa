"""Scaled-graph region certification toolkit for LTI feedback stability.

Compute scaled-graph point clouds of LTI systems, certify their containment
in circular (multiplier) and conic regions, and certify L2 stability of
feedback loops via closed-form region separation, with a time-domain
Monte-Carlo oracle for validation.
"""

from .lti import (
    HurwitzResult,
    RationalEntry,
    RationalMatrixTF,
    StateSpace,
    evaluate_tf,
    freq_response,
    freq_response_grid,
    hermitian_part,
    is_hurwitz,
    preset_ss,
    preset_tf,
    realize,
    system_from_json,
    system_to_json,
)
from .regions import (
    BkQuadratic,
    ConicRegion,
    ConicTheta,
    Disk,
    EmptyRegion,
    ExteriorDisk,
    FullRegion,
    HalfPlane,
    JSpectralFactor,
    MultiplierPi,
    RegionGeom,
    bk_inverse,
    bk_map,
    bk_quadratic,
    containment_margin,
    curvature_numerator,
    invert_region,
    is_h_convex,
    is_indefinite,
    is_positive_negative,
    j_spectral_factor,
    membership,
    multiplier_of_region,
    negate_region,
    pi_exterior,
    pi_interior,
    region_area,
    region_distance,
    region_from_json,
    region_of_multiplier,
    region_to_json,
    scale_region,
)
from .sg import (
    FrequencyGrid,
    GainPhasePoint,
    SgCloud,
    cloud_diameter,
    cloud_distance,
    export_csv,
    gain_phase,
    h_convex_hull,
    import_csv,
    invert_cloud,
    sg_matrix_sample,
    sg_system_sample,
)
from .lmi import (
    CertResult,
    LmiProblem,
    assemble_lmi,
    certify_circle,
    certify_multiplier,
    fit_min_circle,
    outer_factor,
    solve_feasibility,
)
from .conic import (
    ConicCertificate,
    QEvaluator,
    certify_conic,
    ellipse_theta,
    fit_conic,
    q_matrix,
)
from .stability import (
    StabilityReport,
    certify_feedback,
    hard_margin,
    soft_homotopy_sweep,
)
from .oracle import (
    DiscreteSim,
    EquivalenceReport,
    HardSamplePoint,
    SampledSignal,
    discretize,
    equivalence_trial,
    factorization_identity_check,
    iqc_quadrature,
    sample_hard_sg,
    simulate,
)
from .bench import build_bench_system, bench_multiplier, run_bench

__version__ = "0.1.0"
