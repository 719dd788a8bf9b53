"""Numerical toolkit for asymptotic L_p spaces.

Functions live on rational grids with optional power-law tails; the
central quantity is the clamped norm ``||min(|f|, 1)||_p``, which metrizes
a complete, non-locally-convex function space containing every L_p.  The
package provides exact quadrature for piecewise-constant data, translation
and truncation operators, checkable total-boundedness conditions with
witness search, constructive covering nets, and certificates for the
bounded-domain corollary.
"""

from .grid import (
    GridError,
    IncompatibleGridsError,
    NotInSpaceError,
    FractionLike,
    as_fraction,
    fraction_gcd,
    TailSpec,
    ZERO_TAIL,
    GridFunction,
    grid_function,
    constant,
    sample,
    indicator,
    add,
    subtract,
    MeasurableSet,
    power_tail_integral,
    clamped_power_tail_integral,
)
from .quadrature import (
    AbsPower,
    ClampPower,
    Threshold,
    Outside,
    Window,
    integrate_transformed,
    difference_integral,
    translation_defect,
    translation_defect_bounds,
    superlevel_measure,
    superlevel_set,
)
from .norms import (
    NormParams,
    ConvergenceReport,
    lp_norm,
    alpha_norm,
    lp_distance,
    alpha_distance,
    alpha_converges,
)
from .operators import (
    MisalignedShiftError,
    translate,
    truncate,
    clamp_unit,
    scale,
)
from .families import (
    FamilySpec,
    default_phi,
    family_f,
    family_g,
    rademacher,
    family_u,
    family_v,
    v_limit_distance,
    f_family,
    g_family,
    h_family,
    u_family,
    v_family,
    lipschitz_family,
    spike_family,
    FAMILY_BUILDERS,
    parse_family,
)
from .criteria import (
    ShiftLattice,
    ConditionOutcome,
    ConditionReport,
    check_tail,
    check_translation,
    check_level,
    check_kr_lp,
    full_report,
)
from .nets import (
    EpsNet,
    CoveringCheck,
    LevelConditionError,
    pairwise_distances,
    greedy_net,
    verify_covering,
    covering_profile,
    truncation_lift_net,
)
from .bounded import (
    ExceptionalSet,
    BoundednessCertificate,
    EquicontinuityCertificate,
    CorollaryRow,
    CorollaryReport,
    convergence_in_measure,
    almost_equibounded_certificate,
    almost_equicontinuity_certificate,
    corollary_crosscheck,
    symmetric_difference_decay,
)
from .io import (
    function_to_dict,
    function_from_dict,
    family_to_dict,
    family_from_dict,
    report_to_dict,
    net_to_dict,
    save_json,
    load_json,
    load_function,
    load_family,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # grid
    "GridError",
    "IncompatibleGridsError",
    "NotInSpaceError",
    "FractionLike",
    "as_fraction",
    "fraction_gcd",
    "TailSpec",
    "ZERO_TAIL",
    "GridFunction",
    "grid_function",
    "constant",
    "sample",
    "indicator",
    "add",
    "subtract",
    "MeasurableSet",
    "power_tail_integral",
    "clamped_power_tail_integral",
    # quadrature
    "AbsPower",
    "ClampPower",
    "Threshold",
    "Outside",
    "Window",
    "integrate_transformed",
    "difference_integral",
    "translation_defect",
    "translation_defect_bounds",
    "superlevel_measure",
    "superlevel_set",
    # norms
    "NormParams",
    "ConvergenceReport",
    "lp_norm",
    "alpha_norm",
    "lp_distance",
    "alpha_distance",
    "alpha_converges",
    # operators
    "MisalignedShiftError",
    "translate",
    "truncate",
    "clamp_unit",
    "scale",
    # families
    "FamilySpec",
    "default_phi",
    "family_f",
    "family_g",
    "rademacher",
    "family_u",
    "family_v",
    "v_limit_distance",
    "f_family",
    "g_family",
    "h_family",
    "u_family",
    "v_family",
    "lipschitz_family",
    "spike_family",
    "FAMILY_BUILDERS",
    "parse_family",
    # criteria
    "ShiftLattice",
    "ConditionOutcome",
    "ConditionReport",
    "check_tail",
    "check_translation",
    "check_level",
    "check_kr_lp",
    "full_report",
    # nets
    "EpsNet",
    "CoveringCheck",
    "LevelConditionError",
    "pairwise_distances",
    "greedy_net",
    "verify_covering",
    "covering_profile",
    "truncation_lift_net",
    # bounded
    "ExceptionalSet",
    "BoundednessCertificate",
    "EquicontinuityCertificate",
    "CorollaryRow",
    "CorollaryReport",
    "convergence_in_measure",
    "almost_equibounded_certificate",
    "almost_equicontinuity_certificate",
    "corollary_crosscheck",
    "symmetric_difference_decay",
    # io
    "function_to_dict",
    "function_from_dict",
    "family_to_dict",
    "family_from_dict",
    "report_to_dict",
    "net_to_dict",
    "save_json",
    "load_json",
    "load_function",
    "load_family",
]
