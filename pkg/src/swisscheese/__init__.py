"""Swiss-cheese disc families with numerically certified inequalities.

Construct and transform families of deleted discs in the closed unit disc
(square-root transforms, road-runner generators, annulus filters, affine
copies), compute Browder sums with certified truncation tails, evaluate
Taylor functionals on rational functions, and run property suites that
emit reproducible certificates.

Default working precision is 128 bits (configurable via
``swisscheese.numeric.set_precision``).
"""

from .numeric import DEFAULT_PRECISION_BITS, PreconditionError, set_precision, working_precision
from .geometry import Disc, SqrtDiscPair, affine_disc, s_dist, sqrt_disc
from .families import (
    CheeseSpec,
    DiscFamily,
    ParametricTail,
    affine_family,
    annulus_filter,
    check_disjoint_copies,
    family_from_json,
    family_to_json,
    load_family,
    merge_families,
    road_runner,
    save_family,
    sqrt_family,
    sqrt_membership,
    synthetic_budget_family,
    validate_cheese,
)
from .browder import (
    BrowderReport,
    browder_sum,
    infinite_order_estimate,
    monotone_order_check,
    road_runner_tail,
    sqrt_decrease_check,
)
from .rational import (
    FunctionalSample,
    PoleEvaluationError,
    RationalFunction,
    TheoremViolationError,
    browder_norm_experiment,
    compose_square,
    delta_descent_check,
    descend_even,
    even_part,
    evaluate,
    relation_delta_shift,
    road_runner_witness,
    sup_norm_estimate,
    taylor_coefficient_contour,
    taylor_functional,
)
from .verify import Certificate, render_figure, render_svg, run_suite, toy_seed_family

set_precision(DEFAULT_PRECISION_BITS)

__all__ = [
    "BrowderReport",
    "Certificate",
    "CheeseSpec",
    "Disc",
    "DiscFamily",
    "FunctionalSample",
    "ParametricTail",
    "PoleEvaluationError",
    "PreconditionError",
    "RationalFunction",
    "SqrtDiscPair",
    "TheoremViolationError",
    "affine_disc",
    "affine_family",
    "annulus_filter",
    "browder_norm_experiment",
    "browder_sum",
    "check_disjoint_copies",
    "compose_square",
    "delta_descent_check",
    "descend_even",
    "evaluate",
    "even_part",
    "family_from_json",
    "family_to_json",
    "infinite_order_estimate",
    "load_family",
    "merge_families",
    "monotone_order_check",
    "relation_delta_shift",
    "render_figure",
    "render_svg",
    "road_runner",
    "road_runner_tail",
    "road_runner_witness",
    "run_suite",
    "s_dist",
    "save_family",
    "set_precision",
    "sqrt_disc",
    "sqrt_decrease_check",
    "sqrt_family",
    "sqrt_membership",
    "sup_norm_estimate",
    "synthetic_budget_family",
    "taylor_coefficient_contour",
    "taylor_functional",
    "toy_seed_family",
    "validate_cheese",
    "working_precision",
]
