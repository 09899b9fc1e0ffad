"""Expert-elicited Bayesian networks for power grid capacity and scenario analysis."""

from .errors import (
    CycleError,
    EvidenceError,
    ImpossibleEvidenceError,
    ModelError,
    SurveyError,
)
from .model import (
    ExplicitCpt,
    Layer,
    Network,
    Node,
    NoisyOrParams,
    ValidationReport,
    ValueMap,
    dump_network,
    is_auxiliary,
    load_network,
    state_value,
    topological_order,
    validate,
)
from .noisy_or import DivorcePlan, compile_noisy_or, divorce, noisy_or_probability
from .inference import (
    Evidence,
    PosteriorSet,
    enumerate_posteriors,
    joint_probability,
    posterior,
)
from .elicitation import (
    AggregationPolicy,
    CONFIDENCE_WEIGHTED,
    ExpertResponse,
    NetworkLayout,
    UNIFORM,
    aggregate_capacity,
    assemble_network,
    build_cpt,
    build_ici_params,
    load_layout,
    load_survey,
    top_factors,
)
from .optimize import (
    CostTable,
    OptimizationPlan,
    OptimizationStep,
    impact,
    load_costs,
    optimize,
    plan_report,
)
from .reports import (
    AvailabilityProfile,
    ClassificationRules,
    availability,
    bucket_sums,
    capacity_table,
    load_profile,
    load_rules,
    scenario_summary,
)

__version__ = "0.1.0"
