"""Economic toolkit for crimes against cultural-historical and
archaeological heritage.

Library modules:

- econ_core      offender decision rule and participation accounting
- crime_market   supply/demand curves, equilibrium, comparative statics
- valuation      total economic value with non-use components
- funnel         justice-pipeline analytics and detection-risk rubric
- microsim       agent-based oracle for the analytic supply curve
- scenario       counteraction alternatives and opportunity cost
- dataio         validated CSV ingestion
- config/report/cli/plots  run orchestration
"""

__version__ = "0.1.0"

from .econ_core import (  # noqa: F401
    CRRA,
    Decision,
    OffenderProfile,
    ParticipationStats,
    ReferencePoint,
    RiskNeutral,
    certainty_equivalent,
    decide_crime,
    net_expected_return,
    participation_decompose,
    utility_value,
)
from .crime_market import (  # noqa: F401
    DemandConstraint,
    Elasticities,
    EnforcementResponseParams,
    EquilibriumResult,
    SupplyCurveParams,
    enforcement_response,
    imprisonment_effect,
    solve_equilibrium,
    supply_cpp,
)
from .valuation import (  # noqa: F401
    Comparable,
    ComparableSource,
    DirectApproach,
    DirectValueInput,
    NonUseComponent,
    NonUseKind,
    SecondaryActivityLedger,
    SecondaryStream,
    SurveyResponse,
    TevBreakdown,
    additional_monetary_value,
    aggregate_wtp,
    direct_value,
    tev_total,
    tourism_baseline,
)
from .funnel import (  # noqa: F401
    CrimeCategory,
    DetectionRubric,
    FunnelRecord,
    StageRates,
    calibrate_rubric,
    detection_risk,
    registration_coverage,
    stage_rates,
)
from .microsim import (  # noqa: F401
    Constant,
    LogNormal,
    Logistic,
    PopulationSpec,
    SimResult,
    Uniform,
    enforcement_sweep,
    simulate_population,
)
from .scenario import (  # noqa: F401
    NetBenefitReport,
    ScenarioAlternative,
    ScenarioLevers,
    build_alternatives_from_model,
    evaluate_alternative,
    opportunity_cost,
)
