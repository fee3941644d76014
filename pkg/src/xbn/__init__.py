"""Explainable Bayesian network toolkit.

Discrete networks with exact inference, reasoning classification,
evidence explanations (MPE, MAP, MRE with generalised Bayes factors),
threshold decisions with same-decision probability, a question router
with narrative reports, and CLI / HTTP front ends.
"""

from .decision import (
    DecisionOutcome,
    DecisionSpec,
    SdpBranch,
    SdpResult,
    decide,
    make_decision_spec,
    sdp,
)
from .dsep import d_separated
from .errors import (
    BifParseError,
    CycleError,
    ImpossibleEvidenceError,
    ImpossibleExplanationError,
    JsonSchemaError,
    NetworkValidationError,
    QueryError,
    SearchSpaceError,
    UnknownStateError,
    UnknownVariableError,
    VacuousExplanationError,
    XbnError,
)
from .evidence import Explanation, ExplanationRanking, gbf, map_query, mpe, mre
from .factors import Factor
from .formats import (
    builtin_asia,
    parse_bif,
    parse_network_json,
    write_bif,
    write_network_json,
)
from .inference import (
    Posterior,
    enumerate_distribution,
    evidence_probability,
    joint_probability,
    posterior,
)
from .model import (
    BayesianNetwork,
    Cpt,
    Variable,
    build_network,
    networks_equivalent,
    topological_order,
)
from .reasoning import (
    BeliefChangeReport,
    ExplainingAwayReport,
    ReasoningKind,
    belief_change,
    classify_query,
    explaining_away,
)
from .router import ExplanationReport, MethodPlan, QuestionKind, QuestionSpec, explain, route

__version__ = "0.1.0"

__all__ = [
    "BayesianNetwork",
    "BeliefChangeReport",
    "BifParseError",
    "Cpt",
    "CycleError",
    "DecisionOutcome",
    "DecisionSpec",
    "ExplainingAwayReport",
    "Explanation",
    "ExplanationRanking",
    "ExplanationReport",
    "Factor",
    "ImpossibleEvidenceError",
    "ImpossibleExplanationError",
    "JsonSchemaError",
    "MethodPlan",
    "NetworkValidationError",
    "Posterior",
    "QueryError",
    "QuestionKind",
    "QuestionSpec",
    "ReasoningKind",
    "SdpBranch",
    "SdpResult",
    "SearchSpaceError",
    "UnknownStateError",
    "UnknownVariableError",
    "VacuousExplanationError",
    "Variable",
    "XbnError",
    "belief_change",
    "build_network",
    "builtin_asia",
    "classify_query",
    "d_separated",
    "decide",
    "enumerate_distribution",
    "evidence_probability",
    "explain",
    "explaining_away",
    "gbf",
    "joint_probability",
    "make_decision_spec",
    "map_query",
    "mpe",
    "mre",
    "networks_equivalent",
    "parse_bif",
    "parse_network_json",
    "posterior",
    "route",
    "sdp",
    "topological_order",
    "write_bif",
    "write_network_json",
]
