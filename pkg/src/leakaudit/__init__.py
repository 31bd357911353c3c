"""leakaudit: formal privacy-leakage auditing of Boolean decision processes."""

__version__ = "0.1.0"

from .audit import (
    Auditor,
    AuditStats,
    IndividualVerdict,
    IterationCapExceeded,
    ModelVerdict,
    audit_individual,
    audit_model,
    lppae_applies,
)
from .bridge import OracleFailure, QueryConstraints, SatContext
from .core import (
    DecisionModel,
    FeatureSpace,
    FormulaModel,
    Individual,
    LiteralSet,
    ModelError,
    ProfilePartition,
    ThresholdModel,
    ThresholdUnit,
    TreeModel,
    evaluate,
    literals_of,
    render_literals,
    restrict,
    satisfies,
    validate_model,
)
from .encoding import CapacityError, CnfEncoding, encode, write_dimacs
from .explain import Explanation, classify_explanation, is_fully_open, minimal_explanation
from .genbench import QbfInstance, ShapeParams, from_qbf, parse_qbf, random_model
from .interchange import ParseError, parse_model, serialize_model
from .oracle import (
    BudgetError,
    OracleBudget,
    bf_enumerate_min_explanations,
    bf_individual_leaks,
    bf_model_leaks,
)

__all__ = [name for name in dir() if not name.startswith("_")]
