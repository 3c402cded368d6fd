"""agreekit: inter-annotator agreement analytics for labeling pipelines.

Computes percent agreement, Cohen's kappa, Fleiss's kappa, and
Krippendorff's alpha (nominal) over multi-annotator label grids with missing
cells, flags low-quality annotators from pairwise-agreement matrices, and
ranks document classes by difficulty from per-class agreement profiles.

The coefficient kernels run on a compiled extension when available, with a
numpy fallback selected at import; see :func:`backend_info`.
"""

from ._backend import backend_info
from .difficulty import (
    BaselineRecord,
    BaselineRegistry,
    DifficultyRanking,
    PilotReport,
    RankEntry,
    TierBoundaries,
    forecast_pilot,
    load_registry,
    rank_difficulty,
    registry_upsert,
    save_registry,
)
from .errors import (
    AgreeKitError,
    ConfigError,
    DuplicateAssignment,
    EmptyDataset,
    EmptyField,
    EmptySlice,
    FewerThanTwoAnnotators,
    InsufficientPairs,
    MalformedLine,
    NoPairableUnits,
    NoRankableClasses,
    ParseError,
    UnknownAnnotator,
    UnknownLabel,
)
from .metrics import (
    AgreementProfile,
    CoincidenceMatrix,
    ConfusionTable,
    bootstrap_ci,
    cohen_kappa,
    coincidence_matrix,
    confusion_table,
    fleiss_kappa,
    krippendorff_alpha,
    profile,
)
from .model import (
    AnnotationRecord,
    LabelSpace,
    ReliabilityData,
    UnitKey,
    build_reliability_matrix,
    parse_records,
    serialize_records,
)
from .simulate import SimulationSpec, generate, reference_metrics
from .workers import (
    PairwiseMatrix,
    WorkerFlagReport,
    WorkerStatus,
    class_summary,
    flag_workers,
    pairwise_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AgreementProfile",
    "AgreeKitError",
    "AnnotationRecord",
    "BaselineRecord",
    "BaselineRegistry",
    "CoincidenceMatrix",
    "ConfigError",
    "ConfusionTable",
    "DifficultyRanking",
    "DuplicateAssignment",
    "EmptyDataset",
    "EmptyField",
    "EmptySlice",
    "FewerThanTwoAnnotators",
    "InsufficientPairs",
    "LabelSpace",
    "MalformedLine",
    "NoPairableUnits",
    "NoRankableClasses",
    "PairwiseMatrix",
    "ParseError",
    "PilotReport",
    "RankEntry",
    "ReliabilityData",
    "SimulationSpec",
    "TierBoundaries",
    "UnitKey",
    "UnknownAnnotator",
    "UnknownLabel",
    "WorkerFlagReport",
    "WorkerStatus",
    "backend_info",
    "bootstrap_ci",
    "build_reliability_matrix",
    "class_summary",
    "cohen_kappa",
    "coincidence_matrix",
    "confusion_table",
    "fleiss_kappa",
    "flag_workers",
    "forecast_pilot",
    "generate",
    "krippendorff_alpha",
    "load_registry",
    "pairwise_matrix",
    "parse_records",
    "profile",
    "rank_difficulty",
    "reference_metrics",
    "registry_upsert",
    "save_registry",
    "serialize_records",
]
