"""Corpus augmentation and quality metrics for spoken GEC data."""

__version__ = "0.1.0"

from .alignment import EditOp, EditScript, align_tokens, project_anchor
from .disfluency import AnchorMap, reinsert_disfluencies, strip_disfluencies
from .edits import (
    GrammaticalEdit,
    ScoreTriple,
    classify_edit,
    error_distribution,
    extract_edits,
    new_error_rate,
    score_edits,
)
from .inject import InjectionConfig, calibrate_injector, inject_errors
from .manifest import (
    DisfluencySpan,
    Manifest,
    UtteranceRecord,
    read_manifest,
    validate_record,
    write_manifest,
)
from .metrics import (
    CorrelationReport,
    DistanceSummary,
    SpeakerDistanceRecord,
    WerBreakdown,
    calibrate_per_part,
    correlation_stats,
    cosine_distance,
    distance_summary,
    ensemble_scores,
    filter_by_distance,
    wer,
)
from .pipeline import StagePlan, StageSpec, assemble_dataset, run_pipeline
