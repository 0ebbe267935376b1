"""truthline: data curation and evaluation for truthful headline generation.

The toolkit quantifies how truthful article-headline pairs and generated
headlines are (support score, entailment ratio), filters untruthful
supervision instances through a pluggable entailment scorer, and builds
self-training pseudo data so a filtered corpus regains its original size.
"""

from .annotate import AgreementReport, agreement, run_session
from .corpus import (
    AggregatedLabel,
    AnnotationRecord,
    CorpusStats,
    Instance,
    MajorityRule,
    SentenceSplitter,
    aggregate_votes,
    corpus_stats,
    entail_ratio,
    read_annotations,
    read_instances,
    write_instances,
)
from .entailment import (
    FEATURE_NAMES,
    EntailmentScore,
    LexicalFeatures,
    LexicalModel,
    LexicalScorer,
    ScorerBinding,
    build_scorer,
    classify,
    extract_features,
    load_model,
    save_model,
    score,
    train_lexical,
)
from .errors import (
    CorpusFormatError,
    DataError,
    DegenerateInputError,
    ProtocolViolationError,
    RemoteScorerError,
    ScorerError,
    TruthlineError,
)
from .heuristics import (
    HeuristicVerdict,
    NoiseFilterConfig,
    apply_noise_filters,
    check_byline_marks,
    check_content_overlap,
    check_punctuation,
)
from .metrics import (
    CorrelationResult,
    Histogram,
    RougeScore,
    SupportScore,
    histogram,
    lcs_length,
    pearson,
    rouge_l,
    rouge_n,
    support_score,
)
from .pipeline import (
    EvalReport,
    ExternalCommandGenerator,
    FilterReport,
    LeadTruncateGenerator,
    assemble_training_set,
    correlation_report,
    evaluate,
    filter_entailment,
    generate_pseudo,
    noise_filter,
)
from .remote import RemoteScorer
from .textkit import StopwordList, TokenizerConfig, content_tokens, default_stopwords, ngrams, tokenize

__version__ = "0.1.0"


def bundled_data_dir():
    """Directory holding the packaged data files (stopwords, toy corpus)."""
    from pathlib import Path

    return Path(__file__).resolve().parent / "data"
