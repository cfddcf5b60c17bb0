"""compnli: compositional NLI data generation, heuristic diagnostics, and baselines.

The package has three layers: corpus/lexicon I/O built on a shared
canonical tokenizer, a template generator for the three-way comparative
dataset, and diagnostics plus simple trainable baselines that expose how
far lexical heuristics go on NLI corpora.
"""

from .corpus import (
    LABEL_ORDER,
    TOKENIZER_VERSION,
    Corpus,
    Label,
    LabeledPair,
    Sentence,
    label_distribution,
    load_corpus,
    make_pair,
    save_corpus,
    tokenize,
)
from .diagnostics import (
    ConditionalStats,
    OverlapRanking,
    antonym_predicate,
    conditional_stats,
    has_antonym_pair,
    has_negation,
    high_overlap_subset,
    negation_differs,
    overlap_rate,
    pair_has_negation,
    rank_by_overlap,
    top_k_label_distribution,
)
from .errors import CompnliError, DataError, FormatError, NumericalError
from .generator import (
    ALL_PAIR_TYPES,
    ComparisonTriple,
    GeneratorConfig,
    PairType,
    default_config,
    default_pools,
    generate,
    load_pool,
    parse_triple_id,
    realize,
    split,
    token_rates,
    triple_id,
    vocab_diff,
)
from .lexicon import EmbeddingTable, Thesaurus, load_embeddings, load_thesaurus
from .models import (
    BowEncoder,
    ConfusionMatrix,
    EvalReport,
    HalfSplitEncoder,
    MlpNetwork,
    PairClassifier,
    SymmetryReport,
    TrainingLog,
    evaluate,
    finetune,
    load_classifier,
    make_encoder,
    mix,
    pair_features,
    save_classifier,
    symmetry_check,
    train,
    two_proportion_test,
)

__version__ = "0.1.0"

__all__ = [
    "LABEL_ORDER",
    "TOKENIZER_VERSION",
    "Corpus",
    "Label",
    "LabeledPair",
    "Sentence",
    "label_distribution",
    "load_corpus",
    "make_pair",
    "save_corpus",
    "tokenize",
    "ConditionalStats",
    "OverlapRanking",
    "antonym_predicate",
    "conditional_stats",
    "has_antonym_pair",
    "has_negation",
    "high_overlap_subset",
    "negation_differs",
    "overlap_rate",
    "pair_has_negation",
    "rank_by_overlap",
    "top_k_label_distribution",
    "CompnliError",
    "DataError",
    "FormatError",
    "NumericalError",
    "ALL_PAIR_TYPES",
    "ComparisonTriple",
    "GeneratorConfig",
    "PairType",
    "default_config",
    "default_pools",
    "generate",
    "load_pool",
    "parse_triple_id",
    "realize",
    "split",
    "token_rates",
    "triple_id",
    "vocab_diff",
    "EmbeddingTable",
    "Thesaurus",
    "load_embeddings",
    "load_thesaurus",
    "BowEncoder",
    "ConfusionMatrix",
    "EvalReport",
    "HalfSplitEncoder",
    "MlpNetwork",
    "PairClassifier",
    "SymmetryReport",
    "TrainingLog",
    "evaluate",
    "finetune",
    "load_classifier",
    "make_encoder",
    "mix",
    "pair_features",
    "save_classifier",
    "symmetry_check",
    "train",
    "two_proportion_test",
    "__version__",
]
