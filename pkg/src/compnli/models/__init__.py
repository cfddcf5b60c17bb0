"""Sentence-pair models: encoders, the MLP head, training and evaluation."""

from .classifier import (
    MODEL_FORMAT_VERSION,
    ConfusionMatrix,
    EvalReport,
    PairClassifier,
    SymmetryReport,
    TrainingLog,
    TypeEval,
    evaluate,
    finetune,
    load_classifier,
    save_classifier,
    symmetry_check,
    train,
)
from .encoders import (
    COMBINERS,
    ENCODER_KINDS,
    BowEncoder,
    HalfSplitEncoder,
    make_encoder,
    pair_features,
)
from .mixing import mix
from .network import MlpNetwork, softmax
from .stats import ProportionTest, two_proportion_test

__all__ = [
    "MODEL_FORMAT_VERSION",
    "ConfusionMatrix",
    "EvalReport",
    "PairClassifier",
    "SymmetryReport",
    "TrainingLog",
    "TypeEval",
    "evaluate",
    "finetune",
    "load_classifier",
    "save_classifier",
    "symmetry_check",
    "train",
    "COMBINERS",
    "ENCODER_KINDS",
    "BowEncoder",
    "HalfSplitEncoder",
    "make_encoder",
    "pair_features",
    "mix",
    "MlpNetwork",
    "softmax",
    "ProportionTest",
    "two_proportion_test",
]
