"""Sentence-pair classifier: encoder + feature combiner + MLP head.

Training is mini-batch gradient descent on cross-entropy with a
dev-gated schedule: multiplicative decay per epoch, divide-by-5
whenever dev accuracy drops, stop at a learning-rate floor or the epoch
cap.  Runs are bit-reproducible given the seed.
"""

from __future__ import annotations

import io
import json
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ..corpus import LABEL_ORDER, Corpus, Label
from ..errors import DataError, NumericalError
from ..generator import PairType, parse_triple_id
from ..lexicon import EmbeddingTable
from ..validation import as_corpus, as_sentence_pairs, check_nonempty
from .encoders import COMBINERS, ENCODER_KINDS, make_encoder, pair_features
from .network import MlpNetwork

LABEL_TO_INDEX = {label: i for i, label in enumerate(LABEL_ORDER)}

MODEL_FORMAT_VERSION = 1


@dataclass
class LogRow:
    epoch: int
    learning_rate: float
    train_accuracy: float
    dev_accuracy: float | None
    extra: dict[str, float] = field(default_factory=dict)


@dataclass
class TrainingLog:
    """Per-epoch record of the schedule and accuracies."""

    rows: list[LogRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def extra_columns(self) -> list[str]:
        names: set[str] = set()
        for row in self.rows:
            names.update(row.extra)
        return sorted(names)

    def to_tsv(self) -> str:
        extras = self.extra_columns()
        header = ["epoch", "learning_rate", "train_accuracy", "dev_accuracy"] + [
            f"{name}_accuracy" for name in extras
        ]
        lines = ["\t".join(header)]
        for row in self.rows:
            cells = [
                str(row.epoch),
                f"{row.learning_rate:.8g}",
                f"{row.train_accuracy:.6f}",
                "" if row.dev_accuracy is None else f"{row.dev_accuracy:.6f}",
            ]
            cells += [f"{row.extra[name]:.6f}" if name in row.extra else "" for name in extras]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"


class PairClassifier(BaseEstimator, ClassifierMixin):
    """NLI baseline: encode premise and hypothesis, combine, classify.

    Parameters
    ----------
    encoder : "bow" or "half_split"
    embeddings : EmbeddingTable backing the encoder (required to fit).
    hidden_units : width of the single rectifier hidden layer.
    learning_rate, lr_decay, lr_drop, lr_floor : schedule knobs; the rate
        decays multiplicatively each epoch and is divided by ``lr_drop``
        whenever dev accuracy drops; training stops below ``lr_floor``.
    max_epochs, batch_size : loop bounds.
    combiner : "full" for [u; v; |u-v|; u*v], "concat" for [u; v].
    encode_dtype : dtype of the cached sentence encodings ("float64" or
        "float32"; the network always computes in float64).
    seed : drives weight init and batch shuffling; same seed and data give
        bit-identical weights.

    Fitted attributes: ``network_``, ``log_``, ``classes_``,
    ``epochs_run_``, ``final_learning_rate_``.
    """

    def __init__(
        self,
        encoder: str = "bow",
        embeddings: EmbeddingTable | None = None,
        hidden_units: int = 512,
        learning_rate: float = 0.1,
        lr_decay: float = 0.99,
        lr_drop: float = 5.0,
        lr_floor: float = 1e-5,
        max_epochs: int = 20,
        batch_size: int = 64,
        combiner: str = "full",
        encode_dtype: str = "float64",
        seed: int = 0,
    ):
        self.encoder = encoder
        self.embeddings = embeddings
        self.hidden_units = hidden_units
        self.learning_rate = learning_rate
        self.lr_decay = lr_decay
        self.lr_drop = lr_drop
        self.lr_floor = lr_floor
        self.max_epochs = max_epochs
        self.batch_size = batch_size
        self.combiner = combiner
        self.encode_dtype = encode_dtype
        self.seed = seed

    # -- encoding ---------------------------------------------------------

    def _encoder(self):
        if self.encoder not in ENCODER_KINDS:
            raise ValueError(f"unknown encoder kind {self.encoder!r}; expected one of {ENCODER_KINDS}")
        if self.combiner not in COMBINERS:
            raise ValueError(f"unknown combiner {self.combiner!r}; expected one of {COMBINERS}")
        return make_encoder(self.encoder, self.embeddings)

    def _encode_pairs(self, pairs) -> tuple[np.ndarray, np.ndarray]:
        encoder = self._encoder()
        dtype = np.dtype(self.encode_dtype)
        premises = encoder.transform([p for p, _ in pairs]).astype(dtype, copy=False)
        hypotheses = encoder.transform([h for _, h in pairs]).astype(dtype, copy=False)
        return premises, hypotheses

    def _features(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return pair_features(u, v, combiner=self.combiner).astype(np.float64, copy=False)

    @property
    def feature_dimension(self) -> int:
        blocks = 4 if self.combiner == "full" else 2
        return blocks * self._encoder().output_dimension

    # -- training ---------------------------------------------------------

    def fit(self, X, y=None, dev=None, monitor: Mapping[str, object] | None = None, init_network: MlpNetwork | None = None):
        """Train on a corpus (or sequence of LabeledPair).

        ``dev`` drives the divide-by-5 schedule rule and is evaluated each
        epoch; ``monitor`` maps extra names to corpora whose accuracy is
        logged each epoch (used to expose forgetting during fine-tuning);
        ``init_network`` warm-starts from existing weights (fine-tuning).
        """
        if y is not None:
            raise ValueError("gold labels are read from the pairs themselves; pass y=None")
        corpus = as_corpus(X)
        check_nonempty(corpus, "training corpus")
        pairs, labels = _pairs_and_labels(corpus)
        u, v = self._encode_pairs(pairs)
        if not np.any(u) and not np.any(v):
            raise DataError("embeddings cover none of the training vocabulary")
        y_index = np.array([LABEL_TO_INDEX[label] for label in labels])

        dev_data = None
        if dev is not None:
            dev_corpus = as_corpus(dev)
            check_nonempty(dev_corpus, "dev corpus")
            dev_pairs, dev_labels = _pairs_and_labels(dev_corpus)
            dev_u, dev_v = self._encode_pairs(dev_pairs)
            dev_data = (dev_u, dev_v, np.array([LABEL_TO_INDEX[l] for l in dev_labels]))

        monitors = {}
        for name, extra in (monitor or {}).items():
            extra_corpus = as_corpus(extra)
            check_nonempty(extra_corpus, f"monitor corpus {name!r}")
            extra_pairs, extra_labels = _pairs_and_labels(extra_corpus)
            eu, ev = self._encode_pairs(extra_pairs)
            monitors[name] = (eu, ev, np.array([LABEL_TO_INDEX[l] for l in extra_labels]))

        rng = np.random.default_rng(self.seed)
        n_features = self.feature_dimension
        if init_network is not None:
            if init_network.input_dim != n_features:
                raise DataError(
                    f"warm-start network expects {init_network.input_dim} features "
                    f"but this configuration produces {n_features}"
                )
            network = init_network.copy()
        else:
            network = MlpNetwork.initialize(n_features, self.hidden_units, len(LABEL_ORDER), rng)

        log = TrainingLog()
        lr = float(self.learning_rate)
        prev_dev_acc: float | None = None
        n = len(pairs)
        epochs_run = 0
        for epoch in range(1, self.max_epochs + 1):
            if lr < self.lr_floor:
                break
            epochs_run = epoch
            perm = rng.permutation(n)
            correct = 0
            for start in range(0, n, self.batch_size):
                batch = perm[start : start + self.batch_size]
                x = self._features(u[batch], v[batch])
                y_onehot = np.zeros((len(batch), len(LABEL_ORDER)))
                y_onehot[np.arange(len(batch)), y_index[batch]] = 1.0
                loss, probs, grads = network.loss_and_grads(x, y_onehot)
                if not np.isfinite(loss):
                    raise NumericalError(
                        f"non-finite loss at epoch {epoch}, batch starting at {start} (lr={lr:g})"
                    )
                correct += int((probs.argmax(axis=1) == y_index[batch]).sum())
                network.apply_update(grads, lr)
            train_acc = correct / n

            dev_acc = None
            if dev_data is not None:
                dev_acc = self._accuracy_on(network, *dev_data)
            extra_accs = {
                name: self._accuracy_on(network, *data) for name, data in monitors.items()
            }
            log.rows.append(LogRow(epoch, lr, train_acc, dev_acc, extra_accs))

            lr *= self.lr_decay
            if dev_acc is not None and prev_dev_acc is not None and dev_acc < prev_dev_acc:
                lr /= self.lr_drop
            prev_dev_acc = dev_acc

        self.network_ = network
        self.log_ = log
        self.classes_ = np.array([label.value for label in LABEL_ORDER])
        self.epochs_run_ = epochs_run
        self.final_learning_rate_ = lr
        return self

    def _accuracy_on(self, network: MlpNetwork, u: np.ndarray, v: np.ndarray, y_index: np.ndarray) -> float:
        correct = 0
        for start in range(0, len(y_index), 8192):
            x = self._features(u[start : start + 8192], v[start : start + 8192])
            probs = network.forward(x)
            correct += int((probs.argmax(axis=1) == y_index[start : start + 8192]).sum())
        return correct / len(y_index)

    # -- inference --------------------------------------------------------

    def predict_proba(self, X) -> np.ndarray:
        """Probability triples in LABEL_ORDER; rows sum to 1."""
        check_is_fitted(self, "network_")
        pairs, _ = as_sentence_pairs(X)
        u, v = self._encode_pairs(pairs)
        chunks = []
        for start in range(0, len(pairs), 8192):
            x = self._features(u[start : start + 8192], v[start : start + 8192])
            chunks.append(self.network_.forward(x))
        if not chunks:
            return np.zeros((0, len(LABEL_ORDER)))
        return np.vstack(chunks)

    def predict(self, X) -> np.ndarray:
        """Predicted labels (argmax), as an object array of Label members."""
        probs = self.predict_proba(X)
        indices = probs.argmax(axis=1)
        return np.array([LABEL_ORDER[i] for i in indices], dtype=object)

    def score(self, X, y=None) -> float:
        """Accuracy against the gold labels carried by the pairs."""
        pairs, labels = as_sentence_pairs(X)
        if labels is None:
            if y is None:
                raise ValueError("X carries no labels and y was not given")
            labels = [Label(l) for l in y]
        elif y is not None:
            raise ValueError("X already carries gold labels; pass y=None")
        predictions = self.predict(X)
        return float(np.mean([p == l for p, l in zip(predictions, labels)]))


def _pairs_and_labels(corpus: Corpus):
    pairs = [(p.premise, p.hypothesis) for p in corpus]
    labels = [p.label for p in corpus]
    return pairs, labels


# -- module-level operations ------------------------------------------------


def train(
    train_corpus,
    dev_corpus,
    encoder: str = "bow",
    embeddings: EmbeddingTable | None = None,
    seed: int = 0,
    **hyperparams,
) -> PairClassifier:
    """Train a classifier with the default protocol; the log is on ``.log_``."""
    clf = PairClassifier(encoder=encoder, embeddings=embeddings, seed=seed, **hyperparams)
    return clf.fit(train_corpus, dev=dev_corpus)


def finetune(
    classifier: PairClassifier,
    new_train,
    dev=None,
    original_heldout=None,
    **overrides,
) -> PairClassifier:
    """Continue training from an existing model's weights on new data.

    The original classifier is left untouched; the returned one has a fresh
    log that also tracks accuracy on ``original_heldout`` (named
    "original") so forgetting is visible per epoch.  The encoder and
    embedding table are unchanged; overriding them into an incompatible
    shape is an error.
    """
    check_is_fitted(classifier, "network_")
    params = classifier.get_params()
    params.update(overrides)
    tuned = PairClassifier(**params)
    monitor = {"original": original_heldout} if original_heldout is not None else None
    return tuned.fit(new_train, dev=dev, monitor=monitor, init_network=classifier.network_)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts[true label][predicted label] in LABEL_ORDER."""

    counts: np.ndarray

    @classmethod
    def from_labels(cls, golds: Sequence[Label], predictions: Sequence[Label]) -> "ConfusionMatrix":
        counts = np.zeros((len(LABEL_ORDER), len(LABEL_ORDER)), dtype=np.int64)
        for gold, pred in zip(golds, predictions):
            counts[LABEL_TO_INDEX[gold], LABEL_TO_INDEX[pred]] += 1
        return cls(counts=counts)

    def normalized(self) -> np.ndarray:
        """Row-normalized view; all-zero rows stay zero."""
        sums = self.counts.sum(axis=1, keepdims=True)
        safe = np.where(sums == 0, 1, sums)
        return self.counts / safe

    def accuracy(self) -> float:
        total = int(self.counts.sum())
        return float(np.trace(self.counts)) / total if total else 0.0

    def total(self) -> int:
        return int(self.counts.sum())

    def row(self, label: Label) -> np.ndarray:
        return self.counts[LABEL_TO_INDEX[label]]


@dataclass(frozen=True)
class TypeEval:
    accuracy: float
    confusion: ConfusionMatrix
    size: int


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    confusion: ConfusionMatrix
    per_type: dict[PairType, TypeEval]
    predictions: tuple[Label, ...]


def evaluate(classifier: PairClassifier, test) -> EvalReport:
    """Accuracy and confusion matrices, per pair type when metadata is present."""
    corpus = as_corpus(test)
    check_nonempty(corpus, "evaluation corpus")
    predictions = classifier.predict(corpus)
    golds = [p.label for p in corpus]
    confusion = ConfusionMatrix.from_labels(golds, predictions)

    by_type: dict[PairType, list[int]] = {}
    for i, pair in enumerate(corpus):
        triple = parse_triple_id(pair.source_id)
        if triple is not None:
            by_type.setdefault(triple.pair_type, []).append(i)
    per_type = {}
    for pair_type, indices in sorted(by_type.items(), key=lambda kv: kv[0].value):
        sub_confusion = ConfusionMatrix.from_labels(
            [golds[i] for i in indices], [predictions[i] for i in indices]
        )
        per_type[pair_type] = TypeEval(
            accuracy=sub_confusion.accuracy(), confusion=sub_confusion, size=len(indices)
        )
    return EvalReport(
        accuracy=confusion.accuracy(),
        confusion=confusion,
        per_type=per_type,
        predictions=tuple(predictions),
    )


@dataclass(frozen=True)
class SymmetryReport:
    """Twin-prediction agreement over a generated Comparisons corpus."""

    n_twins: int
    violations: tuple[tuple[str, Label, Label], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def symmetry_check(classifier: PairClassifier, comparisons) -> SymmetryReport:
    """Verify prediction(E twin) == prediction(C twin) for every triple.

    Requires the corpus to carry the generator's triple metadata pairing
    each entailment pair with its contradiction twin.
    """
    corpus = as_corpus(comparisons)
    check_nonempty(corpus, "comparisons corpus")
    twins: dict[str, dict[Label, int]] = {}
    for i, pair in enumerate(corpus):
        if parse_triple_id(pair.source_id) is None:
            raise DataError(f"pair {i} lacks twin metadata (source_id={pair.source_id!r})")
        twins.setdefault(pair.source_id, {})[pair.label] = i
    predictions = classifier.predict(corpus)
    violations = []
    n_twins = 0
    for source_id, members in twins.items():
        if set(members) != {Label.ENTAILMENT, Label.CONTRADICTION}:
            raise DataError(f"triple {source_id!r} lacks its entailment/contradiction twin")
        n_twins += 1
        pred_e = predictions[members[Label.ENTAILMENT]]
        pred_c = predictions[members[Label.CONTRADICTION]]
        if pred_e != pred_c:
            violations.append((source_id, pred_e, pred_c))
    violations.sort(key=lambda item: item[0])
    return SymmetryReport(n_twins=n_twins, violations=tuple(violations))


# -- persistence -------------------------------------------------------------


def _write_npz(path: str | Path, arrays: Mapping[str, np.ndarray]) -> None:
    # np.savez stamps current time into the zip members, so two identical
    # models would differ in bytes; write the container with a fixed
    # timestamp instead.  np.load reads it like any .npz.
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_STORED) as archive:
        for name in sorted(arrays):
            buffer = io.BytesIO()
            np.lib.format.write_array(buffer, np.asanyarray(arrays[name]), allow_pickle=False)
            info = zipfile.ZipInfo(name + ".npy", date_time=(1980, 1, 1, 0, 0, 0))
            archive.writestr(info, buffer.getvalue())


def save_classifier(classifier: PairClassifier, path: str | Path) -> None:
    """Write a versioned model container (weights row-major, metadata JSON)."""
    check_is_fitted(classifier, "network_")
    network = classifier.network_
    meta = {
        "encoder": classifier.encoder,
        "combiner": classifier.combiner,
        "hidden_units": classifier.hidden_units,
        "embedding_dimension": classifier.embeddings.dimension,
        "input_dim": network.input_dim,
        "label_order": [label.value for label in LABEL_ORDER],
        "training": {
            "seed": classifier.seed,
            "learning_rate": classifier.learning_rate,
            "lr_decay": classifier.lr_decay,
            "lr_drop": classifier.lr_drop,
            "lr_floor": classifier.lr_floor,
            "max_epochs": classifier.max_epochs,
            "batch_size": classifier.batch_size,
            "encode_dtype": classifier.encode_dtype,
            "epochs_run": classifier.epochs_run_,
            "final_learning_rate": classifier.final_learning_rate_,
        },
    }
    _write_npz(
        path,
        {
            "format_version": np.int64(MODEL_FORMAT_VERSION),
            "w1": network.w1,
            "b1": network.b1,
            "w2": network.w2,
            "b2": network.b2,
            "meta": np.array(json.dumps(meta, sort_keys=True)),
        },
    )


def load_classifier(path: str | Path, embeddings: EmbeddingTable) -> PairClassifier:
    """Load a model container; fails loudly on version or dimension mismatch."""
    with np.load(path, allow_pickle=False) as data:
        if "format_version" not in data:
            raise DataError(f"{path} is not a model container (no format version)")
        version = int(data["format_version"])
        if version != MODEL_FORMAT_VERSION:
            raise DataError(
                f"model format version {version} unsupported (expected {MODEL_FORMAT_VERSION})"
            )
        meta = json.loads(str(data["meta"]))
        network = MlpNetwork(data["w1"], data["b1"], data["w2"], data["b2"])
    if embeddings.dimension != meta["embedding_dimension"]:
        raise DataError(
            f"embedding table dimension {embeddings.dimension} does not match "
            f"the model's {meta['embedding_dimension']}"
        )
    training = meta["training"]
    classifier = PairClassifier(
        encoder=meta["encoder"],
        embeddings=embeddings,
        hidden_units=meta["hidden_units"],
        learning_rate=training["learning_rate"],
        lr_decay=training["lr_decay"],
        lr_drop=training["lr_drop"],
        lr_floor=training["lr_floor"],
        max_epochs=training["max_epochs"],
        batch_size=training["batch_size"],
        combiner=meta["combiner"],
        encode_dtype=training.get("encode_dtype", "float64"),
        seed=training["seed"],
    )
    classifier.network_ = network
    classifier.classes_ = np.array(meta["label_order"])
    classifier.log_ = TrainingLog()
    classifier.epochs_run_ = training["epochs_run"]
    classifier.final_learning_rate_ = training["final_learning_rate"]
    return classifier
