"""Sentence encoders: order-insensitive bag-of-words and a half-split variant.

Both are stateless sklearn-style transformers over sequences of sentences;
``fit`` only validates and ``transform`` maps sentences to vectors.
"""

from __future__ import annotations

import warnings
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ..corpus import Sentence
from ..lexicon import EmbeddingTable

ENCODER_KINDS = ("bow", "half_split")


def as_sentence(obj: Sentence | str) -> Sentence:
    return obj if isinstance(obj, Sentence) else Sentence.from_text(obj)


class _EmbeddingEncoder(BaseEstimator, TransformerMixin):
    """Shared plumbing: vocabulary lookup, all-OOV handling, batch transform."""

    kind: str = ""

    def __init__(self, embeddings: EmbeddingTable | None = None):
        self.embeddings = embeddings

    @property
    def output_dimension(self) -> int:
        self._check_embeddings()
        return self._output_dimension(self.embeddings.dimension)

    def _output_dimension(self, dim: int) -> int:
        raise NotImplementedError

    def _check_embeddings(self) -> None:
        if self.embeddings is None:
            raise ValueError(f"{type(self).__name__} needs an EmbeddingTable; got None")

    def fit(self, X=None, y=None):
        self._check_embeddings()
        return self

    def encode(self, sentence: Sentence | str) -> np.ndarray:
        """Encode one sentence; warns when no token is in the vocabulary."""
        vector, all_oov = self.encode_checked(sentence)
        if all_oov:
            warnings.warn(
                f"sentence has no in-vocabulary tokens, encoded as zero vector: "
                f"{as_sentence(sentence).raw!r}",
                RuntimeWarning,
                stacklevel=2,
            )
        return vector

    def encode_checked(self, sentence: Sentence | str) -> tuple[np.ndarray, bool]:
        """Encode one sentence, returning (vector, all_tokens_oov flag)."""
        raise NotImplementedError

    def transform(self, X: Iterable[Sentence | str]) -> np.ndarray:
        """Encode a batch of sentences into a (n, output_dimension) array."""
        self._check_embeddings()
        rows = []
        n_all_oov = 0
        for sentence in X:
            vector, all_oov = self.encode_checked(sentence)
            n_all_oov += all_oov
            rows.append(vector)
        if n_all_oov:
            warnings.warn(
                f"{n_all_oov} of {len(rows)} sentences had no in-vocabulary tokens "
                "and were encoded as zero vectors",
                RuntimeWarning,
                stacklevel=2,
            )
        if not rows:
            return np.zeros((0, self.output_dimension))
        return np.stack(rows)

    def _mean_of(self, tokens: Sequence[str]) -> np.ndarray | None:
        """Mean vector of the in-vocabulary tokens, or None when there are none."""
        table = self.embeddings
        known = [table.lookup(t) for t in tokens]
        known = [v for v in known if v is not None]
        if not known:
            return None
        return np.mean(known, axis=0)


class BowEncoder(_EmbeddingEncoder):
    """Mean of the word vectors of all in-vocabulary tokens.

    Tokens are accumulated in sorted order, so any permutation of the same
    token multiset encodes to a bit-identical vector; this makes the
    entailment/contradiction twin symmetry exact rather than approximate.
    """

    kind = "bow"

    def _output_dimension(self, dim: int) -> int:
        return dim

    def encode_checked(self, sentence: Sentence | str) -> tuple[np.ndarray, bool]:
        self._check_embeddings()
        sentence = as_sentence(sentence)
        mean = self._mean_of(sorted(sentence.tokens))
        if mean is None:
            return np.zeros(self.embeddings.dimension), True
        return mean, False


class HalfSplitEncoder(_EmbeddingEncoder):
    """Concatenated means of the first ceil(n/2) tokens and the rest.

    The smallest modification of bag-of-words that breaks permutation
    invariance: swapping words across the sentence midpoint changes the
    encoding.
    """

    kind = "half_split"

    def _output_dimension(self, dim: int) -> int:
        return 2 * dim

    def encode_checked(self, sentence: Sentence | str) -> tuple[np.ndarray, bool]:
        self._check_embeddings()
        sentence = as_sentence(sentence)
        dim = self.embeddings.dimension
        tokens = sentence.tokens
        cut = (len(tokens) + 1) // 2
        halves = []
        any_known = False
        for part in (tokens[:cut], tokens[cut:]):
            mean = self._mean_of(part)
            if mean is None:
                halves.append(np.zeros(dim))
            else:
                halves.append(mean)
                any_known = True
        return np.concatenate(halves), not any_known


def make_encoder(kind: str, embeddings: EmbeddingTable) -> _EmbeddingEncoder:
    if kind == "bow":
        return BowEncoder(embeddings)
    if kind == "half_split":
        return HalfSplitEncoder(embeddings)
    raise ValueError(f"unknown encoder kind {kind!r}; expected one of {ENCODER_KINDS}")


COMBINERS = ("full", "concat")


def pair_features(u: np.ndarray, v: np.ndarray, combiner: str = "full") -> np.ndarray:
    """Combine premise and hypothesis encodings into classifier features.

    ``full`` is [u; v; |u - v|; u * v] (elementwise); ``concat`` is [u; v].
    Accepts single vectors or batches (last axis is the encoding axis).
    """
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"premise/hypothesis encoding shapes differ: {u.shape} vs {v.shape}")
    if combiner == "full":
        return np.concatenate([u, v, np.abs(u - v), u * v], axis=-1)
    if combiner == "concat":
        return np.concatenate([u, v], axis=-1)
    raise ValueError(f"unknown combiner {combiner!r}; expected one of {COMBINERS}")
