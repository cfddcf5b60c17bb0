"""Input coercion shared by the model-facing API.

Estimator methods accept a Corpus, a sequence of LabeledPair, or (for
inference) a sequence of raw (premise, hypothesis) pairs; these helpers
normalize the variants in one place.
"""

from __future__ import annotations

from typing import Sequence

from .corpus import Corpus, Label, LabeledPair, Sentence
from .errors import DataError


def as_corpus(data) -> Corpus:
    """Coerce labeled input to a Corpus; raises if labels are missing."""
    if isinstance(data, Corpus):
        return data
    pairs = list(data)
    for i, pair in enumerate(pairs):
        if not isinstance(pair, LabeledPair):
            raise DataError(f"item {i} is {type(pair).__name__}, expected LabeledPair")
    return Corpus(pairs=tuple(pairs))


def _coerce_sentence(obj, what: str) -> Sentence:
    if isinstance(obj, Sentence):
        return obj
    if isinstance(obj, str):
        return Sentence.from_text(obj)
    raise DataError(f"{what} is {type(obj).__name__}, expected Sentence or str")


def as_sentence_pairs(data) -> tuple[list[tuple[Sentence, Sentence]], list[Label] | None]:
    """Return ((premise, hypothesis) list, labels or None if unlabeled input)."""
    if isinstance(data, Corpus):
        return [(p.premise, p.hypothesis) for p in data], [p.label for p in data]
    items = list(data)
    if all(isinstance(item, LabeledPair) for item in items):
        return [(p.premise, p.hypothesis) for p in items], [p.label for p in items]
    pairs = []
    for i, item in enumerate(items):
        if isinstance(item, LabeledPair):
            raise DataError(f"mixed input: item {i} is labeled but others are not")
        try:
            premise, hypothesis = item
        except (TypeError, ValueError):
            raise DataError(
                f"item {i} is {type(item).__name__}, expected a (premise, hypothesis) pair"
            ) from None
        pairs.append(
            (_coerce_sentence(premise, f"premise {i}"), _coerce_sentence(hypothesis, f"hypothesis {i}"))
        )
    return pairs, None


def check_nonempty(data: Corpus | Sequence, name: str) -> None:
    if len(data) == 0:
        raise DataError(f"{name} is empty")
