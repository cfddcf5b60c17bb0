"""Sentence-pair corpora in SNLI-compatible formats.

The atoms here are :class:`LabeledPair` (premise, hypothesis, gold label)
and :class:`Corpus` (an ordered list of pairs).  Corpora are immutable
after load and safe to share across threads.
"""

from __future__ import annotations

import enum
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError

# Bump whenever tokenize() changes behaviour; embedded in diagnostic reports.
TOKENIZER_VERSION = "1.0"


class Label(str, enum.Enum):
    """The three NLI gold labels.  Any other string (including "-") is not a label."""

    ENTAILMENT = "entailment"
    NEUTRAL = "neutral"
    CONTRADICTION = "contradiction"

    def __str__(self) -> str:  # so f"{label}" gives the bare value
        return self.value


#: Canonical label order used for distributions, one-hot targets and confusion matrices.
LABEL_ORDER = (Label.ENTAILMENT, Label.NEUTRAL, Label.CONTRADICTION)

# Word tokens, with an "n't" suffix kept attached to its host ("don't", "doesn't"),
# and any other non-space character split off on its own.
_TOKEN_RE = re.compile(r"\w+n't|n't|\w+|\S")


def tokenize(text: str) -> tuple[str, ...]:
    """Lowercase and tokenize ``text``.

    Whitespace is discarded, punctuation characters become their own tokens,
    except that an apostrophe-t suffix ("n't") stays attached to its host
    token.  Deterministic; the empty string yields an empty tuple.
    """
    return tuple(sys.intern(t) for t in _TOKEN_RE.findall(text.lower()))


@dataclass(frozen=True)
class Sentence:
    """A tokenized sentence plus its original surface form."""

    tokens: tuple[str, ...]
    raw: str

    @classmethod
    def from_text(cls, text: str) -> "Sentence":
        return cls(tokens=tokenize(text), raw=text)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class LabeledPair:
    """One premise/hypothesis pair with its gold label.

    ``source_id`` is an opaque tag; the generator uses it to link each
    entailment pair to its contradiction twin.
    """

    premise: Sentence
    hypothesis: Sentence
    label: Label
    source_id: str = ""


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable sequence of labeled pairs.

    Order is preserved from the source file; diagnostics rely on it for
    deterministic tie-breaking.
    """

    pairs: tuple[LabeledPair, ...]
    name: str = ""

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, i: int) -> LabeledPair:
        return self.pairs[i]


def make_pair(premise: str, hypothesis: str, label: Label | str, source_id: str = "") -> LabeledPair:
    """Build a LabeledPair from raw text, running the canonical tokenizer."""
    return LabeledPair(
        premise=Sentence.from_text(premise),
        hypothesis=Sentence.from_text(hypothesis),
        label=Label(label),
        source_id=source_id,
    )


_FORMATS = ("snli-jsonl", "tsv")


def load_corpus(path: str | Path, format: str = "snli-jsonl", name: str | None = None) -> tuple[Corpus, int]:
    """Load a corpus file, returning ``(corpus, skipped)``.

    Lines whose gold label is "-" (unlabeled), that fail to parse, or whose
    sentences tokenize to nothing are skipped and counted.  Raises
    :class:`DataError` if no valid pair remains.

    Formats:
      * ``snli-jsonl``: one JSON object per line with ``gold_label``,
        ``sentence1``, ``sentence2`` (a ``pairID`` field, when present, is
        kept as ``source_id``; all other fields are ignored).
      * ``tsv``: three tab-separated columns ``label premise hypothesis``,
        UTF-8, no header.
    """
    if format not in _FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {_FORMATS}")
    path = Path(path)
    pairs: list[LabeledPair] = []
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            parsed = _parse_line(line, format)
            if parsed is None:
                skipped += 1
                continue
            pairs.append(parsed)
    if not pairs:
        raise DataError(f"no valid sentence pairs in {path}")
    return Corpus(pairs=tuple(pairs), name=name if name is not None else path.stem), skipped


def _parse_line(line: str, format: str) -> LabeledPair | None:
    if format == "snli-jsonl":
        try:
            record = json.loads(line)
            raw_label = record["gold_label"]
            s1, s2 = record["sentence1"], record["sentence2"]
        except (json.JSONDecodeError, KeyError, TypeError):
            return None
        source_id = str(record.get("pairID", ""))
    else:
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 3:
            return None
        raw_label, s1, s2 = parts
        source_id = ""
    try:
        label = Label(raw_label)
    except ValueError:
        return None
    premise = Sentence.from_text(s1)
    hypothesis = Sentence.from_text(s2)
    if not premise.tokens or not hypothesis.tokens:
        return None
    return LabeledPair(premise=premise, hypothesis=hypothesis, label=label, source_id=source_id)


def save_corpus(corpus: Corpus, path: str | Path, format: str = "snli-jsonl") -> None:
    """Write ``corpus`` in an SNLI-compatible format (see :func:`load_corpus`)."""
    if format not in _FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {_FORMATS}")
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for pair in corpus:
            if format == "snli-jsonl":
                record = {
                    "gold_label": pair.label.value,
                    "sentence1": pair.premise.raw,
                    "sentence2": pair.hypothesis.raw,
                }
                if pair.source_id:
                    record["pairID"] = pair.source_id
                fh.write(json.dumps(record, sort_keys=True) + "\n")
            else:
                for text in (pair.premise.raw, pair.hypothesis.raw):
                    if "\t" in text or "\n" in text:
                        raise DataError(f"sentence contains tab/newline, unrepresentable in TSV: {text!r}")
                fh.write(f"{pair.label.value}\t{pair.premise.raw}\t{pair.hypothesis.raw}\n")


def label_distribution(corpus: Corpus) -> dict[Label, float]:
    """Fraction of pairs per gold label; fractions sum to 1."""
    if len(corpus) == 0:
        raise DataError("label_distribution of an empty corpus")
    counts = {label: 0 for label in LABEL_ORDER}
    for pair in corpus:
        counts[pair.label] += 1
    total = len(corpus)
    return {label: counts[label] / total for label in LABEL_ORDER}
