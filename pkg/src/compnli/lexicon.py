"""Word vectors and a synonym/antonym thesaurus.

Both structures are immutable after load and shared read-only by the
encoders and the antonym diagnostics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import DataError, FormatError


@dataclass(frozen=True)
class EmbeddingTable:
    """Token -> real vector table with a fixed dimension.

    Lookup of an absent token returns None explicitly; vectors are never
    fabricated for unknown words.
    """

    dimension: int
    vectors: Mapping[str, np.ndarray]

    def lookup(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def vocabulary(self) -> set[str]:
        return set(self.vectors)

    @classmethod
    def random(cls, vocabulary: Iterable[str], dimension: int, seed: int = 0) -> "EmbeddingTable":
        """Seeded random vectors (standard normal) for a vocabulary.

        Intended for tests and toy-scale experiments where pretrained
        vectors are unavailable; tokens are assigned vectors in sorted
        order so the table is independent of input ordering.
        """
        rng = np.random.default_rng(seed)
        vectors = {}
        for token in sorted(set(vocabulary)):
            vectors[token] = rng.standard_normal(dimension)
        if not vectors:
            raise DataError("cannot build an embedding table over an empty vocabulary")
        return cls(dimension=dimension, vectors=vectors)


def load_embeddings(path: str | Path, vocab_filter: set[str] | None = None) -> tuple[EmbeddingTable, int]:
    """Load word vectors from text format: ``token v1 v2 ... vD`` per line.

    The dimension is inferred from the first parseable line; lines with a
    different dimension or non-numeric/non-finite values are rejected and
    counted.  A word2vec-style count header on the first line is skipped.
    When ``vocab_filter`` is given only those tokens are kept (the filter
    does not affect dimension inference).  Returns ``(table, rejected)``.
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    dimension: int | None = None
    rejected = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                continue  # word2vec header: "<count> <dim>"
            if len(parts) < 2:
                if line.strip():
                    rejected += 1
                continue
            token = parts[0]
            try:
                values = np.asarray([float(p) for p in parts[1:]], dtype=np.float64)
            except ValueError:
                rejected += 1
                continue
            if not np.all(np.isfinite(values)):
                rejected += 1
                continue
            if dimension is None:
                dimension = values.shape[0]
            if values.shape[0] != dimension:
                rejected += 1
                continue
            if vocab_filter is not None and token not in vocab_filter:
                continue
            vectors[token] = values
    if dimension is None or not vectors:
        raise DataError(f"no usable word vectors in {path}")
    return EmbeddingTable(dimension=dimension, vectors=vectors), rejected


_EMPTY: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Thesaurus:
    """Synonym and antonym lookups; unknown words map to empty sets.

    The antonym relation is closed symmetrically at load time and a word is
    never its own antonym.  Synonyms are used as given (one hop, no
    transitive closure).
    """

    synonyms: Mapping[str, frozenset[str]]
    antonyms: Mapping[str, frozenset[str]]

    def synonyms_of(self, word: str) -> frozenset[str]:
        return self.synonyms.get(word, _EMPTY)

    def antonyms_of(self, word: str) -> frozenset[str]:
        return self.antonyms.get(word, _EMPTY)

    @classmethod
    def from_entries(
        cls,
        synonyms: Mapping[str, Iterable[str]] | None = None,
        antonyms: Mapping[str, Iterable[str]] | None = None,
    ) -> "Thesaurus":
        """Build a thesaurus in memory, applying the symmetric antonym closure."""
        syn = {w: frozenset(ws) for w, ws in (synonyms or {}).items() if ws}
        ant: dict[str, set[str]] = {}
        for word, opposites in (antonyms or {}).items():
            for opp in opposites:
                if opp == word:
                    continue  # a word is never its own antonym
                ant.setdefault(word, set()).add(opp)
                ant.setdefault(opp, set()).add(word)
        return cls(
            synonyms=syn,
            antonyms={w: frozenset(ws) for w, ws in ant.items()},
        )


def load_thesaurus(path: str | Path) -> Thesaurus:
    """Load a JSON-lines thesaurus.

    Each line is an object ``{"word": ..., "synonyms": [...], "antonyms":
    [...]}`` (the two lists are optional).  Parse failures raise
    :class:`FormatError` with the line number.
    """
    path = Path(path)
    synonyms: dict[str, list[str]] = {}
    antonyms: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                word = record["word"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise FormatError(f"bad thesaurus record: {exc}", path=path, lineno=lineno) from exc
            if not isinstance(word, str):
                raise FormatError("thesaurus 'word' must be a string", path=path, lineno=lineno)
            syn_list = record.get("synonyms", [])
            ant_list = record.get("antonyms", [])
            if not isinstance(syn_list, list) or not isinstance(ant_list, list):
                raise FormatError("'synonyms'/'antonyms' must be lists", path=path, lineno=lineno)
            synonyms.setdefault(word, []).extend(syn_list)
            antonyms.setdefault(word, []).extend(ant_list)
    return Thesaurus.from_entries(synonyms=synonyms, antonyms=antonyms)
