from __future__ import annotations

import json

import pytest

from compnli import (
    Corpus,
    EmbeddingTable,
    GeneratorConfig,
    PairType,
    generate,
    load_thesaurus,
    make_pair,
)

SUBJECTS = ["cat", "dog", "fox", "owl"]
ADJECTIVES = ["big", "old", "shy"]


@pytest.fixture(scope="session")
def comparisons() -> dict[PairType, Corpus]:
    config = GeneratorConfig(subjects=SUBJECTS, adjectives=ADJECTIVES, seed=1)
    return generate(config)


@pytest.fixture(scope="session")
def pooled(comparisons) -> Corpus:
    pairs = []
    for pair_type in PairType:
        pairs.extend(comparisons[pair_type].pairs)
    return Corpus(pairs=tuple(pairs), name="comparisons-pooled")


def corpus_vocabulary(corpus: Corpus) -> set[str]:
    vocab = set()
    for pair in corpus:
        vocab.update(pair.premise.tokens)
        vocab.update(pair.hypothesis.tokens)
    return vocab


@pytest.fixture(scope="session")
def table16(pooled) -> EmbeddingTable:
    return EmbeddingTable.random(corpus_vocabulary(pooled), 16, seed=0)


@pytest.fixture()
def toy_thesaurus(tmp_path):
    entries = [
        {"word": "more", "antonyms": ["less"]},
        {"word": "happy", "synonyms": ["cheerful"]},
        {"word": "cheerful", "antonyms": ["sad"]},
        {"word": "big", "synonyms": ["large"], "antonyms": ["small"]},
    ]
    path = tmp_path / "thesaurus.jsonl"
    path.write_text("\n".join(json.dumps(e) for e in entries) + "\n", encoding="utf-8")
    return load_thesaurus(path)


@pytest.fixture()
def snli_like() -> Corpus:
    pairs = [
        make_pair("A man is sleeping on a bench", "A man is asleep", "entailment"),
        make_pair("A man is sleeping on a bench", "The man is not awake", "entailment"),
        make_pair("A dog runs through the park", "A dog is outside", "entailment"),
        make_pair("A woman reads a book", "A woman is reading", "entailment"),
        make_pair("Kids play in the sand", "Children are at a beach", "neutral"),
        make_pair("A man is sleeping on a bench", "A man waits for the bus", "neutral"),
        make_pair("A dog runs through the park", "The dog chases a ball", "neutral"),
        make_pair("A woman reads a book", "She enjoys the novel", "neutral"),
        make_pair("A man is sleeping on a bench", "A man is not sleeping", "contradiction"),
        make_pair("A dog runs through the park", "No animal is moving", "contradiction"),
        make_pair("A woman reads a book", "The woman is swimming", "contradiction"),
        make_pair("Kids play in the sand", "Nobody is playing", "contradiction"),
    ]
    return Corpus(pairs=tuple(pairs), name="snli-like")


def write_jsonl(corpus: Corpus, path) -> None:
    lines = []
    for pair in corpus:
        record = {
            "gold_label": pair.label.value,
            "sentence1": pair.premise.raw,
            "sentence2": pair.hypothesis.raw,
        }
        if pair.source_id:
            record["pairID"] = pair.source_id
        lines.append(json.dumps(record))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_embeddings(table: EmbeddingTable, path) -> None:
    lines = []
    for word in sorted(table.vocabulary):
        vector = table.lookup(word)
        lines.append(word + " " + " ".join(f"{x:.8f}" for x in vector))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
