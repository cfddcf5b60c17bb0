#!/usr/bin/env python3
"""Build a thesaurus JSONL file from WordNet for the antonym diagnostics.

One record per line: {"word": ..., "synonyms": [...], "antonyms": [...]}.
Words are lowercase single tokens; multi-word lemmas are skipped.  The
sense-collapsed view is deliberate: a word's synonyms are the union of
its synset lemmas across all senses, and its antonyms the union of the
antonym lemmas of all its senses.  Loading applies a symmetric closure
to the antonym relation, so one direction in the file is enough.

Requires the nltk package and its WordNet data (neither is a runtime
dependency of compnli):

    pip install nltk
    python -m nltk.downloader wordnet

Usage:

    python scripts/wordnet_to_thesaurus.py --out thesaurus.jsonl
    python scripts/wordnet_to_thesaurus.py --pos a --out adjectives-only.jsonl
"""

import argparse
import json
import sys
from collections import defaultdict


def build_entries(wordnet, pos_filter):
    synonyms = defaultdict(set)
    antonyms = defaultdict(set)
    for synset in wordnet.all_synsets():
        if pos_filter and synset.pos() not in pos_filter:
            continue
        lemmas = synset.lemmas()
        names = [lemma.name().lower() for lemma in lemmas]
        for lemma, name in zip(lemmas, names):
            if "_" in name or not name.isalpha():
                continue
            for other in names:
                if other != name and "_" not in other and other.isalpha():
                    synonyms[name].add(other)
            for opposite in lemma.antonyms():
                opposite_name = opposite.name().lower()
                if "_" not in opposite_name and opposite_name.isalpha():
                    antonyms[name].add(opposite_name)
    return synonyms, antonyms


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="output JSONL path")
    parser.add_argument(
        "--pos", default="",
        help="restrict to WordNet POS tags, e.g. 'a,s' for adjectives (default: all)",
    )
    args = parser.parse_args(argv)

    try:
        from nltk.corpus import wordnet
        wordnet.ensure_loaded()
    except LookupError:
        sys.exit("WordNet data missing; run: python -m nltk.downloader wordnet")
    except ImportError:
        sys.exit("nltk not installed; run: pip install nltk")

    pos_filter = {p.strip() for p in args.pos.split(",") if p.strip()}
    synonyms, antonyms = build_entries(wordnet, pos_filter)

    words = sorted(set(synonyms) | set(antonyms))
    written = 0
    with open(args.out, "w", encoding="utf-8") as handle:
        for word in words:
            record = {
                "word": word,
                "synonyms": sorted(synonyms.get(word, ())),
                "antonyms": sorted(antonyms.get(word, ())),
            }
            if not record["synonyms"] and not record["antonyms"]:
                continue
            handle.write(json.dumps(record, sort_keys=True) + "\n")
            written += 1
    print(f"wrote {written} entries to {args.out}")


if __name__ == "__main__":
    main()
