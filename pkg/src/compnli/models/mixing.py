"""Combining corpora for augmented training."""

from __future__ import annotations

import random

from ..corpus import Corpus


def mix(a: Corpus, b: Corpus, seed: int = 0) -> Corpus:
    """Concatenate two corpora and shuffle deterministically.

    Every pair from both inputs appears exactly once (either side may be
    empty); the order is a seeded permutation so repeated runs agree.
    """
    pairs = list(a.pairs) + list(b.pairs)
    random.Random(seed).shuffle(pairs)
    name = f"{a.name or 'a'}+{b.name or 'b'}"
    return Corpus(pairs=tuple(pairs), name=name)
