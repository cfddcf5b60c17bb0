"""Comparisons dataset generation, leak-free splitting, vocabulary matching.

Every generated premise has the form "The X is more Y than the Z".  Each
ordered (X, Z) subject pair with X != Z, crossed with every adjective Y,
yields one entailment and one contradiction hypothesis according to the
pair type:

  same       E: identical to the premise         C: X/Z swapped
  more_less  E: "The Z is less Y than the X"     C: "The X is less Y than the Z"
  not        E: "The Z is not more Y than the X" C: "The X is not more Y than the Z"

so a run over n subjects and m adjectives emits exactly 2*n*(n-1)*m
labeled pairs per type.
"""

from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .corpus import Corpus, Label, LabeledPair, Sentence
from .errors import DataError


class PairType(str, enum.Enum):
    SAME = "same"
    MORE_LESS = "more_less"
    NOT = "not"

    def __str__(self) -> str:
        return self.value


ALL_PAIR_TYPES = (PairType.SAME, PairType.MORE_LESS, PairType.NOT)


@dataclass(frozen=True)
class ComparisonTriple:
    """Slot fillers (X, Y, Z) plus the hypothesis rule to apply."""

    x: str
    y: str
    z: str
    pair_type: PairType

    def __post_init__(self):
        if self.x == self.z:
            raise ValueError(f"comparison requires two distinct subjects, got {self.x!r} twice")


@dataclass
class GeneratorConfig:
    subjects: list[str]
    adjectives: list[str]
    pair_types: tuple[PairType, ...] = ALL_PAIR_TYPES
    split_sizes: tuple[int, int, int] | None = None
    seed: int = 0

    def __post_init__(self):
        for name, pool in (("subjects", self.subjects), ("adjectives", self.adjectives)):
            if len(set(pool)) != len(pool):
                raise DataError(f"{name} pool contains duplicates")
        self.pair_types = tuple(PairType(t) for t in self.pair_types)
        if self.split_sizes is not None:
            if len(self.split_sizes) != 3 or any(s < 0 for s in self.split_sizes):
                raise DataError(f"split_sizes must be three non-negative counts, got {self.split_sizes}")
            if sum(self.split_sizes) > self.total_pairs():
                raise DataError(
                    f"split sizes {self.split_sizes} sum to more than the "
                    f"{self.total_pairs()} generatable pairs"
                )

    def pairs_per_type(self) -> int:
        n, m = len(self.subjects), len(self.adjectives)
        return 2 * n * (n - 1) * m

    def total_pairs(self) -> int:
        return self.pairs_per_type() * len(self.pair_types)


def load_pool(path: str | Path) -> list[str]:
    """Read a slot pool: one phrase per line, UTF-8, blank lines ignored."""
    phrases = [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines()]
    return [p for p in phrases if p]


def default_pools() -> tuple[list[str], list[str]]:
    """The packaged (subjects, adjectives) pools: 10 nouns x 163 adjectives.

    Sized so each pair type covers 10*9*163 = 14,670 ordered triples.  The
    word lists are a reconstruction, not the unpublished originals.
    """
    data = resources.files("compnli").joinpath("data")
    subjects = [w for w in data.joinpath("subjects.txt").read_text(encoding="utf-8").split() if w]
    adjectives = [w for w in data.joinpath("adjectives.txt").read_text(encoding="utf-8").split() if w]
    return subjects, adjectives


def default_config(seed: int = 0) -> GeneratorConfig:
    subjects, adjectives = default_pools()
    return GeneratorConfig(
        subjects=subjects,
        adjectives=adjectives,
        split_sizes=(40000, 2000, 2000),
        seed=seed,
    )


def _sentence(template: str, x: str, y: str, z: str) -> Sentence:
    text = template.format(x=x, y=y, z=z)
    return Sentence.from_text(text[0].upper() + text[1:])


_TEMPLATES = {
    # (entailment template, contradiction template); premise is shared.
    PairType.SAME: ("the {x} is more {y} than the {z}", "the {z} is more {y} than the {x}"),
    PairType.MORE_LESS: ("the {z} is less {y} than the {x}", "the {x} is less {y} than the {z}"),
    PairType.NOT: ("the {z} is not more {y} than the {x}", "the {x} is not more {y} than the {z}"),
}


def realize(triple: ComparisonTriple) -> tuple[Sentence, Sentence, Sentence]:
    """Surface forms for one triple: (premise, entailment hyp, contradiction hyp)."""
    e_template, c_template = _TEMPLATES[triple.pair_type]
    premise = _sentence("the {x} is more {y} than the {z}", triple.x, triple.y, triple.z)
    entail = _sentence(e_template, triple.x, triple.y, triple.z)
    contra = _sentence(c_template, triple.x, triple.y, triple.z)
    return premise, entail, contra


def triple_id(triple: ComparisonTriple) -> str:
    """Opaque pair tag linking each entailment pair to its contradiction twin."""
    return f"{triple.pair_type.value}:{triple.x}|{triple.y}|{triple.z}"


def parse_triple_id(source_id: str) -> ComparisonTriple | None:
    """Inverse of :func:`triple_id`; None when the tag is not ours."""
    head, sep, rest = source_id.partition(":")
    if not sep:
        return None
    try:
        pair_type = PairType(head)
        x, y, z = rest.split("|")
        return ComparisonTriple(x=x, y=y, z=z, pair_type=pair_type)
    except ValueError:
        return None


def generate(config: GeneratorConfig) -> dict[PairType, Corpus]:
    """Generate one corpus per configured pair type.

    Enumeration order is canonical (pool order); the seed only shuffles.
    """
    if not config.subjects or not config.adjectives:
        raise DataError("generation requires non-empty subject and adjective pools")
    if len(config.subjects) < 2:
        raise DataError("generation requires at least two subjects (X != Z)")
    corpora: dict[PairType, Corpus] = {}
    for pair_type in config.pair_types:
        pairs: list[LabeledPair] = []
        for x in config.subjects:
            for z in config.subjects:
                if x == z:
                    continue
                for y in config.adjectives:
                    triple = ComparisonTriple(x=x, y=y, z=z, pair_type=pair_type)
                    premise, entail, contra = realize(triple)
                    sid = triple_id(triple)
                    pairs.append(LabeledPair(premise, entail, Label.ENTAILMENT, sid))
                    pairs.append(LabeledPair(premise, contra, Label.CONTRADICTION, sid))
        rng = random.Random(f"{config.seed}/{pair_type.value}")
        rng.shuffle(pairs)
        corpora[pair_type] = Corpus(pairs=tuple(pairs), name=f"comparisons-{pair_type.value}")
    return corpora


def _split_group_key(pair: LabeledPair, index: int):
    # Unordered {X, Z} with Y and pair type: both subject orders of a
    # comparison land in the same group, so no split leaks a near-duplicate
    # of another split's pair.  Pairs without triple metadata group alone.
    triple = parse_triple_id(pair.source_id)
    if triple is None:
        return ("pair", index)
    lo, hi = sorted((triple.x, triple.z))
    return (triple.pair_type.value, lo, hi, triple.y)


def split(corpus: Corpus, sizes: tuple[int, int, int], seed: int = 0) -> tuple[Corpus, Corpus, Corpus]:
    """Deterministic leak-free split into (train, validation, test).

    Pairs are grouped by comparison triple (unordered subject pair), group
    order is shuffled by ``seed``, and groups are dealt out whole.  When a
    group straddles a split boundary the overflow is discarded rather than
    leaked into the next split, so no triple ever contributes pairs to two
    splits.  Raises :class:`DataError` when the corpus cannot fill the
    requested sizes under that rule.
    """
    if len(sizes) != 3 or any(s < 0 for s in sizes):
        raise DataError(f"sizes must be three non-negative counts, got {sizes}")
    groups: dict[object, list[LabeledPair]] = {}
    for index, pair in enumerate(corpus):
        groups.setdefault(_split_group_key(pair, index), []).append(pair)
    group_list = list(groups.values())
    for group in group_list:
        # Twins adjacent within the group: truncation at an even boundary
        # then never strands an entailment pair without its contradiction.
        group.sort(key=lambda p: (p.source_id, p.label.value))
    rng = random.Random(seed)
    rng.shuffle(group_list)

    splits: list[list[LabeledPair]] = []
    cursor = 0
    for size in sizes:
        taken: list[LabeledPair] = []
        while len(taken) < size:
            if cursor >= len(group_list):
                raise DataError(
                    f"cannot fill split sizes {sizes} from {len(corpus)} pairs "
                    "without breaking triple-level disjointness"
                )
            group = group_list[cursor]
            cursor += 1
            remaining = size - len(taken)
            # Truncated remainder is discarded, never moved to a later split.
            taken.extend(group[:remaining])
        rng.shuffle(taken)
        splits.append(taken)

    names = ("train", "validation", "test")
    return tuple(
        Corpus(pairs=tuple(part), name=f"{corpus.name}-{suffix}" if corpus.name else suffix)
        for part, suffix in zip(splits, names)
    )


def token_rates(corpus: Corpus) -> dict[str, float]:
    """Occurrence rate of every token: count / total token count of the corpus."""
    counts: Counter[str] = Counter()
    for pair in corpus:
        counts.update(pair.premise.tokens)
        counts.update(pair.hypothesis.tokens)
    total = sum(counts.values())
    return {token: count / total for token, count in counts.items()}


def vocab_diff(a: Corpus, b: Corpus, threshold: float) -> list[tuple[str, float, float]]:
    """Tokens whose occurrence rates differ by more than ``threshold``.

    Returns (token, rate_a, rate_b) sorted by descending gap, ties broken
    alphabetically.
    """
    if len(a) == 0 or len(b) == 0:
        raise DataError("vocab_diff requires two non-empty corpora")
    rates_a = token_rates(a)
    rates_b = token_rates(b)
    flagged = []
    for token in set(rates_a) | set(rates_b):
        ra = rates_a.get(token, 0.0)
        rb = rates_b.get(token, 0.0)
        if abs(ra - rb) > threshold:
            flagged.append((token, ra, rb))
    flagged.sort(key=lambda item: (-abs(item[1] - item[2]), item[0]))
    return flagged
