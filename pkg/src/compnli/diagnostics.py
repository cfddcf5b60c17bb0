"""Corpus bias statistics: word overlap, antonymy, negation.

All diagnostics are pure folds over the pairs of a corpus: running one
twice yields identical output, and the optional thread parallelism merges
per-chunk results in chunk order so it is bit-identical to the sequential
fold.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .corpus import LABEL_ORDER, TOKENIZER_VERSION, Corpus, Label, LabeledPair, Sentence
from .errors import DataError
from .lexicon import Thesaurus

OVERLAP_MODES = ("jaccard", "tokens")


def overlap_rate(pair: LabeledPair, mode: str = "jaccard") -> float:
    """Word overlap between premise and hypothesis, in [0, 1]; symmetric.

    ``jaccard`` (default) is |unique intersection| / |unique union|;
    ``tokens`` counts with multiplicity, 2*sum(min counts) / (len+len).
    """
    p_tokens, h_tokens = pair.premise.tokens, pair.hypothesis.tokens
    if not p_tokens or not h_tokens:
        raise DataError("overlap_rate of a pair with an empty sentence")
    if mode == "jaccard":
        p_set, h_set = set(p_tokens), set(h_tokens)
        return len(p_set & h_set) / len(p_set | h_set)
    if mode == "tokens":
        shared = 0
        h_counts: dict[str, int] = {}
        for t in h_tokens:
            h_counts[t] = h_counts.get(t, 0) + 1
        for t in p_tokens:
            if h_counts.get(t, 0) > 0:
                h_counts[t] -= 1
                shared += 1
        return 2 * shared / (len(p_tokens) + len(h_tokens))
    raise ValueError(f"unknown overlap mode {mode!r}; expected one of {OVERLAP_MODES}")


def _chunked_map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) < 2 * threads:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class OverlapRanking:
    """(pair index, overlap rate) sorted non-increasing, ties in corpus order."""

    entries: tuple[tuple[int, float], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def top_indices(self, k: int) -> list[int]:
        return [index for index, _ in self.entries[:k]]


def rank_by_overlap(corpus: Corpus, mode: str = "jaccard", threads: int = 1) -> OverlapRanking:
    """Rank all pairs by overlap rate, non-increasing; stable under re-runs."""
    if len(corpus) == 0:
        raise DataError("cannot rank an empty corpus")
    rates = _chunked_map(lambda pair: overlap_rate(pair, mode=mode), corpus.pairs, threads)
    order = sorted(range(len(rates)), key=lambda i: -rates[i])  # stable: ties keep corpus order
    return OverlapRanking(entries=tuple((i, rates[i]) for i in order))


def top_k_label_distribution(ranking: OverlapRanking, corpus: Corpus, k: int) -> dict[Label, float]:
    """Label fractions over the k highest-overlap pairs."""
    if k <= 0:
        raise DataError(f"top-k distribution needs k >= 1, got {k}")
    if k > len(corpus):
        raise DataError(f"k={k} exceeds corpus size {len(corpus)}")
    counts = {label: 0 for label in LABEL_ORDER}
    for index in ranking.top_indices(k):
        counts[corpus[index].label] += 1
    return {label: counts[label] / k for label in LABEL_ORDER}


def high_overlap_subset(corpus: Corpus, k: int, ranking: OverlapRanking | None = None) -> Corpus:
    """Sub-corpus of the k highest-overlap pairs, corpus order retained."""
    if k > len(corpus):
        raise DataError(f"k={k} exceeds corpus size {len(corpus)}")
    if ranking is None:
        ranking = rank_by_overlap(corpus)
    indices = sorted(ranking.top_indices(k))
    return Corpus(
        pairs=tuple(corpus[i] for i in indices),
        name=f"{corpus.name}-top{k}" if corpus.name else f"top{k}",
    )


_NEGATING_WHOLE_TOKENS = frozenset({"no", "not"})


def has_negation(sentence: Sentence) -> bool:
    """True iff the sentence contains a negating n-gram: no, not, or an n't suffix.

    "no" and "not" must match whole tokens ("nothing" does not count);
    the n't test is a token-suffix match so "don't", "doesn't" count.
    """
    return any(t in _NEGATING_WHOLE_TOKENS or t.endswith("n't") for t in sentence.tokens)


def negation_differs(pair: LabeledPair) -> bool:
    """True iff exactly one side of the pair contains a negating n-gram."""
    return has_negation(pair.premise) != has_negation(pair.hypothesis)


def pair_has_negation(pair: LabeledPair) -> bool:
    """True iff either side of the pair contains a negating n-gram."""
    return has_negation(pair.premise) or has_negation(pair.hypothesis)


def _antonym_candidates(word: str, thesaurus: Thesaurus) -> frozenset[str]:
    # All antonyms of the word itself and of each of its synonyms (one hop).
    candidates = set(thesaurus.antonyms_of(word))
    for synonym in thesaurus.synonyms_of(word):
        candidates |= thesaurus.antonyms_of(synonym)
    return frozenset(candidates)


def has_antonym_pair(pair: LabeledPair, thesaurus: Thesaurus) -> bool:
    """True iff the hypothesis contains an antonym of some premise word.

    For each premise token, the candidate set is the antonyms of the token
    and of all its synonyms; the check is directional premise->hypothesis.
    """
    hypothesis_tokens = set(pair.hypothesis.tokens)
    for token in set(pair.premise.tokens):
        if _antonym_candidates(token, thesaurus) & hypothesis_tokens:
            return True
    return False


def antonym_predicate(thesaurus: Thesaurus) -> Callable[[LabeledPair], bool]:
    """Corpus-scale variant of :func:`has_antonym_pair` with a per-word memo."""
    memo: dict[str, frozenset[str]] = {}

    def predicate(pair: LabeledPair) -> bool:
        hypothesis_tokens = set(pair.hypothesis.tokens)
        for token in set(pair.premise.tokens):
            candidates = memo.get(token)
            if candidates is None:
                candidates = memo[token] = _antonym_candidates(token, thesaurus)
            if candidates & hypothesis_tokens:
                return True
        return False

    return predicate


@dataclass(frozen=True)
class ConditionalStats:
    """Joint and conditional counts of a binary pair predicate vs. the labels."""

    predicate_name: str
    joint_counts: dict[Label, int]
    label_counts: dict[Label, int]
    predicate_count: int
    total: int

    def p_pred_given_label(self, label: Label) -> float | None:
        """P(predicate | label); None (undefined) when the label never occurs."""
        if self.label_counts[label] == 0:
            return None
        return self.joint_counts[label] / self.label_counts[label]

    def p_label_given_pred(self, label: Label) -> float | None:
        """P(label | predicate); None (undefined) when the predicate never fires."""
        if self.predicate_count == 0:
            return None
        return self.joint_counts[label] / self.predicate_count


def conditional_stats(
    corpus: Corpus,
    predicate: Callable[[LabeledPair], bool],
    name: str,
    threads: int = 1,
) -> ConditionalStats:
    """Exact joint counting of ``predicate`` against the gold labels."""
    if len(corpus) == 0:
        raise DataError("conditional_stats of an empty corpus")
    flags = _chunked_map(predicate, corpus.pairs, threads)
    joint = {label: 0 for label in LABEL_ORDER}
    label_counts = {label: 0 for label in LABEL_ORDER}
    for pair, flag in zip(corpus, flags):
        label_counts[pair.label] += 1
        if flag:
            joint[pair.label] += 1
    return ConditionalStats(
        predicate_name=name,
        joint_counts=joint,
        label_counts=label_counts,
        predicate_count=sum(joint.values()),
        total=len(corpus),
    )


# ---------------------------------------------------------------------------
# Report rendering.  Every report embeds the corpus name, the predicate
# name (where applicable), the thesaurus file hash (when one was used) and
# the tokenizer version, so numbers stay auditable.
# ---------------------------------------------------------------------------


def _meta_lines(corpus_name: str, predicate: str | None = None, thesaurus_hash: str | None = None) -> list[str]:
    parts = [f"corpus={corpus_name}", f"tokenizer={TOKENIZER_VERSION}"]
    if predicate:
        parts.append(f"predicate={predicate}")
    if thesaurus_hash:
        parts.append(f"thesaurus=sha256:{thesaurus_hash}")
    return ["# " + " ".join(parts)]


def _percent(value: float | None) -> str:
    return "undefined" if value is None else f"{100 * value:.2f}%"


def render_overlap_report(
    corpus: Corpus,
    ks: Sequence[int],
    ranking: OverlapRanking | None = None,
    fmt: str = "tsv",
) -> str:
    """Label distribution of the whole corpus and of each top-k overlap subset."""
    if ranking is None:
        ranking = rank_by_overlap(corpus)
    rows: list[tuple[str, dict[Label, float]]] = [
        ("All", top_k_label_distribution(ranking, corpus, len(corpus)))
    ]
    for k in sorted(ks, reverse=True):
        rows.append((str(k), top_k_label_distribution(ranking, corpus, k)))
    lines = _meta_lines(corpus.name)
    header = ["Top"] + [label.value for label in LABEL_ORDER]
    if fmt == "tsv":
        lines.append("\t".join(header))
        for name, dist in rows:
            lines.append("\t".join([name] + [f"{dist[label]:.6f}" for label in LABEL_ORDER]))
    else:
        lines.append("  ".join(f"{h:>14}" for h in header))
        for name, dist in rows:
            cells = [f"{name:>14}"] + [f"{_percent(dist[label]):>14}" for label in LABEL_ORDER]
            lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"


def render_conditional_report(
    stats: ConditionalStats,
    corpus_name: str,
    thesaurus_hash: str | None = None,
    fmt: str = "tsv",
) -> str:
    """Table of P(predicate | X) and P(X | predicate) for each label X."""
    name = stats.predicate_name
    lines = _meta_lines(corpus_name, predicate=name, thesaurus_hash=thesaurus_hash)
    header = ["X", f"P({name}|X)", f"P(X|{name})"]
    if fmt == "tsv":
        lines.append("\t".join(header))
        for label in LABEL_ORDER:
            given_label = stats.p_pred_given_label(label)
            given_pred = stats.p_label_given_pred(label)
            cells = [
                label.value,
                "undefined" if given_label is None else f"{given_label:.6f}",
                "undefined" if given_pred is None else f"{given_pred:.6f}",
            ]
            lines.append("\t".join(cells))
    else:
        lines.append("  ".join(f"{h:>22}" for h in header))
        for label in LABEL_ORDER:
            cells = [
                f"{'X = ' + label.value:>22}",
                f"{_percent(stats.p_pred_given_label(label)):>22}",
                f"{_percent(stats.p_label_given_pred(label)):>22}",
            ]
            lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"


def render_vocab_diff_report(
    flagged: Iterable[tuple[str, float, float]],
    name_a: str,
    name_b: str,
    threshold: float,
    fmt: str = "tsv",
) -> str:
    """Tokens whose occurrence rates differ by more than the threshold."""
    lines = [f"# corpus_a={name_a} corpus_b={name_b} threshold={threshold} tokenizer={TOKENIZER_VERSION}"]
    if fmt == "tsv":
        lines.append("token\trate_a\trate_b")
        for token, ra, rb in flagged:
            lines.append(f"{token}\t{ra:.6f}\t{rb:.6f}")
    else:
        lines.append(f"{'token':>16}  {'rate_a':>10}  {'rate_b':>10}")
        for token, ra, rb in flagged:
            lines.append(f"{token:>16}  {100 * ra:>9.3f}%  {100 * rb:>9.3f}%")
    return "\n".join(lines) + "\n"
