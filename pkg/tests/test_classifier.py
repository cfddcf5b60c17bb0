import json
import warnings
import zipfile
from collections import Counter

import numpy as np
import pytest

from compnli import (
    ConfusionMatrix,
    Corpus,
    DataError,
    EmbeddingTable,
    Label,
    PairClassifier,
    PairType,
    evaluate,
    finetune,
    load_classifier,
    make_pair,
    mix,
    save_classifier,
    split,
    symmetry_check,
    train,
)
from compnli.models.classifier import TrainingLog

from conftest import corpus_vocabulary


def quick_clf(table, corpus, dev=None, **kwargs):
    defaults = dict(encoder="bow", embeddings=table, hidden_units=16, max_epochs=3, seed=0)
    defaults.update(kwargs)
    clf = PairClassifier(**defaults)
    return clf.fit(corpus, dev=dev)


@pytest.fixture(scope="module")
def toy_separable():
    pairs = []
    for _ in range(5):
        pairs.append(make_pair("aa aa", "aa aa", "entailment"))
        pairs.append(make_pair("bb bb", "bb bb", "contradiction"))
    return Corpus(pairs=tuple(pairs), name="separable")


@pytest.fixture(scope="module")
def toy_table():
    return EmbeddingTable.random(["aa", "bb"], 4, seed=1)


class TestFit:
    def test_fitted_attributes(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        assert clf.network_.input_dim == 4 * 16
        assert clf.epochs_run_ == 3
        assert len(clf.log_.rows) == 3
        assert list(clf.classes_) == ["entailment", "neutral", "contradiction"]

    def test_y_must_be_none(self, table16, pooled):
        with pytest.raises(ValueError):
            PairClassifier(embeddings=table16).fit(pooled, y=[0] * len(pooled))

    def test_empty_corpus_rejected(self, table16):
        with pytest.raises(DataError):
            PairClassifier(embeddings=table16).fit(Corpus(pairs=()))

    def test_no_vocabulary_coverage_rejected(self, pooled):
        stranger = EmbeddingTable.random(["xylophone"], 4, seed=0)
        with pytest.raises(DataError):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                PairClassifier(embeddings=stranger, max_epochs=1).fit(pooled)

    def test_linearly_separable_toy_set(self, toy_table, toy_separable):
        clf = PairClassifier(
            embeddings=toy_table, hidden_units=8, max_epochs=50, batch_size=2, seed=0
        ).fit(toy_separable, dev=toy_separable)
        assert clf.log_.rows[-1].train_accuracy == 1.0
        assert clf.epochs_run_ <= 50

    def test_bit_identical_given_seed(self, table16, pooled):
        a = quick_clf(table16, pooled, seed=42)
        b = quick_clf(table16, pooled, seed=42)
        assert a.network_.get_flat().tobytes() == b.network_.get_flat().tobytes()

    def test_seed_changes_weights(self, table16, pooled):
        a = quick_clf(table16, pooled, seed=0)
        b = quick_clf(table16, pooled, seed=1)
        assert not np.array_equal(a.network_.get_flat(), b.network_.get_flat())

    def test_unknown_encoder_rejected(self, table16, pooled):
        with pytest.raises(ValueError):
            PairClassifier(encoder="bilstm", embeddings=table16).fit(pooled)


class TestSchedule:
    def test_pure_decay_without_dev(self, table16, pooled):
        clf = PairClassifier(
            embeddings=table16, hidden_units=8, max_epochs=4, learning_rate=0.1, lr_decay=0.9, seed=0
        ).fit(pooled)
        rates = [row.learning_rate for row in clf.log_.rows]
        assert rates == pytest.approx([0.1, 0.09, 0.081, 0.0729])

    def test_log_is_consistent_with_schedule_rule(self, table16, pooled):
        train_part, dev_part, _ = split(pooled, (100, 40, 0), seed=0)
        clf = quick_clf(table16, train_part, dev=dev_part, max_epochs=8, lr_decay=0.95, lr_drop=2.0)
        rows = clf.log_.rows
        for i in range(1, len(rows)):
            expected = rows[i - 1].learning_rate * 0.95
            if i >= 2 and rows[i - 1].dev_accuracy < rows[i - 2].dev_accuracy:
                expected /= 2.0
            assert rows[i].learning_rate == pytest.approx(expected)

    def test_floor_stops_training(self, table16, pooled):
        clf = PairClassifier(
            embeddings=table16, hidden_units=8, max_epochs=50,
            learning_rate=0.1, lr_decay=0.5, lr_floor=0.02, seed=0,
        ).fit(pooled)
        # 0.1 -> 0.05 -> 0.025 -> 0.0125 < floor, so the fourth epoch never runs
        assert clf.epochs_run_ == 3

    def test_zero_epochs(self, table16, pooled):
        clf = PairClassifier(embeddings=table16, max_epochs=0).fit(pooled)
        assert clf.epochs_run_ == 0
        assert len(clf.log_.rows) == 0
        assert clf.predict(pooled).shape == (len(pooled),)

    def test_log_tsv_layout(self, table16, pooled):
        clf = quick_clf(table16, pooled, dev=pooled, max_epochs=2)
        text = clf.log_.to_tsv()
        lines = text.strip().split("\n")
        assert lines[0].split("\t") == ["epoch", "learning_rate", "train_accuracy", "dev_accuracy"]
        assert len(lines) == 3


class TestPredict:
    def test_probabilities(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        probs = clf.predict_proba(pooled)
        assert probs.shape == (len(pooled), 3)
        assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-6)

    def test_predict_labels(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        predictions = clf.predict(pooled)
        assert all(isinstance(p, Label) for p in predictions)

    def test_accepts_raw_string_pairs(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        out = clf.predict([("the cat is more big than the dog", "the dog is more big than the cat")])
        assert out.shape == (1,)

    def test_score_uses_embedded_labels(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        accuracy = clf.score(pooled)
        agreement = np.mean([p == pair.label for p, pair in zip(clf.predict(pooled), pooled)])
        assert accuracy == pytest.approx(agreement)

    def test_unfitted_predict_rejected(self, table16):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            PairClassifier(embeddings=table16).predict([("a", "b")])

    def test_get_params_round_trip(self, table16):
        clf = PairClassifier(embeddings=table16, hidden_units=9, combiner="concat")
        params = clf.get_params()
        assert params["hidden_units"] == 9
        clone = PairClassifier(**params)
        assert clone.combiner == "concat"


class TestEvaluate:
    def test_confusion_counts_sum_to_size(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        report = evaluate(clf, pooled)
        assert report.confusion.total() == len(pooled)
        assert report.accuracy == pytest.approx(clf.score(pooled))

    def test_normalized_rows(self):
        matrix = ConfusionMatrix.from_labels(
            [Label.ENTAILMENT, Label.ENTAILMENT, Label.CONTRADICTION],
            [Label.ENTAILMENT, Label.NEUTRAL, Label.CONTRADICTION],
        )
        normalized = matrix.normalized()
        assert normalized[0].sum() == pytest.approx(1.0)
        assert normalized[1].sum() == 0.0  # empty neutral row stays zero

    def test_per_type_breakdown(self, table16, comparisons, pooled):
        clf = quick_clf(table16, pooled)
        report = evaluate(clf, comparisons[PairType.SAME])
        assert set(report.per_type) == {PairType.SAME}
        assert report.per_type[PairType.SAME].size == len(comparisons[PairType.SAME])

    def test_no_metadata_no_per_type(self, table16, pooled, snli_like):
        clf = quick_clf(table16, pooled)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)  # OOV tokens expected
            report = evaluate(clf, snli_like)
        assert report.per_type == {}

    def test_bow_confusion_rows_identical_for_e_and_c(self, table16, comparisons, pooled):
        clf = quick_clf(table16, pooled, max_epochs=4)
        for pair_type, corpus in comparisons.items():
            report = evaluate(clf, corpus)
            counts = report.confusion
            assert np.array_equal(counts.row(Label.ENTAILMENT), counts.row(Label.CONTRADICTION))
            assert report.accuracy <= 0.5


class TestSymmetry:
    def test_bow_has_zero_violations(self, table16, comparisons, pooled):
        clf = quick_clf(table16, pooled)
        for corpus in comparisons.values():
            report = symmetry_check(clf, corpus)
            assert report.ok
            assert report.n_twins == len(corpus) // 2

    def test_empty_corpus_rejected(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        with pytest.raises(DataError):
            symmetry_check(clf, Corpus(pairs=()))

    def test_missing_metadata_rejected(self, table16, pooled, snli_like):
        clf = quick_clf(table16, pooled)
        with pytest.raises(DataError):
            symmetry_check(clf, snli_like)

    def test_orphan_twin_rejected(self, table16, comparisons, pooled):
        clf = quick_clf(table16, pooled)
        corpus = comparisons[PairType.SAME]
        only_entailments = Corpus(
            pairs=tuple(p for p in corpus if p.label is Label.ENTAILMENT)
        )
        with pytest.raises(DataError):
            symmetry_check(clf, only_entailments)


class TestPersistence:
    def test_round_trip_predictions(self, tmp_path, table16, pooled):
        clf = quick_clf(table16, pooled)
        path = tmp_path / "model.npz"
        save_classifier(clf, path)
        loaded = load_classifier(path, table16)
        assert np.array_equal(loaded.predict_proba(pooled), clf.predict_proba(pooled))
        assert loaded.encoder == clf.encoder
        assert loaded.epochs_run_ == clf.epochs_run_

    def test_version_mismatch_fails_loudly(self, tmp_path, table16, pooled):
        clf = quick_clf(table16, pooled)
        path = tmp_path / "model.npz"
        save_classifier(clf, path)
        with np.load(path, allow_pickle=False) as data:
            arrays = {k: data[k] for k in data.files}
        arrays["format_version"] = np.int64(999)
        rigged = tmp_path / "rigged.npz"
        np.savez(rigged, **arrays)
        with pytest.raises(DataError):
            load_classifier(rigged, table16)

    def test_foreign_file_rejected(self, tmp_path, table16):
        path = tmp_path / "foreign.npz"
        np.savez(path, w1=np.zeros((2, 2)))
        with pytest.raises(DataError):
            load_classifier(path, table16)

    def test_dimension_mismatch_rejected(self, tmp_path, table16, pooled):
        clf = quick_clf(table16, pooled)
        path = tmp_path / "model.npz"
        save_classifier(clf, path)
        wrong = EmbeddingTable.random(["a"], 5, seed=0)
        with pytest.raises(DataError):
            load_classifier(path, wrong)

    def test_saved_bytes_deterministic(self, tmp_path, table16, pooled):
        clf = quick_clf(table16, pooled)
        first = tmp_path / "one.npz"
        second = tmp_path / "two.npz"
        save_classifier(clf, first)
        save_classifier(clf, second)
        assert first.read_bytes() == second.read_bytes()

    def test_container_is_plain_zip_of_npy(self, tmp_path, table16, pooled):
        clf = quick_clf(table16, pooled)
        path = tmp_path / "model.npz"
        save_classifier(clf, path)
        with zipfile.ZipFile(path) as archive:
            names = set(archive.namelist())
        assert {"w1.npy", "b1.npy", "w2.npy", "b2.npy", "meta.npy", "format_version.npy"} <= names


class TestFinetune:
    def test_zero_epochs_identical_weights(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        tuned = finetune(clf, pooled, max_epochs=0)
        assert tuned.network_.get_flat().tobytes() == clf.network_.get_flat().tobytes()

    def test_zero_learning_rate_identical_weights(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        tuned = finetune(clf, pooled, learning_rate=0.0, max_epochs=2)
        assert tuned.network_.get_flat().tobytes() == clf.network_.get_flat().tobytes()

    def test_original_model_untouched(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        before = clf.network_.get_flat().copy()
        finetune(clf, pooled, max_epochs=2)
        assert np.array_equal(clf.network_.get_flat(), before)

    def test_heldout_tracked_in_log(self, table16, pooled, comparisons):
        clf = quick_clf(table16, pooled)
        tuned = finetune(
            clf, comparisons[PairType.SAME], dev=comparisons[PairType.SAME],
            original_heldout=pooled, max_epochs=2,
        )
        assert tuned.log_.extra_columns() == ["original"]
        assert all("original" in row.extra for row in tuned.log_.rows)
        assert "original_accuracy" in tuned.log_.to_tsv()

    def test_incompatible_override_rejected(self, table16, pooled):
        clf = quick_clf(table16, pooled)
        with pytest.raises(DataError):
            finetune(clf, pooled, encoder="half_split", max_epochs=1)


class TestTrainWrapper:
    def test_returns_fitted_classifier(self, table16, pooled):
        train_part, dev_part, test_part = split(pooled, (100, 40, 40), seed=1)
        clf = train(train_part, dev_part, embeddings=table16, hidden_units=8, max_epochs=2)
        assert clf.epochs_run_ == 2
        assert all(row.dev_accuracy is not None for row in clf.log_.rows)
        assert 0.0 <= clf.score(test_part) <= 1.0


class TestMix:
    def test_sizes_add(self, pooled, snli_like):
        assert len(mix(pooled, snli_like, seed=0)) == len(pooled) + len(snli_like)

    def test_multiset_preserved(self, pooled, snli_like):
        mixed = mix(pooled, snli_like, seed=3)
        assert Counter(map(repr, mixed.pairs)) == Counter(map(repr, pooled.pairs + snli_like.pairs))

    def test_empty_side_allowed(self, snli_like):
        mixed = mix(snli_like, Corpus(pairs=()), seed=5)
        assert sorted(map(repr, mixed.pairs)) == sorted(map(repr, snli_like.pairs))

    def test_seed_determinism(self, pooled, snli_like):
        assert mix(pooled, snli_like, seed=9).pairs == mix(pooled, snli_like, seed=9).pairs


def test_training_log_handles_missing_extras():
    log = TrainingLog()
    from compnli.models.classifier import LogRow

    log.rows.append(LogRow(1, 0.1, 0.5, None, {"original": 0.25}))
    log.rows.append(LogRow(2, 0.09, 0.6, 0.5, {}))
    text = log.to_tsv()
    lines = text.splitlines()
    assert lines[0].endswith("original_accuracy")
    assert lines[1].split("\t")[3] == ""   # no dev accuracy that epoch
    assert lines[2].split("\t")[4] == ""   # no extra that epoch
