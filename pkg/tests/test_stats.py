import random

import pytest
from scipy.stats import fisher_exact

from compnli import two_proportion_test


class TestTwoProportionTest:
    def test_identical_samples_give_p_one(self):
        result = two_proportion_test(50, 100, 50, 100)
        assert result.z == 0.0
        assert result.p_value == 1.0

    def test_extreme_difference_significant(self):
        result = two_proportion_test(90, 100, 10, 100)
        assert result.p_value < 1e-6

    def test_all_failures_both_sides(self):
        result = two_proportion_test(0, 10, 0, 10)
        assert result.p_value == 1.0

    def test_all_successes_both_sides(self):
        result = two_proportion_test(10, 10, 10, 10)
        assert result.p_value == 1.0

    def test_rates_reported(self):
        result = two_proportion_test(30, 40, 10, 50)
        assert result.rate_a == pytest.approx(0.75)
        assert result.rate_b == pytest.approx(0.2)

    def test_symmetric_under_swap(self):
        forward = two_proportion_test(37, 60, 12, 45)
        backward = two_proportion_test(12, 45, 37, 60)
        assert forward.p_value == pytest.approx(backward.p_value)
        assert forward.z == pytest.approx(-backward.z)

    def test_invalid_inputs_rejected(self):
        with pytest.raises(ValueError):
            two_proportion_test(5, 0, 1, 10)
        with pytest.raises(ValueError):
            two_proportion_test(11, 10, 1, 10)
        with pytest.raises(ValueError):
            two_proportion_test(-1, 10, 1, 10)

    def test_known_value(self):
        # classic pooled z: p1=0.6, p2=0.4, n=100 each -> z = 0.2/sqrt(0.5*0.5*0.02)
        result = two_proportion_test(60, 100, 40, 100)
        assert result.z == pytest.approx(2.8284271247, abs=1e-9)
        assert result.p_value == pytest.approx(0.004677734981, rel=1e-6)

    def test_p_value_range(self):
        rng = random.Random(7)
        for _ in range(200):
            n_a = rng.randint(1, 300)
            n_b = rng.randint(1, 300)
            result = two_proportion_test(
                rng.randint(0, n_a), n_a, rng.randint(0, n_b), n_b
            )
            assert 0.0 <= result.p_value <= 1.0

    def test_agrees_with_fisher_exact_within_factor_two(self):
        # The normal approximation should track the exact test on tables
        # that are large enough for it to be appropriate.
        rng = random.Random(13)
        checked = 0
        for _ in range(300):
            n_a = rng.randint(80, 250)
            n_b = rng.randint(80, 250)
            base = rng.uniform(0.25, 0.75)
            correct_a = sum(rng.random() < base for _ in range(n_a))
            correct_b = sum(rng.random() < base for _ in range(n_b))
            expected = [
                correct_a, n_a - correct_a, correct_b, n_b - correct_b,
                base * min(n_a, n_b), (1 - base) * min(n_a, n_b),
            ]
            if min(expected) < 10:
                continue
            ours = two_proportion_test(correct_a, n_a, correct_b, n_b)
            _, exact_p = fisher_exact(
                [[correct_a, n_a - correct_a], [correct_b, n_b - correct_b]]
            )
            if exact_p < 1e-12:
                assert ours.p_value < 1e-10
            else:
                assert exact_p / 2 <= max(ours.p_value, 1e-300) <= exact_p * 2
            checked += 1
        assert checked >= 50
