"""Significance testing for accuracy comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ProportionTest:
    z: float
    p_value: float
    rate_a: float
    rate_b: float


def two_proportion_test(correct_a: int, n_a: int, correct_b: int, n_b: int) -> ProportionTest:
    """Two-sided two-proportion z-test with a pooled standard error.

    Used to compare two classifiers' accuracies on (possibly different)
    test sets.  A zero pooled standard error (both rates 0 or both 1)
    gives z=0, p=1: no evidence of a difference.
    """
    if n_a <= 0 or n_b <= 0:
        raise ValueError("sample sizes must be positive")
    if not 0 <= correct_a <= n_a or not 0 <= correct_b <= n_b:
        raise ValueError("correct counts must lie within [0, n]")
    rate_a = correct_a / n_a
    rate_b = correct_b / n_b
    pooled = (correct_a + correct_b) / (n_a + n_b)
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n_a + 1.0 / n_b))
    if se == 0.0:
        return ProportionTest(z=0.0, p_value=1.0, rate_a=rate_a, rate_b=rate_b)
    z = (rate_a - rate_b) / se
    p_value = math.erfc(abs(z) / math.sqrt(2.0))
    return ProportionTest(z=z, p_value=p_value, rate_a=rate_a, rate_b=rate_b)
