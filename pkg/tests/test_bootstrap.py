"""Unit-bootstrap confidence intervals: determinism, degeneracy, coverage."""

from __future__ import annotations

import pytest

from agreekit.errors import InsufficientPairs
from agreekit.metrics import bootstrap_ci
from agreekit.simulate import SimulationSpec, generate

from conftest import make_data


@pytest.fixture
def perfect(perfect_data):
    return perfect_data


@pytest.mark.parametrize(
    "statistic,annotators",
    [("alpha", None), ("fleiss", None), ("cohen", ("A", "B"))],
)
def test_perfect_agreement_ci_is_unit(perfect, statistic, annotators):
    lo, hi = bootstrap_ci(
        perfect, statistic, n_resamples=200, confidence=0.95, seed=3, annotators=annotators
    )
    assert (lo, hi) == (1.0, 1.0)


def test_fixed_seed_is_deterministic(two_rater_data):
    a = bootstrap_ci(two_rater_data, "alpha", n_resamples=300, seed=42)
    b = bootstrap_ci(two_rater_data, "alpha", n_resamples=300, seed=42)
    assert a == b


def test_different_seeds_differ():
    spec = SimulationSpec(n_units=100, n_labels=3, worker_error_rates=(0.3, 0.3), seed=0)
    data, _ = generate(spec)
    a = bootstrap_ci(data, "alpha", n_resamples=300, seed=1)
    b = bootstrap_ci(data, "alpha", n_resamples=300, seed=2)
    assert a != b


def test_interval_is_ordered(two_rater_data):
    lo, hi = bootstrap_ci(two_rater_data, "fleiss", n_resamples=500, seed=9)
    assert lo <= hi


def test_validation_errors(two_rater_data):
    with pytest.raises(ValueError):
        bootstrap_ci(two_rater_data, "alpha", n_resamples=50)
    with pytest.raises(ValueError):
        bootstrap_ci(two_rater_data, "alpha", confidence=1.0)
    with pytest.raises(ValueError):
        bootstrap_ci(two_rater_data, "cohen")  # annotators required
    with pytest.raises(ValueError):
        bootstrap_ci(two_rater_data, "median")


def test_insufficient_pairs_on_full_data():
    data = make_data({"A": ["x", "y", None, None], "B": [None, None, "x", "y"]})
    with pytest.raises(InsufficientPairs):
        bootstrap_ci(data, "alpha")
    with pytest.raises(InsufficientPairs):
        bootstrap_ci(data, "cohen", annotators=("A", "B"))


def test_independent_annotators_straddle_zero_sample():
    """Spot check of the coverage property (full 100-seed run in acceptance)."""
    straddle = 0
    for seed in range(10):
        spec = SimulationSpec(
            n_units=500, n_labels=4, worker_error_rates=(0.75, 0.75), seed=seed
        )
        data, _ = generate(spec)
        lo, hi = bootstrap_ci(
            data, "cohen", n_resamples=300, seed=seed + 10_000, annotators=("w0", "w1")
        )
        if lo < 0.0 < hi:
            straddle += 1
    assert straddle >= 8
