"""Synthetic multi-annotator datasets and the naive reference oracle.

The generator plants a true label per unit and flips each worker's copy to a
uniformly random *different* label with that worker's error rate, which makes
"low agreement identifies the weak worker" a testable claim. The reference
oracle recomputes every coefficient by definition-level per-unit loops,
sharing no computation code with :mod:`agreekit.metrics`; it exists to catch
correlated bugs in the fast path.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import EmptyDataset
from .metrics import (
    CHANCE_IS_ONE,
    DEFAULT_MIN_UNITS_PER_PAIR,
    INSUFFICIENT_PAIRS,
    SINGLE_LABEL,
    AgreementProfile,
)
from .model import MISSING, LabelSpace, ReliabilityData, UnitKey

SIM_DOC_CLASS = "sim"


def _padded_names(prefix: str, count: int) -> tuple[str, ...]:
    width = len(str(count - 1))
    return tuple(f"{prefix}{i:0{width}d}" for i in range(count))


@dataclass(frozen=True)
class SimulationSpec:
    """Parameters of one synthetic dataset.

    ``true_label_distribution`` is either the string "uniform" or an explicit
    probability vector of length ``n_labels``; ``coverage`` is the probability
    that a worker labels any given unit.
    """

    n_units: int
    n_labels: int
    worker_error_rates: tuple[float, ...]
    coverage: float = 1.0
    true_label_distribution: str | tuple[float, ...] = "uniform"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "worker_error_rates", tuple(float(e) for e in self.worker_error_rates)
        )
        if self.n_units < 1:
            raise ValueError("n_units must be >= 1")
        if self.n_labels < 2:
            raise ValueError("n_labels must be >= 2")
        if len(self.worker_error_rates) < 2:
            raise ValueError("need at least two workers")
        if any(not 0.0 <= e <= 1.0 for e in self.worker_error_rates):
            raise ValueError("error rates must be in [0, 1]")
        if not 0.0 < self.coverage <= 1.0:
            raise ValueError("coverage must be in (0, 1]")
        if self.true_label_distribution != "uniform":
            probs = tuple(float(p) for p in self.true_label_distribution)
            if len(probs) != self.n_labels:
                raise ValueError("probability vector length must equal n_labels")
            if any(p < 0.0 for p in probs):
                raise ValueError("probabilities must be non-negative")
            if abs(sum(probs) - 1.0) > 1e-12:
                raise ValueError("probability vector must sum to 1")
            object.__setattr__(self, "true_label_distribution", probs)

    @classmethod
    def from_dict(cls, obj: dict) -> "SimulationSpec":
        known = {
            "n_units",
            "n_labels",
            "worker_error_rates",
            "coverage",
            "true_label_distribution",
            "seed",
        }
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown simulation spec keys: {sorted(unknown)}")
        kwargs = dict(obj)
        if isinstance(kwargs.get("true_label_distribution"), list):
            kwargs["true_label_distribution"] = tuple(
                kwargs["true_label_distribution"]
            )
        if "worker_error_rates" in kwargs:
            kwargs["worker_error_rates"] = tuple(kwargs["worker_error_rates"])
        return cls(**kwargs)


def generate(spec: SimulationSpec) -> tuple[ReliabilityData, dict[UnitKey, str]]:
    """Draw one dataset; bit-identical for a fixed spec.

    The draw order is fixed (truths, then per worker: coverage, error, and
    wrong-label vectors, each of length n_units), so two specs differing only
    in coverage share the same truths and flip decisions.
    """
    rng = np.random.default_rng(spec.seed)
    k = spec.n_labels
    n = spec.n_units
    if spec.true_label_distribution == "uniform":
        truth = rng.integers(0, k, size=n)
    else:
        truth = rng.choice(k, size=n, p=np.asarray(spec.true_label_distribution))
    n_workers = len(spec.worker_error_rates)
    grid = np.full((n, n_workers), MISSING, dtype=np.int32)
    for w, rate in enumerate(spec.worker_error_rates):
        covered = rng.random(n) < spec.coverage
        flipped = rng.random(n) < rate
        # uniform over the k-1 labels other than the truth
        wrong = rng.integers(0, k - 1, size=n)
        wrong = wrong + (wrong >= truth)
        labels = np.where(flipped, wrong, truth)
        grid[covered, w] = labels[covered]

    label_names = _padded_names("c", k)
    worker_names = _padded_names("w", n_workers)
    id_width = len(str(n - 1))
    units = tuple(
        UnitKey(SIM_DOC_CLASS, f"u{i:0{id_width}d}", "f0") for i in range(n)
    )
    truth_map = {units[i]: label_names[int(truth[i])] for i in range(n)}
    present = (grid != MISSING).any(axis=1)
    keep = np.flatnonzero(present)
    data = ReliabilityData(
        [units[i] for i in keep],
        worker_names,
        LabelSpace(label_names, origin="declared"),
        grid[keep, :],
    )
    return data, truth_map


def _naive_cohen(values_a: list[int], values_b: list[int]) -> tuple[float, str | None] | None:
    """Textbook two-rater kappa over positions where both values are present."""
    pairs = [
        (a, b) for a, b in zip(values_a, values_b) if a != MISSING and b != MISSING
    ]
    if not pairs:
        return None
    n = len(pairs)
    agree = 0
    row: Counter = Counter()
    col: Counter = Counter()
    for a, b in pairs:
        if a == b:
            agree += 1
        row[a] += 1
        col[b] += 1
    pe_num = sum(row[label] * col.get(label, 0) for label in row)
    if pe_num == n * n:
        return (1.0 if agree == n else 0.0), CHANCE_IS_ONE
    p_o = agree / n
    p_e = pe_num / (n * n)
    return (p_o - p_e) / (1.0 - p_e), None


def reference_metrics(
    data: ReliabilityData,
    min_units_per_pair: int = DEFAULT_MIN_UNITS_PER_PAIR,
) -> AgreementProfile:
    """Recompute profile() by direct enumeration; used as a correctness oracle."""
    n_annotators = data.n_annotators
    unit_values = [
        [int(v) for v in data.grid[u] if int(v) != MISSING]
        for u in range(data.n_units)
    ]
    included = [vals for vals in unit_values if len(vals) >= 2]
    if not included:
        raise EmptyDataset(
            "no unit has two or more present annotations after exclusions"
        )
    flags: set[str] = set()

    # percent agreement: per-unit fraction of agreeing value pairs
    per_unit = []
    for vals in included:
        agree = sum(1 for x, y in combinations(vals, 2) if x == y)
        total = len(vals) * (len(vals) - 1) // 2
        per_unit.append(agree / total)
    percent = sum(per_unit) / len(per_unit)

    # Fleiss: per-unit P_i, pooled chance agreement
    p_is = []
    pooled: Counter = Counter()
    for vals in included:
        counts = Counter(vals)
        r = len(vals)
        p_is.append(
            sum(c * (c - 1) for c in counts.values()) / (r * (r - 1))
        )
        pooled.update(counts)
    p_bar = sum(p_is) / len(p_is)
    if len(pooled) == 1:
        fleiss = 1.0 if p_bar == 1.0 else 0.0
        flags.add(SINGLE_LABEL)
    else:
        total = sum(pooled.values())
        p_e = sum(c * c for c in pooled.values()) / (total * total)
        fleiss = (p_bar - p_e) / (1.0 - p_e)

    # alpha: ordered value pairs weighted 1/(m - 1)
    o: dict[tuple[int, int], float] = {}
    n_total = 0
    observed_labels: set[int] = set()
    for vals in included:
        m = len(vals)
        n_total += m
        observed_labels.update(vals)
        weight = 1.0 / (m - 1)
        for i in range(m):
            for j in range(m):
                if i != j:
                    key = (vals[i], vals[j])
                    o[key] = o.get(key, 0.0) + weight
    diag = sum(v for (a, b), v in o.items() if a == b)
    if len(observed_labels) == 1:
        d_o = 1.0 - diag / n_total
        alpha = 1.0 if d_o == 0.0 else 0.0
        flags.add(SINGLE_LABEL)
    else:
        marginals: Counter = Counter()
        for vals in included:
            marginals.update(vals)
        d_o = 1.0 - diag / n_total
        de_num = sum(c * (c - 1) for c in marginals.values())
        d_e = 1.0 - de_num / (n_total * (n_total - 1))
        alpha = 1.0 - d_o / d_e

    # Cohen: unweighted mean over qualifying pairs
    threshold = 1 if n_annotators == 2 else min_units_per_pair
    columns = [
        [int(data.grid[u, a]) for u in range(data.n_units)]
        for a in range(n_annotators)
    ]
    kappas = []
    for i, j in combinations(range(n_annotators), 2):
        pairable = sum(
            1
            for a, b in zip(columns[i], columns[j])
            if a != MISSING and b != MISSING
        )
        if pairable < threshold:
            continue
        result = _naive_cohen(columns[i], columns[j])
        if result is None:
            continue
        value, flag = result
        kappas.append(value)
        if flag is not None:
            flags.add(flag)
    if kappas:
        cohen = sum(kappas) / len(kappas)
    else:
        cohen = None
        flags.add(INSUFFICIENT_PAIRS)

    return AgreementProfile(
        percent_agreement=percent,
        cohen_kappa=cohen,
        fleiss_kappa=fleiss,
        krippendorff_alpha=alpha,
        n_units=data.n_units,
        n_annotators=n_annotators,
        n_labels=len(data.labels),
        degenerate_flags=frozenset(flags),
    )
