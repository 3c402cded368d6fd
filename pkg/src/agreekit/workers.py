"""Per-worker quality analytics: pairwise kappa matrices and outlier flagging.

A worker is flagged on two independent rules: an absolute kappa floor and a
deviation from the group mean. One tripped rule recommends retraining, both
recommend rework; workers with no usable pair get ``insufficient_data`` and
no recommendation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import FewerThanTwoAnnotators
from .metrics import DEFAULT_MIN_UNITS_PER_PAIR, _cohen_from_counts
from .model import ReliabilityData

BELOW_ABSOLUTE = "below_absolute"
BELOW_DEVIATION = "below_deviation"
INSUFFICIENT_DATA = "insufficient_data"

FLAG_ORDER = (BELOW_ABSOLUTE, BELOW_DEVIATION, INSUFFICIENT_DATA)

DEFAULT_MIN_ABS_KAPPA = 0.8
DEFAULT_DEVIATION_DELTA = 0.1


@dataclass(frozen=True)
class PairwiseMatrix:
    """Symmetric annotator-by-annotator kappa matrix; None marks unusable pairs."""

    annotators: tuple[str, ...]
    values: tuple[tuple[float | None, ...], ...]
    coefficient: str = "cohen"
    doc_class: str | None = None

    def cell(self, a1: str, a2: str) -> float | None:
        return self.values[self.annotators.index(a1)][self.annotators.index(a2)]

    def off_diagonal(self, index: int) -> list[float]:
        """Present cells pairing one annotator with each other annotator."""
        return [
            v
            for j, v in enumerate(self.values[index])
            if j != index and v is not None
        ]


@dataclass(frozen=True)
class WorkerStatus:
    annotator_id: str
    mean_pairwise_kappa: float | None
    n_pairs_used: int
    flags: frozenset[str]
    recommendation: str  # none | retrain | rework


@dataclass(frozen=True)
class WorkerFlagReport:
    per_worker: tuple[WorkerStatus, ...]
    min_abs_kappa: float
    deviation_delta: float
    group_mean: float | None
    coefficient: str = "cohen"
    doc_class: str | None = None


def pairwise_matrix(
    data: ReliabilityData,
    doc_class: str | None = None,
    min_units_per_pair: int = DEFAULT_MIN_UNITS_PER_PAIR,
) -> PairwiseMatrix:
    """Cohen's kappa for every annotator pair, one heatmap cell each.

    Cells with fewer than ``min_units_per_pair`` pairable units are absent;
    the diagonal is fixed at 1.0.
    """
    if doc_class is not None:
        data = data.slice(by_doc_class=doc_class)
    n = data.n_annotators
    if n < 2:
        raise FewerThanTwoAnnotators(
            f"pairwise matrix needs >= 2 annotators, found {n}"
        )
    k = len(data.labels)
    values: list[list[float | None]] = [
        [1.0 if i == j else None for j in range(n)] for i in range(n)
    ]
    for i, j in itertools.combinations(range(n), 2):
        counts = _backend.pair_confusion(
            np.ascontiguousarray(data.grid[:, i]),
            np.ascontiguousarray(data.grid[:, j]),
            k,
        )
        if int(counts.sum()) < min_units_per_pair:
            continue
        value, _ = _cohen_from_counts(counts)
        values[i][j] = value
        values[j][i] = value
    return PairwiseMatrix(
        annotators=data.annotators,
        values=tuple(tuple(row) for row in values),
        doc_class=doc_class,
    )


def flag_workers(
    matrix: PairwiseMatrix,
    min_abs_kappa: float = DEFAULT_MIN_ABS_KAPPA,
    deviation_delta: float = DEFAULT_DEVIATION_DELTA,
) -> WorkerFlagReport:
    """Apply the dual threshold rule to each worker's mean pairwise kappa."""
    if not 0.0 <= min_abs_kappa <= 1.0 or not 0.0 <= deviation_delta <= 1.0:
        raise ValueError("thresholds must be in [0, 1]")
    means: list[float | None] = []
    pair_counts: list[int] = []
    for i in range(len(matrix.annotators)):
        cells = matrix.off_diagonal(i)
        pair_counts.append(len(cells))
        means.append(sum(cells) / len(cells) if cells else None)
    present = [m for m in means if m is not None]
    group_mean = sum(present) / len(present) if present else None

    statuses = []
    for annotator, mean, n_pairs in zip(matrix.annotators, means, pair_counts):
        flags: set[str] = set()
        if mean is None:
            flags.add(INSUFFICIENT_DATA)
            recommendation = "none"
        else:
            if mean < min_abs_kappa:
                flags.add(BELOW_ABSOLUTE)
            if group_mean is not None and mean < group_mean - deviation_delta:
                flags.add(BELOW_DEVIATION)
            tripped = len(flags)
            recommendation = ("none", "retrain", "rework")[tripped]
        statuses.append(
            WorkerStatus(
                annotator_id=annotator,
                mean_pairwise_kappa=mean,
                n_pairs_used=n_pairs,
                flags=frozenset(flags),
                recommendation=recommendation,
            )
        )
    return WorkerFlagReport(
        per_worker=tuple(statuses),
        min_abs_kappa=min_abs_kappa,
        deviation_delta=deviation_delta,
        group_mean=group_mean,
        coefficient=matrix.coefficient,
        doc_class=matrix.doc_class,
    )


def has_quality_flags(report: WorkerFlagReport) -> bool:
    """True when any worker tripped a threshold rule (drives CLI exit code 2)."""
    return any(
        BELOW_ABSOLUTE in w.flags or BELOW_DEVIATION in w.flags
        for w in report.per_worker
    )


def class_summary(
    data: ReliabilityData,
    min_units_per_pair: int = DEFAULT_MIN_UNITS_PER_PAIR,
) -> list[tuple[str, float | None]]:
    """Mean of present pairwise kappas per document class (each pair once)."""
    out: list[tuple[str, float | None]] = []
    for doc_class in data.doc_classes():
        try:
            matrix = pairwise_matrix(
                data, doc_class=doc_class, min_units_per_pair=min_units_per_pair
            )
        except FewerThanTwoAnnotators:
            out.append((doc_class, None))
            continue
        cells = [
            matrix.values[i][j]
            for i, j in itertools.combinations(range(len(matrix.annotators)), 2)
            if matrix.values[i][j] is not None
        ]
        out.append((doc_class, sum(cells) / len(cells) if cells else None))
    return out
