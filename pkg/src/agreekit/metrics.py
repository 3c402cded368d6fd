"""Chance-corrected agreement coefficients over reliability grids.

Implements percent agreement, Cohen's kappa, Fleiss's kappa, and
Krippendorff's alpha (nominal), the contingency/coincidence structures they
need, and unit-bootstrap confidence intervals.

Degenerate-chance convention: when expected agreement is 1 (or expected
disagreement is 0) the coefficient is reported as 1.0 under perfect agreement
and 0.0 otherwise, together with an explicit flag, never NaN, so reports
stay total. Integer counts are kept exact until the final division; the
degeneracy tests themselves are integer-exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import (
    EmptyDataset,
    InsufficientPairs,
    NoPairableUnits,
)
from .model import LabelSpace, ReliabilityData

# degeneracy flags
SINGLE_LABEL = "single_label"
INSUFFICIENT_PAIRS = "insufficient_pairs"
CHANCE_IS_ONE = "chance_is_one"

DEFAULT_MIN_UNITS_PER_PAIR = 10


@dataclass(frozen=True)
class ConfusionTable:
    """Label-by-label counts for one annotator pair over their shared units."""

    labels: LabelSpace
    counts: np.ndarray  # (k, k) int64; rows = first annotator, cols = second
    n_pairable: int


@dataclass(frozen=True)
class CoincidenceMatrix:
    """Symmetric label-pair coincidence counts.

    Each unit with m >= 2 present values contributes 1/(m - 1) per ordered
    value pair, so its total mass is m; ``n_c`` are the (integer) per-label
    marginals and ``n`` the total.
    """

    labels: LabelSpace
    o: np.ndarray  # (k, k) float64, symmetric
    n_c: np.ndarray  # (k,) int64 marginal totals
    n: int


@dataclass(frozen=True)
class AgreementProfile:
    """The three coefficients plus supporting counts for one dataset slice."""

    percent_agreement: float
    cohen_kappa: float | None
    fleiss_kappa: float | None
    krippendorff_alpha: float | None
    n_units: int
    n_annotators: int
    n_labels: int
    degenerate_flags: frozenset[str]


def confusion_table(data: ReliabilityData, a1: str, a2: str) -> ConfusionTable:
    """Count label pairs over units where both annotators are present."""
    i1, i2 = data.annotator_index(a1), data.annotator_index(a2)
    counts = _backend.pair_confusion(
        np.ascontiguousarray(data.grid[:, i1]),
        np.ascontiguousarray(data.grid[:, i2]),
        len(data.labels),
    )
    n = int(counts.sum())
    if n == 0:
        raise NoPairableUnits(f"annotators {a1!r} and {a2!r} share no labeled unit")
    counts.flags.writeable = False
    return ConfusionTable(labels=data.labels, counts=counts, n_pairable=n)


def _cohen_from_counts(counts: np.ndarray) -> tuple[float, str | None]:
    """kappa = (p_o - p_e) / (1 - p_e) with p_e from the two marginals.

    p_o = sum(diag)/n, p_e = sum_k row_k * col_k / n^2. The p_e == 1 test is
    exact (integer cross-product against n^2).
    """
    n = int(counts.sum())
    diag = int(np.trace(counts))
    row = counts.sum(axis=1)
    col = counts.sum(axis=0)
    pe_num = int(row @ col)
    if pe_num == n * n:
        return (1.0 if diag == n else 0.0), CHANCE_IS_ONE
    p_o = diag / n
    p_e = pe_num / (n * n)
    return (p_o - p_e) / (1.0 - p_e), None


def cohen_kappa(table: ConfusionTable) -> tuple[float, str | None]:
    """Cohen's kappa for one annotator pair, with its degeneracy signal."""
    return _cohen_from_counts(table.counts)


def _fleiss_from_counts(counts: np.ndarray) -> tuple[float, str | None]:
    """Fleiss's kappa from per-unit label counts, tolerating unequal raters.

    Per unit i with r_i >= 2 ratings, P_i = [sum_j n_ij (n_ij - 1)] /
    [r_i (r_i - 1)]; kappa = (P - P_e) / (1 - P_e) where P is the unweighted
    mean of the included P_i and P_e = sum_j p_j^2 over pooled label
    proportions p_j of all included ratings.
    """
    r = counts.sum(axis=1)
    included = r >= 2
    if not included.any():
        raise InsufficientPairs("no unit has two or more ratings")
    c = counts[included]
    r = r[included]
    sum_sq = (c * c).sum(axis=1)
    p_i = (sum_sq - r) / (r * (r - 1.0))
    p_bar = float(p_i.mean())
    pooled = c.sum(axis=0)
    if int(np.count_nonzero(pooled)) == 1:
        return (1.0 if p_bar == 1.0 else 0.0), SINGLE_LABEL
    total = int(pooled.sum())
    p_e = int((pooled * pooled).sum()) / (total * total)
    return (p_bar - p_e) / (1.0 - p_e), None


def fleiss_kappa(data: ReliabilityData) -> tuple[float, str | None]:
    """Fleiss's kappa over the whole grid; units with < 2 ratings are excluded."""
    counts = _backend.label_counts(data.grid, len(data.labels))
    return _fleiss_from_counts(counts)


def coincidence_matrix(data: ReliabilityData) -> CoincidenceMatrix:
    """Build the coincidence matrix; units with < 2 present values are excluded."""
    counts = _backend.label_counts(data.grid, len(data.labels))
    o, n_c, n = _backend.coincidence_from_counts(counts)
    if n == 0:
        raise InsufficientPairs("no unit has two or more present values")
    o.flags.writeable = False
    n_c.flags.writeable = False
    return CoincidenceMatrix(labels=data.labels, o=o, n_c=n_c, n=n)


def _alpha_from_coincidence(
    o: np.ndarray, n_c: np.ndarray, n: int
) -> tuple[float, str | None]:
    """alpha = 1 - D_o / D_e with nominal disagreement.

    D_o = 1 - sum_c o_cc / n and D_e = 1 - sum_c n_c (n_c - 1) / (n (n - 1)).
    The D_e == 0 case is exactly the single-label case, detected on the
    integer marginals.
    """
    if int(np.count_nonzero(n_c)) == 1:
        d_o = 1.0 - float(np.trace(o)) / n
        return (1.0 if d_o == 0.0 else 0.0), SINGLE_LABEL
    d_o = 1.0 - float(np.trace(o)) / n
    nc = n_c.astype(np.int64)
    de_num = int((nc * (nc - 1)).sum())
    d_e = 1.0 - de_num / (n * (n - 1))
    return 1.0 - d_o / d_e, None


def krippendorff_alpha(m: CoincidenceMatrix) -> tuple[float, str | None]:
    """Krippendorff's alpha (nominal) from a coincidence matrix."""
    return _alpha_from_coincidence(m.o, m.n_c, m.n)


def _pair_iter(n_annotators: int):
    return itertools.combinations(range(n_annotators), 2)


def _mean_pairwise_cohen(
    grid: np.ndarray, n_labels: int, min_units_per_pair: int
) -> tuple[float | None, set[str]]:
    """Unweighted mean of pairwise kappas over qualifying pairs.

    With exactly two annotators the single pair qualifies whenever it has any
    pairable unit; with more, pairs below ``min_units_per_pair`` pairable
    units are excluded (kappa on tiny overlap is noise).
    """
    n_annotators = grid.shape[1]
    threshold = 1 if n_annotators == 2 else min_units_per_pair
    values = []
    flags: set[str] = set()
    for i, j in _pair_iter(n_annotators):
        counts = _backend.pair_confusion(
            np.ascontiguousarray(grid[:, i]),
            np.ascontiguousarray(grid[:, j]),
            n_labels,
        )
        n = int(counts.sum())
        if n < threshold:
            continue
        value, flag = _cohen_from_counts(counts)
        values.append(value)
        if flag is not None:
            flags.add(flag)
    if not values:
        return None, {INSUFFICIENT_PAIRS}
    return float(np.mean(values)), flags


def profile(
    data: ReliabilityData,
    min_units_per_pair: int = DEFAULT_MIN_UNITS_PER_PAIR,
) -> AgreementProfile:
    """Compute all four statistics for one dataset slice.

    percent_agreement is the unweighted mean, over units with >= 2 present
    values, of the fraction of agreeing value pairs within the unit. The
    Cohen column is the qualifying-pair mean (see _mean_pairwise_cohen);
    degeneracy flags from every coefficient are unioned.
    """
    counts = _backend.label_counts(data.grid, len(data.labels))
    r = counts.sum(axis=1)
    included = r >= 2
    if not included.any():
        raise EmptyDataset(
            "no unit has two or more present annotations after exclusions"
        )
    flags: set[str] = set()

    c = counts[included]
    ri = r[included]
    p_i = ((c * c).sum(axis=1) - ri) / (ri * (ri - 1.0))
    percent = float(p_i.mean())

    fleiss, f_flag = _fleiss_from_counts(counts)
    if f_flag is not None:
        flags.add(f_flag)

    o, n_c, n = _backend.coincidence_from_counts(counts)
    alpha, a_flag = _alpha_from_coincidence(o, n_c, n)
    if a_flag is not None:
        flags.add(a_flag)

    cohen, c_flags = _mean_pairwise_cohen(
        data.grid, len(data.labels), min_units_per_pair
    )
    flags |= c_flags

    return AgreementProfile(
        percent_agreement=percent,
        cohen_kappa=cohen,
        fleiss_kappa=fleiss,
        krippendorff_alpha=alpha,
        n_units=data.n_units,
        n_annotators=data.n_annotators,
        n_labels=len(data.labels),
        degenerate_flags=frozenset(flags),
    )


def _percentile(sorted_values: np.ndarray, q: float) -> float:
    """Linear-interpolation percentile on a pre-sorted array, q in [0, 1]."""
    if len(sorted_values) == 1:
        return float(sorted_values[0])
    pos = q * (len(sorted_values) - 1)
    lo = int(np.floor(pos))
    hi = min(lo + 1, len(sorted_values) - 1)
    frac = pos - lo
    return float(sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac)


def bootstrap_ci(
    data: ReliabilityData,
    statistic: str,
    n_resamples: int = 1000,
    confidence: float = 0.95,
    seed: int = 0,
    annotators: tuple[str, str] | None = None,
) -> tuple[float, float]:
    """Unit-bootstrap percentile interval for one coefficient.

    Units (grid rows) are resampled with replacement; the resample index
    matrix is a pure function of (seed, n_resamples, unit count), so the
    interval is deterministic regardless of evaluation order. Resamples where
    the statistic is degenerate contribute its convention value; resamples
    where it is uncomputable (no pairable unit survived) are skipped.

    statistic: "cohen" (requires ``annotators=(a1, a2)``), "fleiss", or "alpha".
    """
    if n_resamples < 100:
        raise ValueError("n_resamples must be >= 100")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    n_labels = len(data.labels)

    if statistic == "cohen":
        if annotators is None:
            raise ValueError("statistic 'cohen' requires annotators=(a1, a2)")
        i1 = data.annotator_index(annotators[0])
        i2 = data.annotator_index(annotators[1])
        col_a = np.ascontiguousarray(data.grid[:, i1])
        col_b = np.ascontiguousarray(data.grid[:, i2])
        if int(_backend.pair_confusion(col_a, col_b, n_labels).sum()) == 0:
            raise InsufficientPairs(
                f"annotators {annotators[0]!r} and {annotators[1]!r} share no labeled unit"
            )

        def evaluate(idx: np.ndarray) -> float | None:
            counts = _backend.pair_confusion(
                np.ascontiguousarray(col_a[idx]),
                np.ascontiguousarray(col_b[idx]),
                n_labels,
            )
            if int(counts.sum()) == 0:
                return None
            return _cohen_from_counts(counts)[0]

    elif statistic in ("fleiss", "alpha"):
        counts_full = _backend.label_counts(data.grid, n_labels)
        if not (counts_full.sum(axis=1) >= 2).any():
            raise InsufficientPairs("no unit has two or more present values")

        if statistic == "fleiss":

            def evaluate(idx: np.ndarray) -> float | None:
                c = counts_full[idx]
                if not (c.sum(axis=1) >= 2).any():
                    return None
                return _fleiss_from_counts(c)[0]

        else:

            def evaluate(idx: np.ndarray) -> float | None:
                o, n_c, n = _backend.coincidence_from_counts(
                    np.ascontiguousarray(counts_full[idx])
                )
                if n == 0:
                    return None
                return _alpha_from_coincidence(o, n_c, n)[0]

    else:
        raise ValueError(
            f"unknown statistic {statistic!r} (expected 'cohen', 'fleiss', or 'alpha')"
        )

    rng = np.random.default_rng(seed)
    index_matrix = rng.integers(0, data.n_units, size=(n_resamples, data.n_units))
    values = []
    for row in index_matrix:
        value = evaluate(row)
        if value is not None:
            values.append(value)
    if not values:
        raise InsufficientPairs("statistic uncomputable on every resample")
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    tail = (1.0 - confidence) / 2.0
    return _percentile(ordered, tail), _percentile(ordered, 1.0 - tail)
