"""Pure-numpy implementations of the hot grid kernels.

Fallback backend used when the compiled extension is unavailable (or forced
via AGREEKIT_BACKEND=python). Signatures and dtypes match ``_ckernels``
exactly; integer outputs are bit-identical, float outputs agree to rounding.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def label_counts(codes: np.ndarray, n_labels: int) -> np.ndarray:
    """Per-unit label histogram: (units, annotators) codes -> (units, n_labels) counts.

    ``codes`` holds label indices with -1 for missing cells.
    """
    n_units = codes.shape[0]
    flat = codes.astype(np.int64, copy=False).reshape(-1)
    unit_idx = np.repeat(np.arange(n_units, dtype=np.int64), codes.shape[1])
    present = flat >= 0
    return np.bincount(
        unit_idx[present] * n_labels + flat[present],
        minlength=n_units * n_labels,
    ).reshape(n_units, n_labels)


def pair_confusion(a: np.ndarray, b: np.ndarray, n_labels: int) -> np.ndarray:
    """Confusion counts between two annotator columns over units where both present."""
    a = a.astype(np.int64, copy=False)
    b = b.astype(np.int64, copy=False)
    both = (a >= 0) & (b >= 0)
    return np.bincount(
        a[both] * n_labels + b[both], minlength=n_labels * n_labels
    ).reshape(n_labels, n_labels)


_BLOCK = 1024


def coincidence_from_counts(counts: np.ndarray):
    """Accumulate the label-pair coincidence matrix from per-unit label counts.

    A unit with m >= 2 present values contributes n_c * (n_c' - [c == c'])
    / (m - 1) to cell (c, c'); units with m < 2 are excluded. Each unit's
    integer pair count is divided exactly once, so a unanimous unit adds
    m(m-1)/(m-1) = m to the diagonal with no rounding. Returns (o, n_c, n)
    where n_c are the exact integer marginals and n the total number of
    included values.
    """
    k = counts.shape[1]
    r = counts.sum(axis=1)
    included = r >= 2
    c = counts[included]
    if c.shape[0] == 0:
        return (
            np.zeros((k, k), dtype=np.float64),
            np.zeros(k, dtype=np.int64),
            0,
        )
    denom = (r[included] - 1).astype(np.float64)
    o = np.zeros((k, k), dtype=np.float64)
    diag = np.arange(k)
    for start in range(0, c.shape[0], _BLOCK):
        block = c[start : start + _BLOCK]
        pair_counts = block[:, :, None] * block[:, None, :]
        pair_counts[:, diag, diag] -= block
        o += (pair_counts / denom[start : start + _BLOCK, None, None]).sum(axis=0)
    n_c = c.sum(axis=0).astype(np.int64)
    n = int(r[included].sum())
    return o, n_c, n
