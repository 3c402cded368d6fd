"""Shared fixtures: small hand-checkable datasets and random-grid helpers."""

from __future__ import annotations

import numpy as np
import pytest

from agreekit.model import (
    AnnotationRecord,
    LabelSpace,
    ReliabilityData,
    UnitKey,
    build_reliability_matrix,
)


def make_data(
    columns: dict[str, list[str | None]],
    doc_class: str = "c",
    declared_labels: list[str] | None = None,
) -> ReliabilityData:
    """Build ReliabilityData from per-annotator label lists (None = missing)."""
    records = []
    n_units = len(next(iter(columns.values())))
    width = len(str(max(n_units - 1, 1)))
    for annotator, labels in columns.items():
        assert len(labels) == n_units
        for i, label in enumerate(labels):
            if label is not None:
                records.append(
                    AnnotationRecord(doc_class, "d0", f"i{i:0{width}d}", annotator, label)
                )
    return build_reliability_matrix(records, declared_labels=declared_labels)


def random_data(
    rng: np.random.Generator,
    max_units: int = 50,
    max_annotators: int = 6,
    max_labels: int = 5,
    max_missing: float = 0.4,
) -> ReliabilityData | None:
    """Random grid within the oracle-equivalence envelope; None if no cell present."""
    n_units = int(rng.integers(1, max_units + 1))
    n_annotators = int(rng.integers(2, max_annotators + 1))
    n_labels = int(rng.integers(2, max_labels + 1))
    missing_rate = float(rng.uniform(0.0, max_missing))
    grid = rng.integers(0, n_labels, size=(n_units, n_annotators)).astype(np.int32)
    grid[rng.random((n_units, n_annotators)) < missing_rate] = -1
    keep = (grid != -1).any(axis=1)
    grid = grid[keep]
    if grid.shape[0] == 0:
        return None
    width = len(str(max(grid.shape[0] - 1, 1)))
    units = [UnitKey("c", "d0", f"i{i:0{width}d}") for i in range(grid.shape[0])]
    annotators = [f"a{j}" for j in range(n_annotators)]
    labels = LabelSpace(tuple(f"L{k}" for k in range(n_labels)), origin="declared")
    return ReliabilityData(units, annotators, labels, grid)


@pytest.fixture
def two_rater_data() -> ReliabilityData:
    """A=[x,x,y,y], B=[x,y,y,y]: kappa=0.5, fleiss=7/15, alpha=8/15, percent=0.75."""
    return make_data({"A": list("xxyy"), "B": list("xyyy")}, doc_class="official")


@pytest.fixture
def fleiss_worked_data() -> ReliabilityData:
    """2 units x 3 raters: (x,x,x), (x,x,y) -> Fleiss kappa = -0.2."""
    return make_data({"A": ["x", "x"], "B": ["x", "x"], "C": ["x", "y"]})


@pytest.fixture
def alpha_missing_data() -> ReliabilityData:
    """u1=(a,a,-), u2=(a,-,-), u3=(b,b,b): u2 excluded, alpha=1 exactly."""
    return make_data(
        {"A": ["a", "a", "b"], "B": ["a", None, "b"], "C": [None, None, "b"]}
    )


@pytest.fixture
def worker_example_data() -> ReliabilityData:
    """A=[y,x,y,x], B=C=[x,x,y,y]: kappa(B,C)=1, kappa(A,B)=kappa(A,C)=0."""
    return make_data({"A": list("yxyx"), "B": list("xxyy"), "C": list("xxyy")})


@pytest.fixture
def perfect_data() -> ReliabilityData:
    """3 annotators, 2 labels, every unit unanimous: all coefficients 1.0."""
    labels = ["x", "y"] * 6
    return make_data({"A": labels, "B": labels, "C": labels})
