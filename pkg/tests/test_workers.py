"""Pairwise matrices, worker flagging, and per-class summaries.

The three-worker fixture (A=[y,x,y,x], B=C=[x,x,y,y]) was enumerated by hand:
kappa(B,C)=1 (identical columns), kappa(A,B)=kappa(A,C)=0 (p_o=0.5, p_e=0.5).
With thresholds (0.8, 0.1): mean_A=0, mean_B=mean_C=0.5, group mean 1/3, so A
trips both rules (rework) and B, C trip only the absolute floor (retrain).
"""

from __future__ import annotations

import pytest

from agreekit.errors import EmptySlice, FewerThanTwoAnnotators
from agreekit.workers import (
    BELOW_ABSOLUTE,
    BELOW_DEVIATION,
    INSUFFICIENT_DATA,
    PairwiseMatrix,
    class_summary,
    flag_workers,
    has_quality_flags,
    pairwise_matrix,
)

from conftest import make_data

TOL = 1e-12


class TestPairwiseMatrix:
    def test_worked_example(self, worker_example_data):
        m = pairwise_matrix(worker_example_data, min_units_per_pair=1)
        assert m.annotators == ("A", "B", "C")
        assert m.cell("B", "C") == pytest.approx(1.0, abs=TOL)
        assert m.cell("A", "B") == pytest.approx(0.0, abs=TOL)
        assert m.cell("A", "C") == pytest.approx(0.0, abs=TOL)

    def test_symmetric_with_unit_diagonal(self, worker_example_data):
        m = pairwise_matrix(worker_example_data, min_units_per_pair=1)
        n = len(m.annotators)
        for i in range(n):
            assert m.values[i][i] == 1.0
            for j in range(n):
                assert m.values[i][j] == m.values[j][i]

    def test_identical_workers_all_ones(self, perfect_data):
        m = pairwise_matrix(perfect_data, min_units_per_pair=1)
        for i in range(3):
            for j in range(3):
                assert m.values[i][j] == 1.0

    def test_no_shared_units_cell_absent(self):
        data = make_data(
            {"A": ["x", "x", None, None], "B": [None, None, "y", "x"], "C": list("xxyx")}
        )
        m = pairwise_matrix(data, min_units_per_pair=1)
        assert m.cell("A", "B") is None
        assert m.cell("A", "C") is not None

    def test_min_units_threshold_blanks_cells(self, worker_example_data):
        m = pairwise_matrix(worker_example_data, min_units_per_pair=5)
        assert m.cell("A", "B") is None
        assert m.cell("B", "C") is None

    def test_doc_class_selector(self, worker_example_data):
        m = pairwise_matrix(worker_example_data, doc_class="c", min_units_per_pair=1)
        assert m.doc_class == "c"
        with pytest.raises(EmptySlice):
            pairwise_matrix(worker_example_data, doc_class="nope")

    def test_fewer_than_two_annotators(self):
        data = make_data({"A": ["x", "y"]})
        with pytest.raises(FewerThanTwoAnnotators):
            pairwise_matrix(data)


class TestFlagWorkers:
    def report(self, worker_example_data):
        m = pairwise_matrix(worker_example_data, min_units_per_pair=1)
        return flag_workers(m, min_abs_kappa=0.8, deviation_delta=0.1)

    def test_worked_example(self, worker_example_data):
        report = self.report(worker_example_data)
        by_id = {w.annotator_id: w for w in report.per_worker}
        a, b, c = by_id["A"], by_id["B"], by_id["C"]
        assert a.mean_pairwise_kappa == pytest.approx(0.0, abs=TOL)
        assert b.mean_pairwise_kappa == pytest.approx(0.5, abs=TOL)
        assert c.mean_pairwise_kappa == pytest.approx(0.5, abs=TOL)
        assert report.group_mean == pytest.approx(1 / 3, abs=TOL)
        assert a.flags == frozenset({BELOW_ABSOLUTE, BELOW_DEVIATION})
        assert a.recommendation == "rework"
        assert b.flags == frozenset({BELOW_ABSOLUTE})
        assert b.recommendation == "retrain"
        assert c.flags == b.flags
        assert all(w.n_pairs_used == 2 for w in report.per_worker)

    def test_no_flags_when_all_perfect(self, perfect_data):
        m = pairwise_matrix(perfect_data, min_units_per_pair=1)
        report = flag_workers(m)
        assert all(w.flags == frozenset() for w in report.per_worker)
        assert all(w.recommendation == "none" for w in report.per_worker)
        assert not has_quality_flags(report)

    def test_absent_pair_means_insufficient_data(self):
        m = PairwiseMatrix(annotators=("A", "B"), values=((1.0, None), (None, 1.0)))
        report = flag_workers(m)
        for w in report.per_worker:
            assert w.flags == frozenset({INSUFFICIENT_DATA})
            assert w.recommendation == "none"
            assert w.mean_pairwise_kappa is None
        assert report.group_mean is None
        assert not has_quality_flags(report)

    def test_threshold_validation(self, worker_example_data):
        m = pairwise_matrix(worker_example_data, min_units_per_pair=1)
        with pytest.raises(ValueError):
            flag_workers(m, min_abs_kappa=1.5)

    def test_flag_monotonicity(self, worker_example_data):
        m = pairwise_matrix(worker_example_data, min_units_per_pair=1)
        loose = flag_workers(m, min_abs_kappa=0.3, deviation_delta=0.5)
        strict = flag_workers(m, min_abs_kappa=0.8, deviation_delta=0.1)
        for lw, sw in zip(loose.per_worker, strict.per_worker):
            # lowering the floor never adds below_absolute
            assert not (BELOW_ABSOLUTE in lw.flags and BELOW_ABSOLUTE not in sw.flags)
            # raising delta never adds below_deviation
            assert not (BELOW_DEVIATION in lw.flags and BELOW_DEVIATION not in sw.flags)

    def test_annotator_permutation_preserves_values(self, worker_example_data):
        m = pairwise_matrix(worker_example_data, min_units_per_pair=1)
        order = (2, 0, 1)
        permuted = PairwiseMatrix(
            annotators=tuple(m.annotators[i] for i in order),
            values=tuple(
                tuple(m.values[i][j] for j in order) for i in order
            ),
        )
        base = {w.annotator_id: w for w in flag_workers(m).per_worker}
        swapped = {w.annotator_id: w for w in flag_workers(permuted).per_worker}
        assert base.keys() == swapped.keys()
        for key in base:
            assert base[key].mean_pairwise_kappa == swapped[key].mean_pairwise_kappa
            assert base[key].flags == swapped[key].flags
            assert base[key].recommendation == swapped[key].recommendation


class TestClassSummary:
    def test_constant_high_agreement(self):
        labels = ["x", "y", "x", "y"]
        data = make_data({"A": labels, "B": labels, "C": labels}, doc_class="official")
        summary = class_summary(data, min_units_per_pair=1)
        assert summary == [("official", 1.0)]

    def test_worked_example_mean(self, worker_example_data):
        summary = class_summary(worker_example_data, min_units_per_pair=1)
        (doc_class, mean), = summary
        assert doc_class == "c"
        assert mean == pytest.approx(1 / 3, abs=TOL)

    def test_single_annotator_class_absent(self):
        data = make_data({"A": ["x", "y"]}, doc_class="solo")
        assert class_summary(data) == [("solo", None)]

    def test_classes_sorted(self):
        records = make_data({"A": ["x"], "B": ["x"]}, doc_class="zz").to_records()
        records += make_data({"A": ["y"], "B": ["y"]}, doc_class="aa").to_records()
        from agreekit.model import build_reliability_matrix

        data = build_reliability_matrix(records)
        assert [dc for dc, _ in class_summary(data, min_units_per_pair=1)] == ["aa", "zz"]
