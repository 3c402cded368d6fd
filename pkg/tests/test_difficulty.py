"""Difficulty ranking, tiers, pilot forecasting, and the baseline registry."""

from __future__ import annotations

import json

import pytest

from agreekit.difficulty import (
    BaselineRegistry,
    TierBoundaries,
    dataset_digest,
    forecast_pilot,
    load_registry,
    rank_difficulty,
    registry_upsert,
    save_registry,
)
from agreekit.errors import InsufficientPairs, NoRankableClasses
from agreekit.metrics import AgreementProfile

from conftest import make_data

# published per-class coefficient triples (cohen, fleiss, alpha)
PUBLISHED = {
    "official-documents": (0.976, 0.976, 0.978),
    "diagnosis-medical-report": (0.967, 0.967, 0.969),
    "request-for-quote": (0.927, 0.927, 0.933),
    "bill-of-lading": (0.772, 0.771, 0.778),
}


def fixed_profile(
    cohen: float | None, fleiss: float | None, alpha: float | None, n_units: int = 40
) -> AgreementProfile:
    return AgreementProfile(
        percent_agreement=0.9,
        cohen_kappa=cohen,
        fleiss_kappa=fleiss,
        krippendorff_alpha=alpha,
        n_units=n_units,
        n_annotators=3,
        n_labels=12,
        degenerate_flags=frozenset(),
    )


def published_profiles():
    return [(name, fixed_profile(*triple)) for name, triple in PUBLISHED.items()]


class TestRankDifficulty:
    def test_published_values_order_and_tiers(self):
        ranking = rank_difficulty(published_profiles())
        assert [e.doc_class for e in ranking.entries] == [
            "official-documents",
            "diagnosis-medical-report",
            "request-for-quote",
            "bill-of-lading",
        ]
        assert [e.rank for e in ranking.entries] == [1, 2, 3, 4]
        assert [e.tier for e in ranking.entries] == ["easy", "easy", "easy", "hard"]

    def test_single_class(self):
        ranking = rank_difficulty([("only", fixed_profile(0.9, 0.9, 0.9))])
        assert ranking.entries[0].rank == 1

    def test_equal_alpha_breaks_lexicographically(self):
        ranking = rank_difficulty(
            [("zeta", fixed_profile(0.9, 0.9, 0.8)), ("alpha", fixed_profile(0.9, 0.9, 0.8))]
        )
        assert [e.doc_class for e in ranking.entries] == ["alpha", "zeta"]

    def test_profiles_without_alpha_excluded(self):
        ranking = rank_difficulty(
            [("good", fixed_profile(0.9, 0.9, 0.9)), ("bad", fixed_profile(0.9, 0.9, None))]
        )
        assert ranking.excluded == ("bad",)
        assert len(ranking.entries) == 1

    def test_no_rankable_classes(self):
        with pytest.raises(NoRankableClasses):
            rank_difficulty([("bad", fixed_profile(None, None, None))])

    def test_monotone_transform_preserves_order(self):
        base = published_profiles()
        squeezed = [
            (name, fixed_profile(None, None, 0.5 + p.krippendorff_alpha / 4))
            for name, p in base
        ]
        assert [e.doc_class for e in rank_difficulty(base).entries] == [
            e.doc_class for e in rank_difficulty(squeezed).entries
        ]

    def test_lowest_alpha_appends_at_last_rank(self):
        base = rank_difficulty(published_profiles())
        extended = rank_difficulty(
            published_profiles() + [("handwritten", fixed_profile(0.5, 0.5, 0.51))]
        )
        assert [e.doc_class for e in extended.entries[:-1]] == [
            e.doc_class for e in base.entries
        ]
        assert extended.entries[-1].doc_class == "handwritten"
        assert extended.entries[-1].tier == "very_hard"


def test_alpha_and_fleiss_rank_simulated_classes_identically():
    """Cross-metric consistency, checked empirically on simulated classes."""
    from agreekit.metrics import profile
    from agreekit.simulate import SimulationSpec, generate

    profiles = []
    for i, noise in enumerate((0.02, 0.10, 0.25, 0.45)):
        spec = SimulationSpec(
            n_units=800, n_labels=4, worker_error_rates=(noise, noise, noise), seed=i
        )
        data, _ = generate(spec)
        profiles.append((f"class-{i}", profile(data)))
    by_alpha = [dc for dc, _ in sorted(profiles, key=lambda x: -x[1].krippendorff_alpha)]
    by_fleiss = [dc for dc, _ in sorted(profiles, key=lambda x: -x[1].fleiss_kappa)]
    assert by_alpha == by_fleiss
    assert [e.doc_class for e in rank_difficulty(profiles).entries] == by_alpha


class TestTierBoundaries:
    def test_default_cutoffs(self):
        tb = TierBoundaries()
        assert tb.tier_for(0.95) == "easy"
        assert tb.tier_for(0.9) == "easy"
        assert tb.tier_for(0.85) == "moderate"
        assert tb.tier_for(0.7) == "hard"
        assert tb.tier_for(0.667) == "hard"
        assert tb.tier_for(0.5) == "very_hard"

    def test_must_descend(self):
        with pytest.raises(ValueError):
            TierBoundaries(easy=0.8, moderate=0.8, hard=0.667)


def table1_registry() -> BaselineRegistry:
    registry = BaselineRegistry()
    for name, (cohen, fleiss, alpha) in PUBLISHED.items():
        data = make_data({"A": ["x", "y"], "B": ["x", "y"]}, doc_class=name)
        registry = registry_upsert(registry, name, data, recorded_at="2026-08-01T00:00:00+00:00")
        # overwrite the computed record with the published coefficients
        records = [
            r
            if r.doc_class != name
            else type(r)(
                doc_class=r.doc_class,
                alpha=alpha,
                cohen=cohen,
                fleiss=fleiss,
                percent_agreement=r.percent_agreement,
                n_units=r.n_units,
                n_annotators=r.n_annotators,
                recorded_at=r.recorded_at,
                dataset_digest=r.dataset_digest,
            )
            for r in registry.records
        ]
        registry = BaselineRegistry(records=tuple(records))
    return registry


class TestForecastPilot:
    def test_pilot_near_bill_of_lading(self):
        registry = table1_registry()
        # 16 agreeing units (8 per label) + 2 disagreements: alpha = 0.78395...
        a_col = ["x"] * 8 + ["y"] * 8 + ["x", "x"]
        b_col = ["x"] * 8 + ["y"] * 8 + ["y", "y"]
        pilot = make_data({"A": a_col, "B": b_col}, doc_class="pilot")
        report = forecast_pilot(pilot, registry)
        alpha = report.pilot_profile.krippendorff_alpha
        assert alpha == pytest.approx(1 - (1 / 9) / (648 / 1260), abs=1e-12)
        assert report.nearest_baselines[0][0] == "bill-of-lading"
        assert report.nearest_baselines[0][1] == pytest.approx(abs(alpha - 0.778), abs=1e-12)
        assert [dc for dc, _ in report.nearest_baselines] == [
            "bill-of-lading",
            "request-for-quote",
            "diagnosis-medical-report",
            "official-documents",
        ]
        assert report.predicted_tier == "hard"

    def test_empty_registry_still_reports_tier(self, perfect_data):
        report = forecast_pilot(perfect_data, BaselineRegistry())
        assert report.nearest_baselines == ()
        assert report.predicted_tier == "easy"

    def test_single_annotator_pilot(self):
        pilot = make_data({"A": ["x", "y"]})
        with pytest.raises(InsufficientPairs):
            forecast_pilot(pilot, BaselineRegistry())


class TestRegistry:
    def test_upsert_then_read_back(self, tmp_path, two_rater_data):
        registry = registry_upsert(
            BaselineRegistry(), "official", two_rater_data,
            recorded_at="2026-08-01T12:00:00+00:00",
        )
        path = tmp_path / "registry.json"
        save_registry(registry, str(path))
        loaded = load_registry(str(path))
        assert loaded == registry
        save_registry(loaded, str(path))
        assert load_registry(str(path)) == registry  # bit-exact round trip

    def test_round_trip_preserves_bytes(self, tmp_path, two_rater_data):
        registry = registry_upsert(
            BaselineRegistry(), "official", two_rater_data,
            recorded_at="2026-08-01T12:00:00+00:00",
        )
        path = tmp_path / "registry.json"
        save_registry(registry, str(path))
        first = path.read_bytes()
        save_registry(load_registry(str(path)), str(path))
        assert path.read_bytes() == first

    def test_upsert_same_class_twice_keeps_second(self, two_rater_data, perfect_data):
        registry = registry_upsert(BaselineRegistry(), "c", two_rater_data)
        registry = registry_upsert(registry, "c", perfect_data)
        assert len(registry.records) == 1
        assert registry.get("c").alpha == 1.0

    def test_uncomputable_upsert_raises_and_leaves_registry(self):
        registry = BaselineRegistry()
        lonely = make_data({"A": ["x", "y"]})
        with pytest.raises(InsufficientPairs):
            registry_upsert(registry, "solo", lonely)
        assert registry.records == ()

    def test_records_sorted_by_class(self, two_rater_data, perfect_data):
        registry = registry_upsert(BaselineRegistry(), "zz", two_rater_data)
        registry = registry_upsert(registry, "aa", perfect_data)
        assert [r.doc_class for r in registry.records] == ["aa", "zz"]

    def test_digest_is_content_hash(self, two_rater_data):
        digest = dataset_digest(two_rater_data)
        assert len(digest) == 64 and digest == digest.lower()
        assert digest == dataset_digest(two_rater_data)

    def test_registry_schema(self, tmp_path, two_rater_data):
        registry = registry_upsert(
            BaselineRegistry(), "official", two_rater_data,
            recorded_at="2026-08-01T12:00:00+00:00",
        )
        path = tmp_path / "registry.json"
        save_registry(registry, str(path))
        obj = json.loads(path.read_text())
        assert obj["version"] == 1
        (record,) = obj["records"]
        assert set(record) == {
            "doc_class",
            "alpha",
            "cohen",
            "fleiss",
            "percent_agreement",
            "n_units",
            "n_annotators",
            "recorded_at",
            "dataset_digest",
        }

    def test_bad_version_rejected(self, tmp_path):
        path = tmp_path / "registry.json"
        path.write_text('{"version": 99, "records": []}')
        with pytest.raises(ValueError):
            load_registry(str(path))
