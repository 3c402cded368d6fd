"""Document-difficulty analytics: rankings, tiers, and the baseline registry.

Classes are ranked by Krippendorff's alpha (the most missing-data-tolerant of
the three coefficients); rank 1 is the highest agreement, i.e. the easiest
class. Tier boundaries follow conventional reliability cut-offs (0.8
acceptable, 0.667 tentative) and are configurable.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence

from .errors import EmptyDataset, InsufficientPairs, NoRankableClasses
from .metrics import AgreementProfile, profile
from .model import ReliabilityData

TIERS = ("easy", "moderate", "hard", "very_hard")

REGISTRY_VERSION = 1


@dataclass(frozen=True)
class TierBoundaries:
    """Minimum alpha for each tier; anything below ``hard`` is very_hard."""

    easy: float = 0.9
    moderate: float = 0.8
    hard: float = 0.667

    def __post_init__(self):
        if not self.easy > self.moderate > self.hard:
            raise ValueError("tier boundaries must be strictly descending")

    def tier_for(self, alpha: float) -> str:
        if alpha >= self.easy:
            return "easy"
        if alpha >= self.moderate:
            return "moderate"
        if alpha >= self.hard:
            return "hard"
        return "very_hard"


DEFAULT_BOUNDARIES = TierBoundaries()


@dataclass(frozen=True)
class RankEntry:
    doc_class: str
    profile: AgreementProfile
    tier: str
    rank: int


@dataclass(frozen=True)
class DifficultyRanking:
    entries: tuple[RankEntry, ...]
    excluded: tuple[str, ...]  # classes lacking a computable alpha
    ranking_key: str = "alpha"


@dataclass(frozen=True)
class BaselineRecord:
    doc_class: str
    alpha: float
    cohen: float | None
    fleiss: float | None
    percent_agreement: float
    n_units: int
    n_annotators: int
    recorded_at: str  # ISO-8601
    dataset_digest: str  # SHA-256 hex of the contributing records


@dataclass(frozen=True)
class BaselineRegistry:
    records: tuple[BaselineRecord, ...] = ()
    version: int = REGISTRY_VERSION

    def __post_init__(self):
        classes = [r.doc_class for r in self.records]
        if len(set(classes)) != len(classes):
            raise ValueError("duplicate doc_class in registry")

    def get(self, doc_class: str) -> BaselineRecord | None:
        for record in self.records:
            if record.doc_class == doc_class:
                return record
        return None


@dataclass(frozen=True)
class PilotReport:
    pilot_profile: AgreementProfile
    nearest_baselines: tuple[tuple[str, float], ...]  # (doc_class, alpha gap)
    predicted_tier: str


def rank_difficulty(
    profiles: Sequence[tuple[str, AgreementProfile]],
    boundaries: TierBoundaries = DEFAULT_BOUNDARIES,
) -> DifficultyRanking:
    """Order classes by descending alpha; ties break lexicographically."""
    rankable = [(dc, p) for dc, p in profiles if p.krippendorff_alpha is not None]
    excluded = tuple(
        sorted(dc for dc, p in profiles if p.krippendorff_alpha is None)
    )
    if not rankable:
        raise NoRankableClasses("no class has a computable alpha")
    rankable.sort(key=lambda item: (-item[1].krippendorff_alpha, item[0]))
    entries = tuple(
        RankEntry(
            doc_class=dc,
            profile=p,
            tier=boundaries.tier_for(p.krippendorff_alpha),
            rank=i + 1,
        )
        for i, (dc, p) in enumerate(rankable)
    )
    return DifficultyRanking(entries=entries, excluded=excluded)


def dataset_digest(data: ReliabilityData) -> str:
    """SHA-256 of the canonical sorted record serialization, lowercase hex."""
    rows = sorted(
        (
            r.doc_class,
            r.doc_id,
            r.item_id,
            r.annotator_id,
            r.label,
        )
        for r in data.to_records()
    )
    payload = json.dumps(rows, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _profile_or_insufficient(data: ReliabilityData, what: str) -> AgreementProfile:
    try:
        return profile(data)
    except EmptyDataset as exc:
        raise InsufficientPairs(f"{what}: {exc}") from None


def registry_upsert(
    registry: BaselineRegistry,
    doc_class: str,
    data: ReliabilityData,
    recorded_at: str | None = None,
) -> BaselineRegistry:
    """Insert or replace one class baseline; returns a new registry."""
    prof = _profile_or_insufficient(data, f"class {doc_class!r}")
    record = BaselineRecord(
        doc_class=doc_class,
        alpha=prof.krippendorff_alpha,
        cohen=prof.cohen_kappa,
        fleiss=prof.fleiss_kappa,
        percent_agreement=prof.percent_agreement,
        n_units=prof.n_units,
        n_annotators=prof.n_annotators,
        recorded_at=recorded_at
        or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        dataset_digest=dataset_digest(data),
    )
    others = [r for r in registry.records if r.doc_class != doc_class]
    others.append(record)
    others.sort(key=lambda r: r.doc_class)
    return BaselineRegistry(records=tuple(others), version=registry.version)


def forecast_pilot(
    pilot: ReliabilityData,
    registry: BaselineRegistry,
    boundaries: TierBoundaries = DEFAULT_BOUNDARIES,
) -> PilotReport:
    """Profile a pilot batch and place it among the recorded baselines."""
    prof = _profile_or_insufficient(pilot, "pilot data")
    alpha = prof.krippendorff_alpha
    neighbors = sorted(
        (
            (r.doc_class, abs(alpha - r.alpha))
            for r in registry.records
            if r.alpha is not None
        ),
        key=lambda item: (item[1], item[0]),
    )
    return PilotReport(
        pilot_profile=prof,
        nearest_baselines=tuple(neighbors),
        predicted_tier=boundaries.tier_for(alpha),
    )


def registry_to_dict(registry: BaselineRegistry) -> dict:
    return {
        "version": registry.version,
        "records": [
            {
                "doc_class": r.doc_class,
                "alpha": r.alpha,
                "cohen": r.cohen,
                "fleiss": r.fleiss,
                "percent_agreement": r.percent_agreement,
                "n_units": r.n_units,
                "n_annotators": r.n_annotators,
                "recorded_at": r.recorded_at,
                "dataset_digest": r.dataset_digest,
            }
            for r in registry.records
        ],
    }


def registry_from_dict(obj: dict) -> BaselineRegistry:
    if not isinstance(obj, dict) or obj.get("version") != REGISTRY_VERSION:
        raise ValueError(f"unsupported registry payload: {obj.get('version')!r}")
    records = tuple(
        BaselineRecord(
            doc_class=r["doc_class"],
            alpha=r["alpha"],
            cohen=r.get("cohen"),
            fleiss=r.get("fleiss"),
            percent_agreement=r["percent_agreement"],
            n_units=r["n_units"],
            n_annotators=r["n_annotators"],
            recorded_at=r["recorded_at"],
            dataset_digest=r["dataset_digest"],
        )
        for r in obj["records"]
    )
    return BaselineRegistry(records=records)


def load_registry(path: str) -> BaselineRegistry:
    with open(path, "rb") as handle:
        return registry_from_dict(json.loads(handle.read().decode("utf-8")))


def save_registry(registry: BaselineRegistry, path: str) -> None:
    """Write atomically (temp file + rename) under an advisory lock.

    Readers never observe a partially written file; concurrent upserts on the
    same path serialize on the lock.
    """
    payload = (
        json.dumps(registry_to_dict(registry), indent=2, ensure_ascii=False) + "\n"
    ).encode("utf-8")
    directory = os.path.dirname(os.path.abspath(path))
    lock_path = path + ".lock"
    lock = open(lock_path, "a+b")
    try:
        try:
            import fcntl

            fcntl.flock(lock.fileno(), fcntl.LOCK_EX)
        except ImportError:  # non-POSIX: atomic rename still protects readers
            pass
        tmp_path = os.path.join(directory, f".{os.path.basename(path)}.tmp")
        with open(tmp_path, "wb") as tmp:
            tmp.write(payload)
            tmp.flush()
            os.fsync(tmp.fileno())
        os.replace(tmp_path, path)
    finally:
        lock.close()
