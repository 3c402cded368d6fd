"""Report emitters: machine-readable JSON and CSV payloads.

All emitters are byte-deterministic given identical inputs and config.
Numbers are serialized with up to 6 significant decimals, rounded half-even.
"""

from __future__ import annotations

import csv
import io
import json
from decimal import ROUND_HALF_EVEN, Context

from .config import ToolConfig
from .difficulty import DifficultyRanking, PilotReport
from .metrics import AgreementProfile
from .workers import FLAG_ORDER, WorkerFlagReport

REPORT_VERSION = 1

_SIG6 = Context(prec=6, rounding=ROUND_HALF_EVEN)


def round6(value: float | None) -> float | None:
    """Round to 6 significant decimals, half-even."""
    if value is None:
        return None
    return float(_SIG6.plus(_SIG6.create_decimal(repr(float(value)))))


def emit_json(payload: dict) -> bytes:
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _flags_list(flags) -> list[str]:
    return sorted(flags)


def profile_dict(profile: AgreementProfile) -> dict:
    return {
        "cohen": round6(profile.cohen_kappa),
        "fleiss": round6(profile.fleiss_kappa),
        "alpha": round6(profile.krippendorff_alpha),
        "percent_agreement": round6(profile.percent_agreement),
        "n_units": profile.n_units,
        "n_annotators": profile.n_annotators,
        "degenerate_flags": _flags_list(profile.degenerate_flags),
    }


def metrics_report(
    classes: list[tuple[str, AgreementProfile, dict | None]],
    config: ToolConfig,
) -> dict:
    """One entry per document class, sorted by class name.

    ``classes`` items are (doc_class, profile, optional ci dict); the ci dict
    maps coefficient name to a [lower, upper] pair.
    """
    entries = []
    for doc_class, profile, ci in sorted(classes, key=lambda item: item[0]):
        entry = {"doc_class": doc_class, **profile_dict(profile)}
        if ci is not None:
            entry["ci"] = {
                name: [round6(lo), round6(hi)] for name, (lo, hi) in sorted(ci.items())
            }
        entries.append(entry)
    return {
        "version": REPORT_VERSION,
        "config_echo": config.echo(),
        "classes": entries,
    }


def worker_report_json(report: WorkerFlagReport, config: ToolConfig) -> dict:
    return {
        "version": REPORT_VERSION,
        "config_echo": config.echo(),
        "coefficient": report.coefficient,
        "doc_class": report.doc_class,
        "thresholds_used": {
            "min_abs_kappa": report.min_abs_kappa,
            "deviation_delta": report.deviation_delta,
        },
        "group_mean": round6(report.group_mean),
        "per_worker": [
            {
                "annotator_id": w.annotator_id,
                "mean_pairwise_kappa": round6(w.mean_pairwise_kappa),
                "n_pairs_used": w.n_pairs_used,
                "flags": [f for f in FLAG_ORDER if f in w.flags],
                "recommendation": w.recommendation,
            }
            for w in sorted(report.per_worker, key=lambda w: w.annotator_id)
        ],
    }


def worker_report_csv(report: WorkerFlagReport) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["annotator_id", "mean_pairwise_kappa", "n_pairs_used", "flags", "recommendation"]
    )
    for w in sorted(report.per_worker, key=lambda w: w.annotator_id):
        mean = "" if w.mean_pairwise_kappa is None else f"{w.mean_pairwise_kappa:.6f}"
        flags = "|".join(f for f in FLAG_ORDER if f in w.flags)
        writer.writerow([w.annotator_id, mean, w.n_pairs_used, flags, w.recommendation])
    return buf.getvalue().encode("utf-8")


def emit_worker_report(
    report: WorkerFlagReport, format: str, config: ToolConfig
) -> bytes:
    if format == "json":
        return emit_json(worker_report_json(report, config))
    if format == "csv":
        return worker_report_csv(report)
    raise ValueError(f"unknown worker report format {format!r}")


def difficulty_report(
    ranking: DifficultyRanking,
    config: ToolConfig,
    pilot: PilotReport | None = None,
) -> dict:
    payload = {
        "version": REPORT_VERSION,
        "config_echo": config.echo(),
        "ranking_key": ranking.ranking_key,
        "entries": [
            {
                "rank": e.rank,
                "doc_class": e.doc_class,
                "tier": e.tier,
                **profile_dict(e.profile),
            }
            for e in ranking.entries
        ],
        "excluded": list(ranking.excluded),
    }
    if pilot is not None:
        payload["pilot"] = {
            **profile_dict(pilot.pilot_profile),
            "predicted_tier": pilot.predicted_tier,
            "nearest_baselines": [
                {"doc_class": dc, "alpha_gap": round6(gap)}
                for dc, gap in pilot.nearest_baselines
            ],
        }
    return payload
