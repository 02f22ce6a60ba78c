"""Bundled reference tables and the comparison of derived statistics against them.

The original recordings are not distributable, so the published tables ship
as fixture files.  Commands accept them wherever they accept computed data.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from ragaemotion.emotion_model import EmotionSignature, EvolutionReport, load_signature_store
from ragaemotion.labels import EmotionLabel, parse_emotion

# published values are rounded to three decimals
PRINT_TOLERANCE = 0.005


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("ragaemotion") / "fixtures" / name))


def _load(name: str):
    return json.loads(fixture_path(name).read_text(encoding="utf-8"))


def published_tempos() -> dict[EmotionLabel, float]:
    return {parse_emotion(k): float(v) for k, v in _load("published_tempo.json").items()}


def published_descriptors() -> dict[EmotionLabel, dict]:
    return {parse_emotion(k): v for k, v in _load("published_descriptors.json").items()}


def published_signatures(with_stacked: bool = True) -> list[EmotionSignature]:
    """Signatures assembled from the tempo and descriptor tables.

    The companion stacked sequences are synthetic AR(1) series whose sample
    variance and halved MSSD equal the tabulated values.
    """
    return load_signature_store(fixture_path("published_signatures/signatures.json"), with_stacked)


def published_levene_pairs() -> list[dict]:
    return _load("published_levene_pairs.json")


def published_sitar() -> list[dict]:
    return _load("published_sitar.json")


def published_overall() -> dict:
    return _load("published_overall.json")


def published_per_emotion() -> dict[EmotionLabel, dict]:
    return {parse_emotion(k): v for k, v in _load("published_per_emotion.json").items()}


def published_anger_ranks() -> dict:
    return _load("published_anger_ranks.json")


def published_differences() -> dict[EmotionLabel, dict]:
    return {parse_emotion(k): v for k, v in _load("published_differences.json").items()}


def published_tracking_stores() -> tuple[list[EmotionSignature], list[EmotionSignature]]:
    return (
        load_signature_store(fixture_path("published_tracking_previous.json"), with_stacked=False),
        load_signature_store(fixture_path("published_tracking_now.json"), with_stacked=False),
    )


def raga_label_manifest_path() -> Path:
    return fixture_path("manifest_raga_labels.json")


def signature_manifest_path() -> Path:
    return fixture_path("manifest_published_signatures.json")


def published_anger_summary() -> dict:
    """Mean and SD of the published Anger rank differences."""
    t = published_anger_ranks()
    diffs = np.array(t["present"], float) - np.array(t["previous"], float)
    return {
        "differences": [int(d) for d in diffs],
        "mean_now": float(np.mean(t["present"])),
        "sd_now": float(np.std(t["present"], ddof=1)),
        "mean_diff": float(diffs.mean()),
        "sd_diff": float(diffs.std(ddof=1)),
    }


def compare_with_published(report: EvolutionReport, tol: float = PRINT_TOLERANCE) -> list[dict]:
    """Every per-emotion quantity of ``report`` next to its published value.

    Returns one row per (emotion, quantity) with ``derived``, ``published``
    and ``agrees``; rows that disagree are what the evolve command reports
    as warnings.
    """
    per_emotion = published_per_emotion()
    differences = published_differences()
    rows = []
    for emotion in sorted(set(per_emotion) | set(differences), key=lambda e: e.rank):
        ev = report.per_emotion.get(emotion)
        published = {**per_emotion.get(emotion, {}), **differences.get(emotion, {})}
        for quantity, value in published.items():
            derived = None if ev is None else getattr(ev, quantity)
            agrees = derived is not None and abs(derived - value) <= tol
            rows.append({
                "emotion": emotion.display,
                "quantity": quantity,
                "derived": derived,
                "published": value,
                "agrees": agrees,
            })
    return rows


def compare_overall_with_published(report: EvolutionReport) -> list[dict]:
    overall = published_overall()
    rows = []
    for column, desc in (("previous", report.overall_prev), ("present", report.overall_present)):
        for quantity, value in overall[column].items():
            attr = "kurtosis_excess" if quantity == "kurtosis" else quantity
            derived: Optional[float] = getattr(desc, attr)
            rows.append({
                "column": column,
                "quantity": quantity,
                "derived": derived,
                "published": value,
                "difference": None if derived is None else derived - value,
            })
    return rows
