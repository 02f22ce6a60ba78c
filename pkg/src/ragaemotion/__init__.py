"""Pitch-period statistics for emotion signatures in Hindustani music clips."""

from ragaemotion.labels import EmotionLabel, UnknownEmotionError, canonical_rank, parse_emotion

__version__ = "0.1.0"

__all__ = [
    "EmotionLabel",
    "UnknownEmotionError",
    "canonical_rank",
    "parse_emotion",
    "__version__",
]
