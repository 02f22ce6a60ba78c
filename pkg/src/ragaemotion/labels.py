"""The closed set of seven emotion labels and their canonical ranks."""

from __future__ import annotations

import enum


class UnknownEmotionError(ValueError):
    pass


class EmotionLabel(enum.Enum):
    # value is the canonical rank: tempo/variance/MSSD descending
    ANGER = 1
    SERENITY = 2
    ROMANTIC = 3
    ANXIETY = 4
    DEVOTION = 5
    HEROIC = 6
    SORROW = 7

    @property
    def rank(self) -> int:
        return self.value

    @property
    def display(self) -> str:
        return self.name.capitalize()

    def __str__(self) -> str:
        return self.display

    @classmethod
    def from_rank(cls, rank: int) -> "EmotionLabel":
        try:
            return cls(rank)
        except ValueError:
            raise ValueError(f"rank must be in 1..7, got {rank!r}") from None


CANONICAL_ORDER: tuple[EmotionLabel, ...] = tuple(sorted(EmotionLabel, key=lambda e: e.value))


def parse_emotion(name: str | EmotionLabel) -> EmotionLabel:
    """Case-insensitive lookup; anything outside the seven labels raises."""
    if isinstance(name, EmotionLabel):
        return name
    key = str(name).strip().upper()
    try:
        return EmotionLabel[key]
    except KeyError:
        raise UnknownEmotionError(f"unknown emotion label {name!r}") from None


def canonical_rank(emotion: str | EmotionLabel) -> int:
    return parse_emotion(emotion).rank
