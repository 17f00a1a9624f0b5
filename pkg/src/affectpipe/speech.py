"""Keyword-lookup affect recognition from transcribed speech.

Words above a confidence threshold are matched, exact-token, against
per-emotion vocabularies; the emotion with the most matches wins and a
tied or empty tally abstains.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import FormatError
from .model import Emotion

__all__ = [
    "RecognizedWord",
    "Vocabulary",
    "DEFAULT_THRESHOLD",
    "normalize_token",
    "lookup",
]

DEFAULT_THRESHOLD = 0.3

_STRIP_CHARS = string.punctuation + string.whitespace


@dataclass(frozen=True)
class RecognizedWord:
    """One recognizer output token with its confidence."""

    token: str
    confidence: float

    def __post_init__(self):
        if not self.token:
            raise FormatError("empty recognized word")
        if not 0.0 <= self.confidence <= 1.0:
            raise FormatError(
                f"confidence must be in [0, 1], got {self.confidence!r}"
            )


@dataclass(frozen=True)
class Vocabulary:
    """Per-emotion word sets with a shared confidence threshold.

    Word sets must be pairwise disjoint so a match tallies exactly one
    emotion.
    """

    entries: Mapping[Emotion, frozenset[str]]
    threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self):
        object.__setattr__(
            self,
            "entries",
            {e: frozenset(words) for e, words in self.entries.items()},
        )
        if not 0.0 <= self.threshold <= 1.0:
            raise FormatError(f"threshold must be in [0, 1], got {self.threshold!r}")
        seen: dict[str, Emotion] = {}
        for emotion, words in self.entries.items():
            for w in words:
                if w in seen:
                    raise FormatError(
                        f"word {w!r} appears under both {seen[w].label} and {emotion.label}"
                    )
                seen[w] = emotion

    def emotion_of(self, token: str) -> Optional[Emotion]:
        for emotion, words in self.entries.items():
            if token in words:
                return emotion
        return None


def normalize_token(raw: str) -> Optional[str]:
    """Lowercase and strip surrounding punctuation; None if nothing is left."""
    token = raw.strip(_STRIP_CHARS).lower()
    return token or None


def match_counts(words: Iterable[RecognizedWord], vocab: Vocabulary) -> dict[Emotion, int]:
    """Per-emotion match tallies after confidence filtering."""
    counts: dict[Emotion, int] = {}
    for word in words:
        if word.confidence <= vocab.threshold:
            continue
        emotion = vocab.emotion_of(word.token)
        if emotion is not None:
            counts[emotion] = counts.get(emotion, 0) + 1
    return counts


def lookup(words: Iterable[RecognizedWord], vocab: Vocabulary) -> Optional[Emotion]:
    """Decide an emotion from confidence-filtered keyword matches.

    Words at or below the threshold are dropped (strictly-greater rule).
    Returns None (abstain) when nothing matches or the top tally is tied.
    """
    counts = match_counts(words, vocab)
    if not counts:
        return None
    best = max(counts.values())
    winners = [e for e, n in counts.items() if n == best]
    if len(winners) != 1:
        return None
    return winners[0]
