"""Emotions, modalities, tracked-point frames and sessions.

Shared vocabulary for every other module. All types are immutable after
construction (frames freeze their coordinate arrays), so they can be
handed between threads or processes freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import FormatError, InvalidEmotionCode

__all__ = [
    "Emotion",
    "Modality",
    "Point2",
    "Frame",
    "Session",
    "emotion_from_code",
    "validate_session",
]


class Emotion(IntEnum):
    """The seven class labels, numerically coded 0..6."""

    ANGER = 0
    HAPPINESS = 1
    SURPRISE = 2
    DISGUST = 3
    FEAR = 4
    SADNESS = 5
    NEUTRAL = 6

    @property
    def code(self) -> int:
        return int(self)

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "Emotion":
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise InvalidEmotionCode(f"unknown emotion name {label!r}") from None


def emotion_from_code(code: int) -> Emotion:
    """Map an integer code to its emotion; 0..6 only."""
    try:
        return Emotion(code)
    except ValueError:
        raise InvalidEmotionCode(f"emotion code must be in 0..6, got {code!r}") from None


class Modality(Enum):
    """One input channel, with its fixed tracked-point count."""

    FACE = ("face", 60)
    HEAD = ("head", 12)
    HAND = ("hand", 8)
    BODY = ("body", 14)
    TEMPLATE = ("template", 0)
    SPEECH = ("speech", 0)

    def __init__(self, kind: str, point_count: int):
        self.kind = kind
        self.point_count = point_count

    @classmethod
    def from_kind(cls, kind: str) -> "Modality":
        for m in cls:
            if m.kind == kind:
                return m
        raise FormatError(f"unknown modality {kind!r}")

    @property
    def is_geometric(self) -> bool:
        return self.point_count > 0


GEOMETRIC_MODALITIES = (Modality.FACE, Modality.HEAD, Modality.HAND, Modality.BODY)


class Point2(NamedTuple):
    """A tracked point in screen coordinates (pixels)."""

    x: float
    y: float


@dataclass(frozen=True)
class Frame:
    """One frame of tracked points.

    ``points`` is an (m, 2) float64 array in point order; it is frozen on
    construction so frames stay immutable.
    """

    index: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must be (m, 2), got {pts.shape}")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def point_count(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class Session:
    """An ordered recording of frames for one (subject, emotion, modality)."""

    subject_id: str
    modality: Modality
    frames: tuple[Frame, ...]
    label: Optional[Emotion] = None

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))

    @property
    def n(self) -> int:
        return len(self.frames)


@dataclass
class ValidationReport:
    """Every invariant violation found in a session; empty means valid."""

    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:  # truthy when there is something to report
        return not self.ok


def validate_session(session: Session) -> ValidationReport:
    """Check point counts, frame-index monotonicity and value finiteness.

    Returns a report listing every violation rather than raising, so a
    batch ingester can keep going and summarize.
    """
    report = ValidationReport()
    expected = session.modality.point_count
    prev_index: Optional[int] = None
    for pos, frame in enumerate(session.frames):
        if frame.point_count != expected:
            report.violations.append(
                f"frame {frame.index} (position {pos}): expected "
                f"{expected} points for {session.modality.kind}, got {frame.point_count}"
            )
        if not np.all(np.isfinite(frame.points)):
            report.violations.append(
                f"frame {frame.index} (position {pos}): non-finite coordinate"
            )
        if prev_index is not None and frame.index <= prev_index:
            report.violations.append(
                f"frame {frame.index} (position {pos}): index not strictly increasing"
            )
        prev_index = frame.index
    return report


def session_from_arrays(
    subject_id: str,
    modality: Modality,
    coords: Sequence[np.ndarray] | np.ndarray,
    label: Optional[Emotion] = None,
    indices: Optional[Sequence[int]] = None,
) -> Session:
    """Build a session from an (n, m, 2) array or a list of (m, 2) arrays."""
    arrays = list(coords)
    if indices is None:
        indices = range(len(arrays))
    frames = tuple(Frame(index=int(i), points=a) for i, a in zip(indices, arrays))
    return Session(subject_id=subject_id, modality=modality, frames=frames, label=label)
