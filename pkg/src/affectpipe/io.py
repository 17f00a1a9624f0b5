"""File ingestion and generation: point streams, feature files, vocabulary
XML, transcripts, PNG snapshots with ROI sidecars, and synthetic sessions.

File formats
------------
Raw points CSV   one frame per line: ``n,x1,y1,...,xm,ym``; the filename
                 carries the metadata: ``{emotion_code}_{modality}_{subject}_{session}.csv``
Feature CSV      one feature vector per line, same filename convention
Vocabulary XML   ``<vocabulary threshold="..."><emotion name="..." code="..."><word>...</word>``
Transcript CSV   ``word,confidence`` per line
ROI sidecar      one line: ``face_x,face_y,face_w,face_h,mouth_x,mouth_y,mouth_w,mouth_h``

All decimal serialization uses Python's shortest round-trip repr, so a
write/read cycle reproduces values exactly.
"""
from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import FormatError
from .model import (
    Emotion,
    Frame,
    GEOMETRIC_MODALITIES,
    Modality,
    Session,
    emotion_from_code,
    validate_session,
)
from .speech import RecognizedWord, Vocabulary

__all__ = [
    "FileMeta",
    "Roi",
    "SyntheticArchetype",
    "parse_filename",
    "format_filename",
    "read_raw_points",
    "write_raw_points",
    "write_feature_file",
    "read_feature_file",
    "load_vocabulary",
    "default_vocabulary",
    "read_transcript",
    "read_snapshot",
    "read_roi_sidecar",
    "default_archetype",
    "synth_generate",
    "synth_corpus",
]

MAX_IMAGE_PIXELS = 16_000_000


@dataclass(frozen=True)
class FileMeta:
    """Metadata decoded from a data filename."""

    emotion: Emotion
    modality: Modality
    subject: str
    session_tag: str


def parse_filename(path: Path | str) -> FileMeta:
    stem = Path(path).stem
    parts = stem.split("_")
    if len(parts) != 4:
        raise FormatError(
            f"{Path(path).name}: expected emotion_modality_subject_session, got {stem!r}"
        )
    code_str, kind, subject, session_tag = parts
    try:
        code = int(code_str)
    except ValueError:
        raise FormatError(f"{Path(path).name}: emotion code {code_str!r} is not an integer") from None
    emotion = emotion_from_code(code)
    modality = Modality.from_kind(kind)
    return FileMeta(emotion=emotion, modality=modality, subject=subject, session_tag=session_tag)


def format_filename(meta: FileMeta, suffix: str = ".csv") -> str:
    return f"{meta.emotion.code}_{meta.modality.kind}_{meta.subject}_{meta.session_tag}{suffix}"


def _fmt(value: float) -> str:
    return repr(float(value))


def read_raw_points(path: Path | str) -> Session:
    """Parse one raw point-stream file into a labeled session."""
    path = Path(path)
    meta = parse_filename(path)
    width = 1 + 2 * meta.modality.point_count
    frames = []
    with path.open("r", encoding="utf-8") as fh:
        for row_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != width:
                raise FormatError(
                    f"{path.name} row {row_no}: expected {width} fields, got {len(fields)}"
                )
            try:
                index = int(fields[0])
                coords = np.array([float(v) for v in fields[1:]], dtype=np.float64)
            except ValueError as exc:
                raise FormatError(f"{path.name} row {row_no}: {exc}") from None
            frames.append(Frame(index=index, points=coords.reshape(-1, 2)))
    session = Session(
        subject_id=meta.subject,
        modality=meta.modality,
        frames=tuple(frames),
        label=meta.emotion,
    )
    report = validate_session(session)
    if not report.ok:
        raise FormatError(f"{path.name}: " + "; ".join(report.violations))
    return session


def write_raw_points(session: Session, directory: Path | str, session_tag: str = "001") -> Path:
    """Write a labeled session as a raw points CSV; returns the path."""
    if session.label is None:
        raise FormatError("session must carry an emotion label to be written")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    meta = FileMeta(
        emotion=session.label,
        modality=session.modality,
        subject=session.subject_id,
        session_tag=session_tag,
    )
    path = directory / format_filename(meta)
    lines = []
    for frame in session.frames:
        coords = frame.points.reshape(-1)
        lines.append(",".join([str(frame.index)] + [_fmt(v) for v in coords]))
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return path


def write_feature_file(rows: np.ndarray, path: Path | str) -> None:
    """Write feature vectors, one per line, full-precision decimals."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise FormatError(f"feature rows must be 2-D, got shape {rows.shape}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row))
            fh.write("\n")


def read_feature_file(path: Path | str) -> tuple[FileMeta, np.ndarray]:
    """Read a feature file; all rows must have equal width."""
    path = Path(path)
    meta = parse_filename(path)
    rows = []
    width: Optional[int] = None
    with path.open("r", encoding="utf-8") as fh:
        for row_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise FormatError(
                    f"{path.name} row {row_no}: ragged row, expected {width} fields, got {len(fields)}"
                )
            try:
                rows.append([float(v) for v in fields])
            except ValueError as exc:
                raise FormatError(f"{path.name} row {row_no}: {exc}") from None
    data = np.asarray(rows, dtype=np.float64) if rows else np.empty((0, 0))
    return meta, data


def load_vocabulary(path: Path | str) -> Vocabulary:
    """Parse a vocabulary XML file."""
    path = Path(path)
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise FormatError(f"{path.name}: {exc}") from None
    if root.tag != "vocabulary":
        raise FormatError(f"{path.name}: root element must be <vocabulary>")
    try:
        threshold = float(root.get("threshold", "0.3"))
    except ValueError:
        raise FormatError(f"{path.name}: threshold is not a number") from None
    if not 0.0 <= threshold <= 1.0:
        raise FormatError(f"{path.name}: threshold {threshold} outside [0, 1]")
    entries: dict[Emotion, set[str]] = {}
    for elem in root.findall("emotion"):
        name = elem.get("name", "")
        emotion = Emotion.from_label(name)
        if elem.get("code") is not None and int(elem.get("code")) != emotion.code:
            raise FormatError(
                f"{path.name}: emotion {name!r} declared with code {elem.get('code')}"
            )
        words: set[str] = set()
        for word_elem in elem.findall("word"):
            token = (word_elem.text or "").strip().lower()
            if not token:
                raise FormatError(f"{path.name}: empty <word> under {name}")
            if token in words:
                raise FormatError(f"{path.name}: duplicate word {token!r} under {name}")
            words.add(token)
        entries[emotion] = words
    return Vocabulary(entries=entries, threshold=threshold)


def default_vocabulary() -> Vocabulary:
    """The vocabulary shipped with the package."""
    ref = resources.files("affectpipe").joinpath("data/default_vocabulary.xml")
    with resources.as_file(ref) as path:
        return load_vocabulary(path)


def read_transcript(path: Path | str) -> list[RecognizedWord]:
    """Read ``word,confidence`` lines into recognized words."""
    path = Path(path)
    words = []
    with path.open("r", encoding="utf-8") as fh:
        for row_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise FormatError(
                    f"{path.name} row {row_no}: expected word,confidence"
                )
            try:
                confidence = float(parts[1])
            except ValueError:
                raise FormatError(
                    f"{path.name} row {row_no}: confidence {parts[1]!r} is not a number"
                ) from None
            try:
                words.append(RecognizedWord(token=parts[0].strip(), confidence=confidence))
            except FormatError as exc:
                raise FormatError(f"{path.name} row {row_no}: {exc}") from None
    return words


@dataclass(frozen=True)
class Roi:
    """An axis-aligned rectangle in image pixels."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise FormatError(f"ROI must have positive size, got {self}")


def read_roi_sidecar(path: Path | str) -> tuple[Roi, Roi]:
    """Parse a face/mouth ROI sidecar; returns (face, mouth)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8").strip()
    fields = text.split(",")
    if len(fields) != 8:
        raise FormatError(f"{path.name}: expected 8 comma-separated integers")
    try:
        vals = [int(v) for v in fields]
    except ValueError:
        raise FormatError(f"{path.name}: ROI fields must be integers") from None
    return Roi(*vals[:4]), Roi(*vals[4:])


def read_snapshot(path: Path | str) -> tuple[np.ndarray, Optional[tuple[Roi, Roi]]]:
    """Load a PNG as an (h, w, 3) uint8 raster plus any ROI sidecar.

    Grayscale and palette images are promoted to RGB. Images above
    16 megapixels are refused.
    """
    path = Path(path)
    try:
        with Image.open(path) as img:
            if img.width * img.height > MAX_IMAGE_PIXELS:
                raise OSError(
                    f"{path.name}: {img.width}x{img.height} exceeds the "
                    f"{MAX_IMAGE_PIXELS}-pixel limit"
                )
            rgb = np.asarray(img.convert("RGB"), dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise OSError(f"{path.name}: not a readable image: {exc}") from None
    sidecar = path.with_suffix(".roi")
    rois = read_roi_sidecar(sidecar) if sidecar.exists() else None
    return rgb, rois


# --- synthetic sessions ----------------------------------------------------

_HAND_POSE = np.array(
    [
        (250.0, 200.0),  # left shoulder
        (230.0, 260.0),  # left elbow
        (220.0, 320.0),  # left wrist
        (215.0, 360.0),  # left palm
        (390.0, 200.0),  # right shoulder
        (410.0, 260.0),  # right elbow
        (420.0, 320.0),  # right wrist
        (425.0, 360.0),  # right palm
    ]
)

_BODY_EXTRA = np.array(
    [
        (320.0, 120.0),  # head
        (320.0, 190.0),  # shoulder center
        (320.0, 260.0),  # spine
        (320.0, 330.0),  # hip center
        (280.0, 330.0),  # left hip
        (360.0, 330.0),  # right hip
    ]
)


def _ellipse(count: int, cx: float, cy: float, rx: float, ry: float) -> np.ndarray:
    t = 2.0 * np.pi * np.arange(count) / count
    return np.column_stack([cx + rx * np.cos(t), cy + ry * np.sin(t)])


def base_pose(modality: Modality) -> np.ndarray:
    """A fixed desk-scale pose for each geometric modality (640x480 frame)."""
    if modality is Modality.HAND:
        return _HAND_POSE.copy()
    if modality is Modality.BODY:
        return np.vstack([_HAND_POSE, _BODY_EXTRA])
    if modality is Modality.HEAD:
        return _ellipse(12, 320.0, 150.0, 70.0, 95.0)
    if modality is Modality.FACE:
        rings = [
            _ellipse(20, 320.0, 160.0, 45.0, 30.0),
            _ellipse(20, 320.0, 160.0, 70.0, 48.0),
            _ellipse(20, 320.0, 160.0, 95.0, 66.0),
        ]
        return np.vstack(rings)
    raise FormatError(f"{modality.kind} has no base pose")


@dataclass(frozen=True)
class SyntheticArchetype:
    """Generator recipe: base pose plus a per-emotion displacement field."""

    emotion: Emotion
    modality: Modality
    base: np.ndarray
    offsets: np.ndarray
    noise_scale: float

    def __post_init__(self):
        base = np.asarray(self.base, dtype=np.float64)
        offsets = np.asarray(self.offsets, dtype=np.float64)
        if base.shape != (self.modality.point_count, 2):
            raise FormatError(
                f"base pose shape {base.shape} does not match {self.modality.kind}"
            )
        if offsets.shape != base.shape:
            raise FormatError("offset field shape must match the base pose")
        if self.noise_scale < 0:
            raise FormatError("noise scale must be >= 0")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "offsets", offsets)


def default_archetype(
    modality: Modality,
    emotion: Emotion,
    separation: float = 20.0,
    noise: float = 1.0,
) -> SyntheticArchetype:
    """Archetype whose per-point offsets differ by >= ``separation`` pixels
    between any two emotions.

    Emotions displace points along directions spread around the circle;
    the amplitude is chosen so the closest pair of emotions still differs
    by ``separation`` at every point.
    """
    m = modality.point_count
    amplitude = separation / (2.0 * math.sin(math.pi / 7.0))
    phi = 2.0 * math.pi * emotion.code / 7.0
    angles = phi + 0.4 * np.arange(m)
    offsets = amplitude * np.column_stack([np.cos(angles), np.sin(angles)])
    return SyntheticArchetype(
        emotion=emotion,
        modality=modality,
        base=base_pose(modality),
        offsets=offsets,
        noise_scale=noise,
    )


def synth_generate(
    archetype: SyntheticArchetype,
    frames: int,
    seed: int,
    subject_id: str = "synth",
) -> Session:
    """Deterministic session: base + ramp(t)*offsets + Gaussian noise.

    The ramp rises linearly from 0 at the first frame to 1 at the last.
    """
    if frames < 1:
        raise FormatError(f"frames must be >= 1, got {frames}")
    rng = np.random.default_rng(seed)
    m = archetype.modality.point_count
    noise = rng.normal(0.0, archetype.noise_scale, size=(frames, m, 2)) if archetype.noise_scale > 0 else np.zeros((frames, m, 2))
    denom = frames - 1 if frames > 1 else 1
    coords = []
    for t in range(frames):
        ramp = t / denom
        coords.append(archetype.base + ramp * archetype.offsets + noise[t])
    session_frames = tuple(Frame(index=t, points=c) for t, c in enumerate(coords))
    return Session(
        subject_id=subject_id,
        modality=archetype.modality,
        frames=session_frames,
        label=archetype.emotion,
    )


def synth_corpus(
    modality: Modality,
    sessions_per_emotion: int,
    frames: int,
    seed: int,
    separation: float = 20.0,
    noise: float = 1.0,
) -> list[Session]:
    """A labeled corpus covering all seven emotions, deterministic per seed."""
    sessions = []
    mod_idx = list(GEOMETRIC_MODALITIES).index(modality)
    for emotion in Emotion:
        archetype = default_archetype(modality, emotion, separation, noise)
        for k in range(sessions_per_emotion):
            item_seed = seed * 1_000_003 + mod_idx * 7_919 + emotion.code * 101 + k
            sessions.append(
                synth_generate(
                    archetype, frames, item_seed, subject_id=f"s{k + 1:02d}"
                )
            )
    return sessions
