"""Per-modality multi-class frame classifier.

One-versus-rest linear SVMs trained by seeded stochastic subgradient
descent on hinge loss with L2 regularization (step size 1/(lambda*t)).
Features are standardized with statistics fit on the training data only;
the bias rides along as an augmented constant feature. Session decisions
follow the empirical-probability rule: P_e = n_e/N over per-frame
predictions, decided emotion = argmax with lowest-code tie-break.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (
    DegenerateTrainingError,
    EmptySessionError,
    FormatError,
    ShapeError,
)
from .model import Emotion, Modality

__all__ = [
    "TrainConfig",
    "Standardizer",
    "ClassifierModel",
    "SessionPrediction",
    "fit_standardizer",
    "standardize",
    "train",
    "predict_frame",
    "predict_session",
    "session_prediction_from_frames",
    "save_model",
    "load_model",
]

MODEL_MAGIC = "affectpipe-model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class TrainConfig:
    lam: float = 1e-4
    epochs: int = 20


@dataclass(frozen=True)
class Standardizer:
    """Per-feature mean/scale; zero-variance features pass through."""

    mean: np.ndarray
    scale: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=np.float64))
        object.__setattr__(self, "scale", np.asarray(self.scale, dtype=np.float64))


def fit_standardizer(vectors: np.ndarray) -> Standardizer:
    """Mean 0 / scale 1 on the training data; constant columns get scale 1."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[0] < 1:
        raise ShapeError(f"need a (n, d) training matrix, got {vectors.shape}")
    mean = vectors.mean(axis=0)
    std = vectors.std(axis=0)
    scale = np.where(std > 0.0, std, 1.0)
    return Standardizer(mean=mean, scale=scale)


def standardize(vectors: np.ndarray, stats: Standardizer) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.shape[-1] != stats.mean.shape[0]:
        raise ShapeError(
            f"vector dimension {vectors.shape[-1]} != statistics dimension {stats.mean.shape[0]}"
        )
    return (vectors - stats.mean) / stats.scale


@dataclass(frozen=True)
class ClassifierModel:
    """Weights, biases and standardization for one modality."""

    modality: Modality
    class_codes: tuple[int, ...]  # ascending emotion codes present in training
    weights: np.ndarray  # (n_classes, dim)
    biases: np.ndarray  # (n_classes,)
    stats: Standardizer
    config: TrainConfig
    seed: int

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def scores(self, vector: np.ndarray) -> np.ndarray:
        z = standardize(vector, self.stats)
        return self.weights @ z + self.biases


@dataclass(frozen=True)
class SessionPrediction:
    """Per-frame labels, per-emotion counts/probabilities and the argmax."""

    frame_emotions: tuple[Emotion, ...]
    counts: np.ndarray  # (7,) int64 indexed by emotion code
    probabilities: np.ndarray  # (7,) float64, counts / N
    decided: Emotion

    @property
    def n(self) -> int:
        return len(self.frame_emotions)


def train(
    vectors: np.ndarray,
    labels: Sequence[Emotion] | np.ndarray,
    modality: Modality,
    config: TrainConfig = TrainConfig(),
    seed: int = 0,
) -> ClassifierModel:
    """Fit one-vs-rest linear SVMs with a deterministic sample order.

    The per-epoch order is a seeded permutation; with step size
    1/(lambda*t) the iterate is an accumulator divided by the step count,
    so training is exactly reproducible for a given (data, config, seed).
    """
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"need (n, d) training vectors, got {x.shape}")
    codes = np.asarray([int(l) for l in labels], dtype=np.int64)
    if codes.shape[0] != x.shape[0]:
        raise ShapeError(
            f"{x.shape[0]} vectors but {codes.shape[0]} labels"
        )
    present = np.unique(codes)
    if present.size < 2:
        raise DegenerateTrainingError(
            f"training needs >= 2 classes, got {present.size} "
            f"({[Emotion(c).label for c in present]})"
        )
    stats = fit_standardizer(x)
    z = standardize(x, stats)
    x_aug = np.hstack([z, np.ones((z.shape[0], 1))])

    slot_of = {code: i for i, code in enumerate(present)}
    y_slot = np.asarray([slot_of[c] for c in codes], dtype=np.int64)

    n = x.shape[0]
    rng = np.random.default_rng(seed)
    order = np.concatenate([rng.permutation(n) for _ in range(config.epochs)]).astype(np.int64)

    v = kernels.svm_accumulate(
        np.ascontiguousarray(x_aug), y_slot, int(present.size), order, float(config.lam)
    )
    w_aug = v / float(order.shape[0])
    return ClassifierModel(
        modality=modality,
        class_codes=tuple(int(c) for c in present),
        weights=np.ascontiguousarray(w_aug[:, :-1]),
        biases=np.ascontiguousarray(w_aug[:, -1]),
        stats=stats,
        config=config,
        seed=seed,
    )


def predict_frame(model: ClassifierModel, vector: np.ndarray) -> Emotion:
    """Argmax over class scores; ties go to the lowest emotion code."""
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != (model.dim,):
        raise ShapeError(f"vector shape {vector.shape} != model dimension ({model.dim},)")
    scores = model.scores(vector)
    best = int(np.argmax(scores))  # first maximum; codes ascend, so lowest code wins
    return Emotion(model.class_codes[best])


def session_prediction_from_frames(
    frame_emotions: Sequence[Emotion],
) -> SessionPrediction:
    """Aggregate per-frame labels: P_e = n_e/N, decided = argmax P_e.

    Argmax ties go to the lowest emotion code.
    """
    frames = tuple(frame_emotions)
    if not frames:
        raise EmptySessionError("session prediction needs at least one frame")
    counts = np.zeros(7, dtype=np.int64)
    for e in frames:
        counts[e.code] += 1
    probabilities = counts / float(len(frames))
    decided = Emotion(int(np.argmax(probabilities)))  # first max = lowest code
    return SessionPrediction(
        frame_emotions=frames,
        counts=counts,
        probabilities=probabilities,
        decided=decided,
    )


def predict_session(model: ClassifierModel, vectors: np.ndarray) -> SessionPrediction:
    """Empirical probabilities over per-frame predictions and their argmax."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[0] < 1:
        raise EmptySessionError("session prediction needs at least one frame")
    if vectors.shape[1] != model.dim:
        raise ShapeError(
            f"vectors have dimension {vectors.shape[1]}, model wants {model.dim}"
        )
    z = standardize(vectors, model.stats)
    scores = z @ model.weights.T + model.biases
    slots = np.argmax(scores, axis=1)
    frame_emotions = tuple(Emotion(model.class_codes[s]) for s in slots)
    return session_prediction_from_frames(frame_emotions)


def save_model(model: ClassifierModel, path: Path | str) -> None:
    """Versioned binary: one JSON header line, then raw float64 blocks."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "magic": MODEL_MAGIC,
        "version": MODEL_VERSION,
        "modality": model.modality.kind,
        "class_codes": list(model.class_codes),
        "dim": model.dim,
        "lam": model.config.lam,
        "epochs": model.config.epochs,
        "seed": model.seed,
    }
    with path.open("wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        fh.write(b"\n")
        fh.write(np.ascontiguousarray(model.weights, dtype=np.float64).tobytes())
        fh.write(np.ascontiguousarray(model.biases, dtype=np.float64).tobytes())
        fh.write(np.ascontiguousarray(model.stats.mean, dtype=np.float64).tobytes())
        fh.write(np.ascontiguousarray(model.stats.scale, dtype=np.float64).tobytes())


def load_model(path: Path | str) -> ClassifierModel:
    """Load and validate a serialized model; inconsistent dimensions fail."""
    path = Path(path)
    with path.open("rb") as fh:
        header_line = fh.readline()
        blob = fh.read()
    try:
        header = json.loads(header_line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise FormatError(f"{path.name}: not a model file") from None
    if header.get("magic") != MODEL_MAGIC or header.get("version") != MODEL_VERSION:
        raise FormatError(f"{path.name}: unknown model format/version")
    modality = Modality.from_kind(header["modality"])
    codes = [int(c) for c in header["class_codes"]]
    dim = int(header["dim"])
    n_classes = len(codes)
    expected = (n_classes * dim + n_classes + dim + dim) * 8
    if len(blob) != expected:
        raise FormatError(
            f"{path.name}: payload is {len(blob)} bytes, header implies {expected}"
        )
    off = 0

    def take(count):
        nonlocal off
        arr = np.frombuffer(blob, dtype=np.float64, count=count, offset=off).copy()
        off += count * 8
        return arr

    weights = take(n_classes * dim).reshape(n_classes, dim)
    biases = take(n_classes)
    mean = take(dim)
    scale = take(dim)
    if np.any(scale <= 0):
        raise FormatError(f"{path.name}: non-positive standardization scale")
    return ClassifierModel(
        modality=modality,
        class_codes=tuple(codes),
        weights=weights,
        biases=biases,
        stats=Standardizer(mean=mean, scale=scale),
        config=TrainConfig(lam=float(header["lam"]), epochs=int(header["epochs"])),
        seed=int(header["seed"]),
    )
