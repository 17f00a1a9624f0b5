"""Per-frame geometric feature vectors from tracked points.

Layout per frame: all 2m screen coordinates, then the Euclidean distance
for every unordered point pair, then the four-quadrant angle of each pair
against the horizontal axis. Pairs are enumerated i < j in lexicographic
order; angles are radians in (-pi, pi], measured on the vector from the
lower- to the higher-indexed point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DegeneratePairError, NoGeometryError, NumericError
from .model import Frame, Modality, Point2, Session

__all__ = [
    "FeatureVector",
    "pair_distance",
    "pair_angle",
    "feature_dimension",
    "extract_features",
    "extract_session",
]


@dataclass(frozen=True)
class FeatureVector:
    """One frame's features plus any degenerate (coincident) pairs hit."""

    modality: Modality
    frame_index: int
    values: np.ndarray
    degenerate_pairs: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        vals = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.shape[0]


def pair_distance(p: Point2, q: Point2) -> float:
    """Euclidean distance between two tracked points."""
    if not all(map(math.isfinite, (p[0], p[1], q[0], q[1]))):
        raise NumericError(f"non-finite point in distance: {p}, {q}")
    return math.hypot(q[0] - p[0], q[1] - p[1])


def pair_angle(p: Point2, q: Point2) -> float:
    """Angle of the line p->q against the +x axis, radians in (-pi, pi]."""
    if not all(map(math.isfinite, (p[0], p[1], q[0], q[1]))):
        raise NumericError(f"non-finite point in angle: {p}, {q}")
    dx = q[0] - p[0]
    dy = q[1] - p[1]
    if dx == 0.0 and dy == 0.0:
        raise DegeneratePairError(f"coincident points {p}")
    return math.atan2(dy, dx)


def feature_dimension(modality: Modality) -> int:
    """2m coordinates + C(m,2) distances + C(m,2) angles."""
    if not modality.is_geometric:
        raise NoGeometryError(f"{modality.kind} carries no tracked points")
    m = modality.point_count
    return 2 * m + m * (m - 1)


def extract_features(frame: Frame, modality: Modality) -> FeatureVector:
    """Build the feature vector of one frame.

    Coincident pairs get an angle of 0 and are recorded in
    ``degenerate_pairs`` instead of aborting the frame.
    """
    if not modality.is_geometric:
        raise NoGeometryError(f"{modality.kind} carries no tracked points")
    m = modality.point_count
    if frame.point_count != m:
        raise ValueError(
            f"frame has {frame.point_count} points, {modality.kind} needs {m}"
        )
    pts = frame.points
    dist, angle, degen = kernels.pairwise_geometry(pts)
    values = np.concatenate([pts.reshape(-1), dist, angle])
    flagged: tuple[tuple[int, int], ...] = ()
    if degen.any():
        i_idx, j_idx = np.triu_indices(m, k=1)
        hits = np.nonzero(degen)[0]
        flagged = tuple((int(i_idx[k]), int(j_idx[k])) for k in hits)
    return FeatureVector(
        modality=modality,
        frame_index=frame.index,
        values=values,
        degenerate_pairs=flagged,
    )


def extract_session(session: Session) -> list[FeatureVector]:
    """One feature vector per frame, in frame order."""
    return [extract_features(frame, session.modality) for frame in session.frames]
