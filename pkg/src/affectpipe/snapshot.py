"""Face-snapshot processing and the smile template.

The chain on a supplied face/mouth region of interest: skin-color mask,
grayscale, adaptive mean threshold, Canny edge detection, 8-connected
edge linking, then the smile rules. A smile needs a short edge low in
each mouth half (segment length below one eighth of the mouth width,
positioned beyond the half's centroid) and a qualifying-edge ratio
strictly above 0.05.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import ParameterError, RegionError
from .io import Roi
from .model import Emotion

__all__ = [
    "MouthRegion",
    "EdgeSegment",
    "SmileVerdict",
    "TemplateParams",
    "grayscale",
    "skin_mask",
    "adaptive_threshold",
    "canny_edges",
    "link_edges",
    "detect_smile",
    "snapshot_schedule",
    "template_classify",
    "template_analyze",
]

SMILE_RATIO_THRESHOLD = 0.05  # n_t
GAUSS_SIGMA = 1.4
GAUSS_SIZE = 5

SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_Y = np.array([[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]])


def _gauss_kernel(size: int = GAUSS_SIZE, sigma: float = GAUSS_SIGMA) -> np.ndarray:
    r = size // 2
    ax = np.arange(-r, r + 1, dtype=np.float64)
    xx, yy = np.meshgrid(ax, ax)
    k = np.exp(-(xx * xx + yy * yy) / (2.0 * sigma * sigma))
    return k / k.sum()

_GAUSS = _gauss_kernel()


@dataclass(frozen=True)
class MouthRegion:
    """Mouth bounding box with the two half-rectangle centroids.

    ``m_l`` is the region width; the left/right anchors are the geometric
    centers of the left and right halves.
    """

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if self.w < 8 or self.h < 2:
            raise RegionError(
                f"mouth region must be at least 8x2 px, got {self.w}x{self.h}"
            )

    @classmethod
    def from_roi(cls, roi: Roi) -> "MouthRegion":
        return cls(x=float(roi.x), y=float(roi.y), w=float(roi.w), h=float(roi.h))

    @property
    def m_l(self) -> float:
        return self.w

    @property
    def center_x(self) -> float:
        return self.x + self.w / 2.0

    @property
    def left_anchor(self) -> tuple[float, float]:
        return (self.x + self.w / 4.0, self.y + self.h / 2.0)

    @property
    def right_anchor(self) -> tuple[float, float]:
        return (self.x + 3.0 * self.w / 4.0, self.y + self.h / 2.0)


@dataclass(frozen=True)
class EdgeSegment:
    """An 8-connected chain of edge pixels with its bounding corners."""

    chain: np.ndarray  # (n, 2) int64, columns (x, y) in traversal order
    length: int
    min_corner: tuple[int, int]
    max_corner: tuple[int, int]

    @classmethod
    def from_chain(cls, chain: Sequence[tuple[int, int]] | np.ndarray) -> "EdgeSegment":
        arr = np.asarray(chain, dtype=np.int64).reshape(-1, 2)
        if arr.shape[0] < 1:
            raise RegionError("edge segment needs at least one pixel")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        return cls(
            chain=arr,
            length=arr.shape[0],
            min_corner=(int(arr[:, 0].min()), int(arr[:, 1].min())),
            max_corner=(int(arr[:, 0].max()), int(arr[:, 1].max())),
        )

    @property
    def center_x(self) -> float:
        return (self.min_corner[0] + self.max_corner[0]) / 2.0


@dataclass(frozen=True)
class SmileVerdict:
    is_smile: bool
    n_e: int
    total: int
    ratio: float


@dataclass(frozen=True)
class TemplateParams:
    canny_low: float = 50.0
    canny_high: float = 150.0
    at_window: int = 11
    at_offset: float = 2.0


def grayscale(rgb: np.ndarray) -> np.ndarray:
    """ITU-R 601 luma: 0.299 R + 0.587 G + 0.114 B, float64."""
    rgb = np.asarray(rgb, dtype=np.float64)
    return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]


def _check_roi(roi: Roi, shape: tuple[int, int], what: str) -> None:
    h, w = shape
    if roi.w <= 0 or roi.h <= 0:
        raise RegionError(f"{what} ROI is empty: {roi}")
    if roi.x < 0 or roi.y < 0 or roi.x + roi.w > w or roi.y + roi.h > h:
        raise RegionError(f"{what} ROI {roi} outside {w}x{h} raster")


def skin_mask(rgb: np.ndarray, face: Roi) -> np.ndarray:
    """Binary skin mask inside the face ROI (zero elsewhere).

    A pixel is skin iff R>95, G>40, B>20, max-min spread > 15,
    |R-G| > 15, R > G and R > B.
    """
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise RegionError(f"expected (h, w, 3) raster, got {rgb.shape}")
    _check_roi(face, rgb.shape[:2], "face")
    mask = np.zeros(rgb.shape[:2], dtype=np.uint8)
    window = rgb[face.y : face.y + face.h, face.x : face.x + face.w].astype(np.int16)
    r, g, b = window[..., 0], window[..., 1], window[..., 2]
    spread = window.max(axis=2) - window.min(axis=2)
    skin = (
        (r > 95)
        & (g > 40)
        & (b > 20)
        & (spread > 15)
        & (np.abs(r - g) > 15)
        & (r > g)
        & (r > b)
    )
    mask[face.y : face.y + face.h, face.x : face.x + face.w] = skin.astype(np.uint8)
    return mask


def adaptive_threshold(gray: np.ndarray, window: int = 11, offset: float = 2.0) -> np.ndarray:
    """Pixel set iff value > (edge-clamped window mean) - offset."""
    if window < 3 or window % 2 == 0:
        raise ParameterError(f"window must be odd and >= 3, got {window}")
    gray = np.ascontiguousarray(np.asarray(gray, dtype=np.float64))
    return kernels.box_mean_threshold(gray, window, float(offset))


def canny_gradient(gray: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smoothed Sobel gradient (magnitude, gx, gy) used by canny_edges."""
    gray = np.ascontiguousarray(np.asarray(gray, dtype=np.float64))
    smoothed = kernels.convolve_replicate(gray, _GAUSS)
    gx = kernels.convolve_replicate(smoothed, SOBEL_X)
    gy = kernels.convolve_replicate(smoothed, SOBEL_Y)
    mag = np.sqrt(gx * gx + gy * gy)
    return mag, gx, gy


def canny_edges(gray: np.ndarray, low: float = 50.0, high: float = 150.0) -> np.ndarray:
    """Canny detector: Gaussian 5x5 sigma 1.4, Sobel, NMS, hysteresis.

    Returns a uint8 edge map. Thresholds apply to the raw Sobel magnitude
    of the smoothed image (0..255-scale input assumed but not required).
    """
    if low < 0 or low > high:
        raise ParameterError(f"need 0 <= low <= high, got low={low} high={high}")
    mag, gx, gy = canny_gradient(gray)
    nms = kernels.gradient_nms(mag, gx, gy)
    return kernels.hysteresis(mag, nms, float(low), float(high))


def link_edges(edge_map: np.ndarray, region: Roi) -> list[EdgeSegment]:
    """8-connected components of edge pixels inside the region.

    Chains are reported in image coordinates; connectivity is evaluated
    within the region, so a component touching the border is clipped.
    """
    edge_map = np.asarray(edge_map)
    _check_roi(region, edge_map.shape, "link")
    sub = np.ascontiguousarray(
        edge_map[region.y : region.y + region.h, region.x : region.x + region.w]
    )
    xs, ys, starts = kernels.label_components(sub)
    segments = []
    for s, e in zip(starts[:-1], starts[1:]):
        chain = np.column_stack([xs[s:e] + region.x, ys[s:e] + region.y])
        segments.append(EdgeSegment.from_chain(chain))
    return segments


def _qualifies(segment: EdgeSegment, mouth: MouthRegion, t: float) -> Optional[str]:
    """Which half rule the segment satisfies, or None."""
    if segment.length >= t:
        return None
    if segment.center_x <= mouth.center_x:
        # left half: min corner beyond the left-half centroid
        ax, ay = mouth.left_anchor
        if segment.min_corner[0] > ax and segment.min_corner[1] > ay:
            return "left"
        return None
    ax, ay = mouth.right_anchor
    if segment.max_corner[0] > ax and segment.max_corner[1] > ay:
        return "right"
    return None


def detect_smile(segments: Sequence[EdgeSegment], mouth: MouthRegion) -> SmileVerdict:
    """Apply the smile rules to linked edge segments.

    t = m_l / 8. A left-half segment qualifies iff its length < t and its
    min corner exceeds the left-half centroid; a right-half segment iff
    its length < t and its max corner exceeds the right-half centroid.
    Smile iff each half has a qualifying segment and the qualifying
    fraction exceeds 0.05.
    """
    t = mouth.m_l / 8.0
    n_left = 0
    n_right = 0
    for seg in segments:
        half = _qualifies(seg, mouth, t)
        if half == "left":
            n_left += 1
        elif half == "right":
            n_right += 1
    n_e = n_left + n_right
    total = len(segments)
    ratio = n_e / total if total else 0.0
    is_smile = n_left >= 1 and n_right >= 1 and ratio > SMILE_RATIO_THRESHOLD
    return SmileVerdict(is_smile=is_smile, n_e=n_e, total=total, ratio=ratio)


def snapshot_schedule(timestamps: Sequence[float], interval: float = 5.0) -> list[int]:
    """Indices of the first frame at or after each interval multiple.

    Multiples count from the stream start; a gap can make one frame serve
    several ticks.
    """
    ts = list(timestamps)
    if not ts:
        return []
    start = ts[0]
    last = ts[-1]
    picks = []
    k = 0
    i = 0
    while True:
        target = start + k * interval
        if target > last:
            break
        while ts[i] < target:
            i += 1
        picks.append(i)
        k += 1
    return picks


def template_analyze(
    rgb: np.ndarray,
    face: Roi,
    mouth: Roi,
    params: TemplateParams = TemplateParams(),
) -> tuple[Optional[Emotion], SmileVerdict]:
    """Run the full template chain; returns (decision, verdict)."""
    rgb = np.asarray(rgb)
    _check_roi(face, rgb.shape[:2], "face")
    _check_roi(mouth, rgb.shape[:2], "mouth")
    if not (
        face.x <= mouth.x
        and face.y <= mouth.y
        and mouth.x + mouth.w <= face.x + face.w
        and mouth.y + mouth.h <= face.y + face.h
    ):
        raise RegionError(f"mouth ROI {mouth} not nested in face ROI {face}")
    skin = skin_mask(rgb, face)
    gray = grayscale(rgb) * skin
    binary = adaptive_threshold(gray, params.at_window, params.at_offset)
    edges = canny_edges(binary.astype(np.float64) * 255.0, params.canny_low, params.canny_high)
    segments = link_edges(edges, mouth)
    verdict = detect_smile(segments, MouthRegion.from_roi(mouth))
    decision = Emotion.HAPPINESS if verdict.is_smile else None
    return decision, verdict


def template_classify(
    rgb: np.ndarray,
    face: Roi,
    mouth: Roi,
    params: TemplateParams = TemplateParams(),
) -> Optional[Emotion]:
    """Smile -> happiness, anything else abstains (None)."""
    decision, _ = template_analyze(rgb, face, mouth, params)
    return decision
