"""Vectorized numpy implementations of the hot kernels.

This is the fallback path used when numba is unavailable or disabled via
``AFFECTPIPE_BACKEND=numpy``. Each function has a loop twin in
``_numba.py`` with the same signature and, for integer-valued images,
bit-identical output (floating accumulation order is matched per pixel).
"""
from __future__ import annotations

import numpy as np

# Direction-bin constants shared with the numba twin. tan(22.5 deg) and
# tan(67.5 deg): |gy| <= |gx|*TAN_LO means the gradient is horizontal,
# |gy| >= |gx|*TAN_HI vertical, anything between diagonal.
TAN_LO = 0.41421356237309503
TAN_HI = 2.414213562373095


def pairwise_geometry(points):
    """Distances and four-quadrant angles for all pairs i < j (lex order).

    Returns (dist, angle, degenerate) where degenerate flags coincident
    pairs; their angle slot is 0.
    """
    m = points.shape[0]
    i_idx, j_idx = np.triu_indices(m, k=1)
    dx = points[j_idx, 0] - points[i_idx, 0]
    dy = points[j_idx, 1] - points[i_idx, 1]
    dist = np.sqrt(dx * dx + dy * dy)
    angle = np.arctan2(dy, dx)
    degenerate = (dx == 0.0) & (dy == 0.0)
    angle[degenerate] = 0.0
    return dist, angle, degenerate.astype(np.uint8)


def box_mean_threshold(gray, window, offset):
    """Binary mask: pixel > mean of its edge-clamped window minus offset."""
    r = window // 2
    padded = np.pad(gray, r, mode="edge")
    # integral image with a zero top row/left column
    integral = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.float64)
    integral[1:, 1:] = padded.cumsum(axis=0).cumsum(axis=1)
    h, w = gray.shape
    s = (
        integral[window:, window:]
        - integral[:-window, window:]
        - integral[window:, :-window]
        + integral[:-window, :-window]
    )
    mean = s / float(window * window)
    return (gray > mean - offset).astype(np.uint8)


def convolve_replicate(img, kernel):
    """2-D correlation with replicate (edge-clamped) borders.

    Accumulates taps in row-major kernel order so the per-pixel floating
    sum matches the numba twin exactly.
    """
    kh, kw = kernel.shape
    rh, rw = kh // 2, kw // 2
    padded = np.pad(img, ((rh, rh), (rw, rw)), mode="edge")
    h, w = img.shape
    out = np.zeros((h, w), dtype=np.float64)
    for i in range(kh):
        for j in range(kw):
            out += kernel[i, j] * padded[i : i + h, j : j + w]
    return out


def gradient_nms(mag, gx, gy):
    """Non-maximum suppression along the quantized gradient direction.

    Keeps a pixel iff its magnitude is > the backward neighbor and >= the
    forward neighbor, so a two-pixel plateau thins to one pixel.
    """
    h, w = mag.shape
    out = np.zeros((h, w), dtype=np.uint8)
    if h < 3 or w < 3:
        return out
    ax = np.abs(gx)
    ay = np.abs(gy)
    horiz = ay <= ax * TAN_LO
    vert = ay >= ax * TAN_HI
    diag_main = ~horiz & ~vert & (gx * gy > 0.0)
    diag_anti = ~horiz & ~vert & ~diag_main

    interior = np.zeros((h, w), dtype=bool)
    interior[1:-1, 1:-1] = True
    active = interior & (mag > 0.0)

    for sel, (dr, dc) in (
        (horiz, (0, 1)),
        (diag_main, (1, 1)),
        (vert, (1, 0)),
        (diag_anti, (1, -1)),
    ):
        rows, cols = np.nonzero(active & sel)
        if rows.size == 0:
            continue
        fwd = mag[rows + dr, cols + dc]
        bwd = mag[rows - dr, cols - dc]
        keep = (mag[rows, cols] >= fwd) & (mag[rows, cols] > bwd)
        out[rows[keep], cols[keep]] = 1
    return out


def hysteresis(mag, nms_mask, low, high):
    """Double threshold plus 8-connected linking of weak pixels to strong."""
    weak = (nms_mask != 0) & (mag >= low)
    strong = weak & (mag >= high)
    result = strong.copy()
    while True:
        grown = np.zeros_like(result)
        grown[1:, :] |= result[:-1, :]
        grown[:-1, :] |= result[1:, :]
        grown[:, 1:] |= result[:, :-1]
        grown[:, :-1] |= result[:, 1:]
        grown[1:, 1:] |= result[:-1, :-1]
        grown[1:, :-1] |= result[:-1, 1:]
        grown[:-1, 1:] |= result[1:, :-1]
        grown[:-1, :-1] |= result[1:, 1:]
        new = result | (grown & weak)
        if np.array_equal(new, result):
            break
        result = new
    return result.astype(np.uint8)


def label_components(mask):
    """8-connected components of a binary mask, row-major discovery order.

    Returns (xs, ys, starts): flattened pixel chains in traversal order
    plus CSR-style start offsets, one extra entry at the end. Traversal is
    depth-first with neighbors pushed in a fixed order, identical to the
    numba twin.
    """
    h, w = mask.shape
    visited = np.zeros((h, w), dtype=np.uint8)
    xs: list[int] = []
    ys: list[int] = []
    starts: list[int] = [0]
    stack: list[tuple[int, int]] = []
    for r in range(h):
        for c in range(w):
            if mask[r, c] == 0 or visited[r, c]:
                continue
            stack.append((r, c))
            visited[r, c] = 1
            while stack:
                cr, cc = stack.pop()
                xs.append(cc)
                ys.append(cr)
                for dr in (-1, 0, 1):
                    for dc in (-1, 0, 1):
                        if dr == 0 and dc == 0:
                            continue
                        nr, nc = cr + dr, cc + dc
                        if 0 <= nr < h and 0 <= nc < w:
                            if mask[nr, nc] != 0 and not visited[nr, nc]:
                                visited[nr, nc] = 1
                                stack.append((nr, nc))
            starts.append(len(xs))
    return (
        np.asarray(xs, dtype=np.int64),
        np.asarray(ys, dtype=np.int64),
        np.asarray(starts, dtype=np.int64),
    )


def svm_accumulate(x_aug, y_slot, n_classes, order, lam):
    """Pegasos-form one-vs-rest accumulation over a fixed sample order.

    With step size 1/(lam*t) the iterate satisfies w_t = V_t/(t-1), so only
    hinge violations touch V; the caller divides by the total step count.
    Returns V of shape (n_classes, dim).
    """
    dim = x_aug.shape[1]
    v = np.zeros((n_classes, dim), dtype=np.float64)
    class_ids = np.arange(n_classes)
    inv_lam = 1.0 / lam
    for step, sample in enumerate(order, start=1):
        x = x_aug[sample]
        yvec = np.where(class_ids == y_slot[sample], 1.0, -1.0)
        if step == 1:
            margins = np.zeros(n_classes)
        else:
            margins = yvec * (v @ x) / (step - 1)
        viol = margins < 1.0
        if np.any(viol):
            v[viol] += (yvec[viol] * inv_lam)[:, None] * x
    return v
