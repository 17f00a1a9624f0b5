"""Numba loop implementations of the hot kernels.

Same signatures and semantics as ``_numpy``; per-pixel floating
accumulation order is kept identical so integer-valued images produce
bit-identical masks on both backends.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._numpy import TAN_HI, TAN_LO


@njit(cache=True)
def pairwise_geometry(points):
    m = points.shape[0]
    n_pairs = m * (m - 1) // 2
    dist = np.empty(n_pairs, dtype=np.float64)
    angle = np.empty(n_pairs, dtype=np.float64)
    degenerate = np.zeros(n_pairs, dtype=np.uint8)
    k = 0
    for i in range(m):
        for j in range(i + 1, m):
            dx = points[j, 0] - points[i, 0]
            dy = points[j, 1] - points[i, 1]
            dist[k] = math.sqrt(dx * dx + dy * dy)
            if dx == 0.0 and dy == 0.0:
                angle[k] = 0.0
                degenerate[k] = 1
            else:
                angle[k] = math.atan2(dy, dx)
            k += 1
    return dist, angle, degenerate


@njit(cache=True)
def box_mean_threshold(gray, window, offset):
    h, w = gray.shape
    r = window // 2
    out = np.zeros((h, w), dtype=np.uint8)
    count = float(window * window)
    for i in range(h):
        for j in range(w):
            s = 0.0
            for di in range(-r, r + 1):
                ii = i + di
                if ii < 0:
                    ii = 0
                elif ii >= h:
                    ii = h - 1
                for dj in range(-r, r + 1):
                    jj = j + dj
                    if jj < 0:
                        jj = 0
                    elif jj >= w:
                        jj = w - 1
                    s += gray[ii, jj]
            if gray[i, j] > s / count - offset:
                out[i, j] = 1
    return out


@njit(cache=True)
def convolve_replicate(img, kernel):
    h, w = img.shape
    kh, kw = kernel.shape
    rh = kh // 2
    rw = kw // 2
    out = np.zeros((h, w), dtype=np.float64)
    for r in range(h):
        for c in range(w):
            acc = 0.0
            for i in range(kh):
                rr = r + i - rh
                if rr < 0:
                    rr = 0
                elif rr >= h:
                    rr = h - 1
                for j in range(kw):
                    cc = c + j - rw
                    if cc < 0:
                        cc = 0
                    elif cc >= w:
                        cc = w - 1
                    acc += kernel[i, j] * img[rr, cc]
            out[r, c] = acc
    return out


@njit(cache=True)
def gradient_nms(mag, gx, gy):
    h, w = mag.shape
    out = np.zeros((h, w), dtype=np.uint8)
    if h < 3 or w < 3:
        return out
    for r in range(1, h - 1):
        for c in range(1, w - 1):
            m = mag[r, c]
            if m <= 0.0:
                continue
            x = gx[r, c]
            y = gy[r, c]
            ax = abs(x)
            ay = abs(y)
            if ay <= ax * TAN_LO:
                dr, dc = 0, 1
            elif ay >= ax * TAN_HI:
                dr, dc = 1, 0
            elif x * y > 0.0:
                dr, dc = 1, 1
            else:
                dr, dc = 1, -1
            if m >= mag[r + dr, c + dc] and m > mag[r - dr, c - dc]:
                out[r, c] = 1
    return out


@njit(cache=True)
def hysteresis(mag, nms_mask, low, high):
    h, w = mag.shape
    result = np.zeros((h, w), dtype=np.uint8)
    stack_r = np.empty(h * w, dtype=np.int64)
    stack_c = np.empty(h * w, dtype=np.int64)
    top = 0
    for r in range(h):
        for c in range(w):
            if nms_mask[r, c] != 0 and mag[r, c] >= high:
                result[r, c] = 1
                stack_r[top] = r
                stack_c[top] = c
                top += 1
    while top > 0:
        top -= 1
        cr = stack_r[top]
        cc = stack_c[top]
        for dr in range(-1, 2):
            for dc in range(-1, 2):
                if dr == 0 and dc == 0:
                    continue
                nr = cr + dr
                nc = cc + dc
                if 0 <= nr < h and 0 <= nc < w:
                    if (
                        result[nr, nc] == 0
                        and nms_mask[nr, nc] != 0
                        and mag[nr, nc] >= low
                    ):
                        result[nr, nc] = 1
                        stack_r[top] = nr
                        stack_c[top] = nc
                        top += 1
    return result


@njit(cache=True)
def label_components(mask):
    h, w = mask.shape
    visited = np.zeros((h, w), dtype=np.uint8)
    total = int(np.sum(mask != 0))
    xs = np.empty(total, dtype=np.int64)
    ys = np.empty(total, dtype=np.int64)
    starts = np.empty(total + 1, dtype=np.int64)
    starts[0] = 0
    n_out = 0
    n_seg = 0
    stack_r = np.empty(total if total > 0 else 1, dtype=np.int64)
    stack_c = np.empty(total if total > 0 else 1, dtype=np.int64)
    for r in range(h):
        for c in range(w):
            if mask[r, c] == 0 or visited[r, c] != 0:
                continue
            top = 0
            stack_r[top] = r
            stack_c[top] = c
            top += 1
            visited[r, c] = 1
            while top > 0:
                top -= 1
                cr = stack_r[top]
                cc = stack_c[top]
                xs[n_out] = cc
                ys[n_out] = cr
                n_out += 1
                for dr in range(-1, 2):
                    for dc in range(-1, 2):
                        if dr == 0 and dc == 0:
                            continue
                        nr = cr + dr
                        nc = cc + dc
                        if 0 <= nr < h and 0 <= nc < w:
                            if mask[nr, nc] != 0 and visited[nr, nc] == 0:
                                visited[nr, nc] = 1
                                stack_r[top] = nr
                                stack_c[top] = nc
                                top += 1
            n_seg += 1
            starts[n_seg] = n_out
    return xs[:n_out], ys[:n_out], starts[: n_seg + 1]


@njit(cache=True)
def svm_accumulate(x_aug, y_slot, n_classes, order, lam):
    dim = x_aug.shape[1]
    v = np.zeros((n_classes, dim), dtype=np.float64)
    inv_lam = 1.0 / lam
    for step in range(1, order.shape[0] + 1):
        sample = order[step - 1]
        slot = y_slot[sample]
        for c in range(n_classes):
            yc = 1.0 if c == slot else -1.0
            if step == 1:
                margin = 0.0
            else:
                score = 0.0
                for j in range(dim):
                    score += v[c, j] * x_aug[sample, j]
                margin = yc * score / (step - 1)
            if margin < 1.0:
                coef = yc * inv_lam
                for j in range(dim):
                    v[c, j] += coef * x_aug[sample, j]
    return v
